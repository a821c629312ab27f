#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hh {

using QubitId = std::uint32_t;

// xz encoding: low bit = X component, high bit = Z component
enum class PauliKind : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_char(PauliKind p) { return "IXZY"[int(p)]; }

inline PauliKind pauli_from_char(char c) {
    switch (c) {
        case 'I': return PauliKind::I;
        case 'X': return PauliKind::X;
        case 'Y': return PauliKind::Y;
        case 'Z': return PauliKind::Z;
        default: throw std::invalid_argument(std::string("bad pauli char: ") + c);
    }
}

// n-qubit Pauli as X/Z bit masks. xz encoding: X=(1,0), Z=(0,1), Y=(1,1).
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t n) : n_(n), words_((n + 63) / 64) {
        x_.assign(words_, 0);
        z_.assign(words_, 0);
    }

    std::size_t num_qubits() const { return n_; }

    bool x_bit(QubitId q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
    bool z_bit(QubitId q) const { return (z_[q >> 6] >> (q & 63)) & 1; }

    void set(QubitId q, PauliKind p) {
        std::uint64_t m = 1ull << (q & 63);
        x_[q >> 6] = (x_[q >> 6] & ~m) | ((int(p) & 1) ? m : 0);
        z_[q >> 6] = (z_[q >> 6] & ~m) | ((int(p) & 2) ? m : 0);
    }
    PauliKind get(QubitId q) const {
        return PauliKind((x_bit(q) ? 1 : 0) | (z_bit(q) ? 2 : 0));
    }
    void mul_x(QubitId q) { x_[q >> 6] ^= 1ull << (q & 63); }
    void mul_z(QubitId q) { z_[q >> 6] ^= 1ull << (q & 63); }

    void clear(QubitId q) { set(q, PauliKind::I); }

    bool identity() const {
        for (std::size_t w = 0; w < words_; ++w)
            if (x_[w] | z_[w]) return false;
        return true;
    }
    bool identity_on(const std::vector<QubitId>& qs) const {
        for (QubitId q : qs)
            if (get(q) != PauliKind::I) return false;
        return true;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::size_t i = 0; i < words_; ++i)
            w += std::size_t(__builtin_popcountll(x_[i] | z_[i]));
        return w;
    }

    // symplectic inner product: 1 when the operators anticommute
    bool anticommutes(const PauliString& o) const {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w)
            acc ^= (x_[w] & o.z_[w]) ^ (z_[w] & o.x_[w]);
        return __builtin_popcountll(acc) & 1;
    }

    void mul(const PauliString& o) {  // sign-free product
        for (std::size_t w = 0; w < words_; ++w) {
            x_[w] ^= o.x_[w];
            z_[w] ^= o.z_[w];
        }
    }

    // conjugation by circuit gates, usable forward or backward (self-inverse maps)
    void conj_h(QubitId q) {
        bool xb = x_bit(q), zb = z_bit(q);
        set(q, PauliKind((zb ? 1 : 0) | (xb ? 2 : 0)));
    }
    void conj_cx(QubitId c, QubitId t) {
        if (x_bit(c)) mul_x(t);
        if (z_bit(t)) mul_z(c);
    }

    std::vector<QubitId> support() const {
        std::vector<QubitId> s;
        for (QubitId q = 0; q < n_; ++q)
            if (get(q) != PauliKind::I) s.push_back(q);
        return s;
    }

    std::string str() const {
        std::string s;
        for (QubitId q : support()) {
            if (!s.empty()) s += ' ';
            s += pauli_char(get(q));
            s += std::to_string(q);
        }
        return s.empty() ? "I" : s;
    }

  private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> x_, z_;
};

// Sparse signed Pauli operator used by the code layout (gauge/stabilizer/logicals).
struct PauliOperator {
    std::map<QubitId, PauliKind> support;  // non-identity entries only
    int sign = +1;

    bool anticommutes(const PauliOperator& o) const {
        int count = 0;
        for (const auto& [q, p] : support) {
            auto it = o.support.find(q);
            if (it == o.support.end()) continue;
            if (it->second != p) ++count;  // distinct non-identity Paulis anticommute
        }
        return count & 1;
    }

    std::size_t weight() const { return support.size(); }
};

}  // namespace hh
