#include "hh/dense_engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "hh/rng.hpp"

namespace hh {

namespace {

using cplx = std::complex<double>;

std::map<QubitId, std::size_t> local_index(const Circuit& c) {
    std::map<QubitId, std::size_t> idx;
    for (std::size_t i = 0; i < c.qubits.size(); ++i) idx[c.qubits[i]] = i;
    return idx;
}

// ---------------------------------------------------------------- statevector

class StateVector {
  public:
    explicit StateVector(std::size_t n) : n_(n), amp_(std::size_t(1) << n, 0) {
        amp_[0] = 1.0;
    }

    void apply_1q(std::size_t q, const cplx m[2][2]) {
        const std::size_t bit = std::size_t(1) << q;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if (i & bit) continue;
            cplx a0 = amp_[i], a1 = amp_[i | bit];
            amp_[i] = m[0][0] * a0 + m[0][1] * a1;
            amp_[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    void h(std::size_t q) {
        const double s = 1.0 / std::sqrt(2.0);
        const cplx m[2][2] = {{s, s}, {s, -s}};
        apply_1q(q, m);
    }
    void x(std::size_t q) {
        const cplx m[2][2] = {{0, 1}, {1, 0}};
        apply_1q(q, m);
    }
    void z(std::size_t q) {
        const cplx m[2][2] = {{1, 0}, {0, -1}};
        apply_1q(q, m);
    }
    void y(std::size_t q) {
        const cplx m[2][2] = {{0, cplx(0, -1)}, {cplx(0, 1), 0}};
        apply_1q(q, m);
    }
    void cx(std::size_t c, std::size_t t) {
        const std::size_t cb = std::size_t(1) << c, tb = std::size_t(1) << t;
        for (std::size_t i = 0; i < amp_.size(); ++i)
            if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
    }

    double prob_one(std::size_t q) const {
        const std::size_t bit = std::size_t(1) << q;
        double p = 0;
        for (std::size_t i = 0; i < amp_.size(); ++i)
            if (i & bit) p += std::norm(amp_[i]);
        return p;
    }

    void collapse(std::size_t q, int value) {
        const std::size_t bit = std::size_t(1) << q;
        double p = 0;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            bool one = (i & bit) != 0;
            if (one != (value == 1)) amp_[i] = 0;
            else p += std::norm(amp_[i]);
        }
        renormalize(p);
    }

    void renormalize(double p) {
        if (p <= 0) throw std::runtime_error("collapse onto zero-probability branch");
        double s = 1.0 / std::sqrt(p);
        for (auto& a : amp_) a *= s;
    }

    double norm() const {
        double p = 0;
        for (const auto& a : amp_) p += std::norm(a);
        return p;
    }

    // amplitude damping Kraus pair, trajectory style
    void damp(std::size_t q, double gamma, ShotRng& rng) {
        double p1 = prob_one(q);
        double p_decay = gamma * p1;
        const std::size_t bit = std::size_t(1) << q;
        if (rng.next_double() < p_decay) {
            // K1 = sqrt(gamma) |0><1|
            for (std::size_t i = 0; i < amp_.size(); ++i) {
                if (i & bit) {
                    amp_[i & ~bit] = amp_[i];
                    amp_[i] = 0;
                }
            }
            renormalize(norm());
        } else {
            // K0 = diag(1, sqrt(1-gamma))
            double s = std::sqrt(1.0 - gamma);
            for (std::size_t i = 0; i < amp_.size(); ++i)
                if (i & bit) amp_[i] *= s;
            renormalize(norm());
        }
    }

    std::size_t n_;
    std::vector<cplx> amp_;
};

void apply_sampled_pauli(StateVector& sv, std::size_t q, int code) {
    switch (code) {
        case 1: sv.x(q); break;
        case 2: sv.z(q); break;
        case 3: sv.y(q); break;
        default: break;
    }
}

// -------------------------------------------------------------- density matrix

class Density {
  public:
    explicit Density(std::size_t n) : n_(n), dim_(std::size_t(1) << n),
                                      rho_(dim_ * dim_, 0) {
        rho_[0] = 1.0;
    }

    cplx& at(std::size_t r, std::size_t c) { return rho_[r * dim_ + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return rho_[r * dim_ + c]; }

    void apply_1q(std::size_t q, const cplx m[2][2]) {
        const std::size_t bit = std::size_t(1) << q;
        // kets
        for (std::size_t c = 0; c < dim_; ++c)
            for (std::size_t r = 0; r < dim_; ++r) {
                if (r & bit) continue;
                cplx a0 = at(r, c), a1 = at(r | bit, c);
                at(r, c) = m[0][0] * a0 + m[0][1] * a1;
                at(r | bit, c) = m[1][0] * a0 + m[1][1] * a1;
            }
        // bras (conjugate)
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) {
                if (c & bit) continue;
                cplx a0 = at(r, c), a1 = at(r, c | bit);
                at(r, c) = std::conj(m[0][0]) * a0 + std::conj(m[0][1]) * a1;
                at(r, c | bit) = std::conj(m[1][0]) * a0 + std::conj(m[1][1]) * a1;
            }
    }

    void h(std::size_t q) {
        const double s = 1.0 / std::sqrt(2.0);
        const cplx m[2][2] = {{s, s}, {s, -s}};
        apply_1q(q, m);
    }
    void x(std::size_t q) {
        const cplx m[2][2] = {{0, 1}, {1, 0}};
        apply_1q(q, m);
    }
    void cx(std::size_t qc, std::size_t qt) {
        const std::size_t cb = std::size_t(1) << qc, tb = std::size_t(1) << qt;
        auto permute = [&](std::size_t i) {
            return (i & cb) ? (i ^ tb) : i;
        };
        std::vector<cplx> out(rho_.size(), 0);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c)
                out[permute(r) * dim_ + permute(c)] = at(r, c);
        rho_ = std::move(out);
    }

    // rho -> sum_k p_k sigma_k rho sigma_k for a 1q Pauli table (xz codes)
    void pauli_channel_1q(std::size_t q, const std::vector<double>& probs) {
        Density acc(n_);
        std::fill(acc.rho_.begin(), acc.rho_.end(), cplx(0));
        for (int e = 0; e < 4; ++e) {
            if (probs[e] == 0) continue;
            Density tmp = *this;
            tmp.apply_pauli(q, e);
            for (std::size_t i = 0; i < rho_.size(); ++i)
                acc.rho_[i] += probs[e] * tmp.rho_[i];
        }
        rho_ = std::move(acc.rho_);
    }

    void pauli_channel_2q(std::size_t qa, std::size_t qb,
                          const std::vector<double>& probs) {
        Density acc(n_);
        std::fill(acc.rho_.begin(), acc.rho_.end(), cplx(0));
        for (int e = 0; e < 16; ++e) {
            if (probs[e] == 0) continue;
            Density tmp = *this;
            tmp.apply_pauli(qa, e >> 2);
            tmp.apply_pauli(qb, e & 3);
            for (std::size_t i = 0; i < rho_.size(); ++i)
                acc.rho_[i] += probs[e] * tmp.rho_[i];
        }
        rho_ = std::move(acc.rho_);
    }

    void apply_pauli(std::size_t q, int code) {
        const cplx X[2][2] = {{0, 1}, {1, 0}};
        const cplx Z[2][2] = {{1, 0}, {0, -1}};
        const cplx Y[2][2] = {{0, cplx(0, -1)}, {cplx(0, 1), 0}};
        if (code == 1) apply_1q(q, X);
        else if (code == 2) apply_1q(q, Z);
        else if (code == 3) apply_1q(q, Y);
    }

    void damp(std::size_t q, double gamma) {
        const cplx K0[2][2] = {{1, 0}, {0, std::sqrt(1 - gamma)}};
        const cplx K1[2][2] = {{0, std::sqrt(gamma)}, {0, 0}};
        Density a = *this, b = *this;
        a.apply_1q(q, K0);
        b.apply_1q(q, K1);
        for (std::size_t i = 0; i < rho_.size(); ++i)
            rho_[i] = a.rho_[i] + b.rho_[i];
    }

    // project qubit q onto |v> and return the branch trace
    double project(std::size_t q, int v) {
        const std::size_t bit = std::size_t(1) << q;
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) {
                bool rk = ((r & bit) != 0) == (v == 1);
                bool ck = ((c & bit) != 0) == (v == 1);
                if (!rk || !ck) at(r, c) = 0;
            }
        return trace();
    }

    double trace() const {
        double t = 0;
        for (std::size_t r = 0; r < dim_; ++r) t += at(r, r).real();
        return t;
    }

    void scale(double s) {
        for (auto& a : rho_) a *= s;
    }

    std::size_t n_, dim_;
    std::vector<cplx> rho_;
};

}  // namespace

std::map<std::string, double> exact_distribution(const Circuit& circuit,
                                                 const NoiseModel& model,
                                                 std::size_t max_qubits) {
    const std::size_t n = circuit.qubits.size();
    if (n > max_qubits)
        throw std::invalid_argument("exact_distribution: circuit exceeds qubit limit");
    if (circuit.num_bits() > 14)
        throw std::invalid_argument("exact_distribution: too many measured bits");
    auto idx = local_index(circuit);
    NoisyCircuit noisy = attach_noise(circuit, model);

    struct Branch {
        std::string bits;
        double weight;
        Density rho;
    };

    // initial product state, with SPAM preparation flips mixed in
    Density rho0(n);
    for (std::size_t i = 0; i < circuit.meta.data_qubits.size(); ++i) {
        std::size_t q = idx.at(circuit.meta.data_qubits[i]);
        std::uint8_t bit = circuit.meta.input_bits.at(i);
        double flip = 0.0;
        if (model.confusion) {
            const auto& cm = model.confusion->confusion;
            flip = bit ? cm[1][0] : cm[0][1];
        }
        // prepare |bit> (or H|bit>) with probability 1-flip, the opposite with flip
        if (bit) rho0.x(q);
        if (flip > 0) {
            Density alt = rho0;
            alt.x(q);
            rho0.scale(1 - flip);
            for (std::size_t k = 0; k < rho0.rho_.size(); ++k)
                rho0.rho_[k] += flip * alt.rho_[k];
        }
        if (circuit.meta.input_basis == Basis::x) rho0.h(q);
    }

    std::vector<Branch> branches;
    branches.push_back({std::string(circuit.num_bits(), '0'), 1.0, std::move(rho0)});

    // instruction-aligned fault locations (skip prep flips, already applied)
    std::vector<const FaultLocation*> instr_locs;
    for (const auto& loc : noisy.locations)
        if (loc.kind != LocationKind::prep_flip) instr_locs.push_back(&loc);

    std::size_t k = 0;
    for (const auto& step : circuit.timesteps) {
        for (const auto& ins : step) {
            const FaultLocation& loc = *instr_locs.at(k++);
            std::vector<Branch> next;
            for (auto& br : branches) {
                switch (ins.kind) {
                    case OpKind::reset: {
                        std::size_t q = idx.at(ins.q0);
                        // trace out and reprepare
                        Density r0 = br.rho;
                        r0.project(q, 0);
                        Density r1 = br.rho;
                        r1.project(q, 1);
                        r1.x(q);  // |1><1| branch flipped back to |0>
                        for (std::size_t i = 0; i < r0.rho_.size(); ++i)
                            r0.rho_[i] += r1.rho_[i];
                        br.rho = std::move(r0);
                        if (ins.basis == Basis::x) br.rho.h(q);
                        break;
                    }
                    case OpKind::hadamard: br.rho.h(idx.at(ins.q0)); break;
                    case OpKind::pauli_x: br.rho.x(idx.at(ins.q0)); break;
                    case OpKind::cnot:
                        br.rho.cx(idx.at(ins.q0), idx.at(ins.q1));
                        break;
                    case OpKind::measure: {
                        std::size_t q = idx.at(ins.q0);
                        Density pre = br.rho;
                        if (ins.basis == Basis::x) pre.h(q);
                        for (int v = 0; v < 2; ++v) {
                            Density proj = pre;
                            double pv = proj.project(q, v);
                            if (pv <= 1e-15) continue;
                            proj.scale(1.0 / pv);
                            if (ins.basis == Basis::x) proj.h(q);
                            double f = loc.probs.empty() ? 0.0 : loc.probs[v];
                            for (int rec = 0; rec < 2; ++rec) {
                                double w = rec == v ? 1 - f : f;
                                if (w <= 0) continue;
                                Branch nb{br.bits, br.weight * pv * w, proj};
                                nb.bits[ins.cbit] = char('0' + rec);
                                next.push_back(std::move(nb));
                            }
                        }
                        break;
                    }
                    case OpKind::idle: break;
                }
                if (ins.kind != OpKind::measure) {
                    // channel after the instruction
                    if (loc.kind == LocationKind::pauli1)
                        br.rho.pauli_channel_1q(idx.at(loc.q0), loc.probs);
                    else if (loc.kind == LocationKind::pauli2)
                        br.rho.pauli_channel_2q(idx.at(loc.q0), idx.at(loc.q1), loc.probs);
                    if (model.amp_damping_gamma && *model.amp_damping_gamma > 0 &&
                        loc.kind == LocationKind::pauli1)
                        br.rho.damp(idx.at(loc.q0), *model.amp_damping_gamma);
                    next.push_back(std::move(br));
                }
            }
            branches = std::move(next);
            if (branches.size() > 4096)
                throw std::runtime_error("exact_distribution: branch explosion");
        }
    }

    std::map<std::string, double> dist;
    for (const auto& br : branches) dist[br.bits] += br.weight;
    double total = 0;
    for (auto& [k2, v] : dist) total += v;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("exact_distribution: probabilities do not sum to 1");
    return dist;
}

SyndromeDataset run_trajectories(const NoisyCircuit& noisy, std::size_t shots,
                                 std::uint64_t seed, std::size_t max_qubits) {
    const Circuit& c = *noisy.circuit;
    const std::size_t n = c.qubits.size();
    if (n > max_qubits)
        throw std::invalid_argument("run_trajectories: circuit exceeds qubit limit");
    auto idx = local_index(c);

    std::vector<const FaultLocation*> prep_locs, instr_locs;
    for (const auto& loc : noisy.locations) {
        if (loc.kind == LocationKind::prep_flip) prep_locs.push_back(&loc);
        else instr_locs.push_back(&loc);
    }
    double gamma = noisy.model.amp_damping_gamma.value_or(0.0);

    SyndromeDataset ds;
    ds.meta = c.meta;
    ds.labels = c.classical_bits;
    ds.seed = seed;
    ds.source = "simulated";
    ds.shots.assign(shots, std::vector<std::uint8_t>(c.num_bits(), 0));

    for (std::size_t s = 0; s < shots; ++s) {
        ShotRng rng(seed, s);
        StateVector sv(n);
        // input state with preparation flips
        std::vector<std::uint8_t> bits = c.meta.input_bits;
        for (const FaultLocation* loc : prep_locs) {
            if (loc->probs[0] > 0 && rng.next_double() < loc->probs[0]) {
                auto it = std::find(c.meta.data_qubits.begin(), c.meta.data_qubits.end(),
                                    loc->q0);
                bits.at(std::size_t(it - c.meta.data_qubits.begin())) ^= 1;
            }
        }
        for (std::size_t i = 0; i < c.meta.data_qubits.size(); ++i) {
            std::size_t q = idx.at(c.meta.data_qubits[i]);
            if (bits[i]) sv.x(q);
            if (c.meta.input_basis == Basis::x) sv.h(q);
        }

        std::size_t k = 0;
        auto& row = ds.shots[s];
        for (const auto& step : c.timesteps) {
            for (const auto& ins : step) {
                const FaultLocation& loc = *instr_locs[k++];
                switch (ins.kind) {
                    case OpKind::reset: {
                        std::size_t q = idx.at(ins.q0);
                        double p1 = sv.prob_one(q);
                        int v = rng.next_double() < p1 ? 1 : 0;
                        sv.collapse(q, v);
                        if (v) sv.x(q);
                        if (ins.basis == Basis::x) sv.h(q);
                        break;
                    }
                    case OpKind::hadamard: sv.h(idx.at(ins.q0)); break;
                    case OpKind::pauli_x: sv.x(idx.at(ins.q0)); break;
                    case OpKind::cnot: sv.cx(idx.at(ins.q0), idx.at(ins.q1)); break;
                    case OpKind::measure: {
                        std::size_t q = idx.at(ins.q0);
                        if (ins.basis == Basis::x) sv.h(q);
                        double p1 = sv.prob_one(q);
                        int v = rng.next_double() < p1 ? 1 : 0;
                        sv.collapse(q, v);
                        if (ins.basis == Basis::x) sv.h(q);
                        if (!loc.probs.empty() && loc.probs[v] > 0 &&
                            rng.next_double() < loc.probs[v])
                            v ^= 1;
                        row[ins.cbit] = std::uint8_t(v);
                        break;
                    }
                    case OpKind::idle: break;
                }
                if (loc.kind == LocationKind::pauli1) {
                    double total = 1.0 - loc.probs[0];
                    if (total > 0) {
                        double u = rng.next_double();
                        if (u < total) {
                            double acc = 0;
                            int e = 1;
                            for (; e < 4; ++e) {
                                acc += loc.probs[e];
                                if (u < acc) break;
                            }
                            if (e > 3) e = 3;
                            apply_sampled_pauli(sv, idx.at(loc.q0), e);
                        }
                    }
                    if (gamma > 0) sv.damp(idx.at(loc.q0), gamma, rng);
                } else if (loc.kind == LocationKind::pauli2) {
                    double total = 1.0 - loc.probs[0];
                    if (total > 0) {
                        double u = rng.next_double();
                        if (u < total) {
                            double acc = 0;
                            int e = 1;
                            for (; e < 16; ++e) {
                                acc += loc.probs[e];
                                if (u < acc) break;
                            }
                            if (e > 15) e = 15;
                            apply_sampled_pauli(sv, idx.at(loc.q0), e >> 2);
                            apply_sampled_pauli(sv, idx.at(loc.q1), e & 3);
                        }
                    }
                }
            }
        }
    }
    return ds;
}

}  // namespace hh
