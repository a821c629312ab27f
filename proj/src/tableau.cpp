#include "hh/tableau.hpp"

namespace hh {

Tableau::Tableau(std::size_t n) : n_(n) {
    xb_.assign(2 * n, std::vector<std::uint8_t>(n, 0));
    zb_.assign(2 * n, std::vector<std::uint8_t>(n, 0));
    r_.assign(2 * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        xb_[i][i] = 1;        // destabilizer X_i
        zb_[n + i][i] = 1;    // stabilizer Z_i
    }
}

int Tableau::g_phase(int x1, int z1, int x2, int z2) const {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return z2 - x2;
    if (x1 && !z1) return z2 * (2 * x2 - 1);
    return x2 * (1 - 2 * z2);
}

void Tableau::rowsum(std::size_t h, std::size_t i) {
    int phase = 2 * r_[h] + 2 * r_[i];
    for (std::size_t q = 0; q < n_; ++q)
        phase += g_phase(xb_[i][q], zb_[i][q], xb_[h][q], zb_[h][q]);
    phase &= 3;
    r_[h] = phase == 2 ? 1 : 0;
    for (std::size_t q = 0; q < n_; ++q) {
        xb_[h][q] ^= xb_[i][q];
        zb_[h][q] ^= zb_[i][q];
    }
}

void Tableau::h(std::size_t q) {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        r_[i] ^= xb_[i][q] & zb_[i][q];
        std::swap(xb_[i][q], zb_[i][q]);
    }
}

void Tableau::x(std::size_t q) {
    for (std::size_t i = 0; i < 2 * n_; ++i) r_[i] ^= zb_[i][q];
}

void Tableau::cx(std::size_t c, std::size_t t) {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        r_[i] ^= xb_[i][c] & zb_[i][t] & (xb_[i][t] ^ zb_[i][c] ^ 1);
        xb_[i][t] ^= xb_[i][c];
        zb_[i][c] ^= zb_[i][t];
    }
}

Tableau::MeasureResult Tableau::measure_z(std::size_t q) {
    std::size_t p = 2 * n_;
    for (std::size_t i = n_; i < 2 * n_; ++i)
        if (xb_[i][q]) { p = i; break; }
    if (p < 2 * n_) {
        // random outcome; resolve to 0 for the reference run
        for (std::size_t i = 0; i < 2 * n_; ++i)
            if (i != p && xb_[i][q]) rowsum(i, p);
        xb_[p - n_] = xb_[p];
        zb_[p - n_] = zb_[p];
        r_[p - n_] = r_[p];
        std::fill(xb_[p].begin(), xb_[p].end(), 0);
        std::fill(zb_[p].begin(), zb_[p].end(), 0);
        zb_[p][q] = 1;
        r_[p] = 0;
        return {0, true};
    }
    // deterministic outcome
    std::vector<std::uint8_t> sx(n_, 0), sz(n_, 0);
    std::uint8_t sr = 0;
    auto scratch_sum = [&](std::size_t i) {
        int phase = 2 * sr + 2 * r_[i];
        for (std::size_t k = 0; k < n_; ++k)
            phase += g_phase(xb_[i][k], zb_[i][k], sx[k], sz[k]);
        phase &= 3;
        sr = phase == 2 ? 1 : 0;
        for (std::size_t k = 0; k < n_; ++k) {
            sx[k] ^= xb_[i][k];
            sz[k] ^= zb_[i][k];
        }
    };
    for (std::size_t i = 0; i < n_; ++i)
        if (xb_[i][q]) scratch_sum(i + n_);
    return {sr, false};
}

Tableau::MeasureResult Tableau::measure_x(std::size_t q) {
    h(q);
    auto r = measure_z(q);
    h(q);
    return r;
}

void Tableau::reset_z(std::size_t q) {
    auto m = measure_z(q);
    if (m.value) x(q);
}

void Tableau::reset_x(std::size_t q) {
    reset_z(q);
    h(q);
}

}  // namespace hh
