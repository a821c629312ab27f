#include "hh/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hh {

double mse(const RateVector& a, const RateVector& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mse: size mismatch or empty");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s / double(a.size());
}

double predictor_noise_floor(const RateVector& rates, long shots) {
    double s = 0;
    for (double r : rates) s += r * (1 - r) / double(shots);
    return s / double(rates.size());
}

double invert_rate(double rate, int m) {
    if (m < 1) throw std::invalid_argument("invert_rate: m must be >= 1");
    if (rate < 0 || rate >= 0.5)
        throw std::invalid_argument("invert_rate: rate must lie in [0, 1/2)");
    if (rate == 0) return 0.0;
    // closed form seed, then Newton polish on f(p) = (1-(1-p)^m)/2 - R
    double p = 1.0 - std::pow(1.0 - 2.0 * rate, 1.0 / m);
    for (int it = 0; it < 8; ++it) {
        double om = std::pow(1.0 - p, m - 1);
        double f = (1.0 - om * (1.0 - p)) / 2.0 - rate;
        double df = m * om / 2.0;
        if (df <= 0) break;
        double step = f / df;
        p -= step;
        p = std::clamp(p, 0.0, 1.0 - 1e-15);
        if (std::abs(step) < 1e-15) break;
    }
    return p;
}

namespace {

// golden-section minimization of a unimodal 1-D cost
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  long* evals, double tol = 1e-10) {
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    *evals += 2;
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
        ++(*evals);
    }
    return 0.5 * (a + b);
}

}  // namespace

FitResult fit_global_uniform(const RateVector& observed,
                             const std::function<RateVector(double)>& predictor) {
    if (observed.empty()) throw std::invalid_argument("fit_global: empty observations");
    FitResult res;
    res.variant = "uniform_depolarizing";
    long evals = 0;
    auto cost = [&](double p) { return mse(predictor(p), observed); };
    // coarse bracket, then golden section
    double best_p = 0, best_c = cost(0);
    ++evals;
    for (double p = 0.002; p <= 0.4001; p += 0.002) {
        double c = cost(p);
        ++evals;
        if (c < best_c) {
            best_c = c;
            best_p = p;
        }
    }
    double lo = std::max(0.0, best_p - 0.004), hi = std::min(0.4, best_p + 0.004);
    res.p = golden_min(cost, lo, hi, &evals);
    res.cost = cost(res.p);
    ++evals;
    res.evaluations = evals;
    res.p_bar = res.p;
    return res;
}

FitResult fit_global_biased(const RateVector& observed,
                            const std::function<RateVector(double, double)>& predictor) {
    if (observed.empty()) throw std::invalid_argument("fit_global: empty observations");
    FitResult res;
    res.variant = "biased";
    long evals = 0;
    auto cost = [&](double p, double eta) { return mse(predictor(p, eta), observed); };

    double best_p = 0.02, best_eta = 1.0, best_c = HUGE_VAL;
    for (double p = 0.005; p <= 0.2001; p += 0.005) {
        for (double le = -1.0; le <= 6.01; le += 0.25) {  // eta on a log2 grid
            double eta = std::pow(2.0, le);
            double c = cost(p, eta);
            ++evals;
            if (c < best_c) {
                best_c = c;
                best_p = p;
                best_eta = eta;
            }
        }
    }
    // alternate 1-D refinements
    for (int round = 0; round < 4; ++round) {
        double eta_fixed = best_eta;
        best_p = golden_min([&](double p) { return cost(p, eta_fixed); },
                            std::max(0.0, best_p - 0.01), std::min(0.5, best_p + 0.01),
                            &evals);
        double p_fixed = best_p;
        double le = std::log2(best_eta);
        double lbest = golden_min(
            [&](double l) { return cost(p_fixed, std::pow(2.0, l)); },
            le - 0.5, le + 0.5, &evals);
        best_eta = std::pow(2.0, lbest);
    }
    res.p = best_p;
    res.eta = best_eta;
    res.cost = cost(best_p, best_eta);
    ++evals;
    res.evaluations = evals;
    res.p_bar = best_p;
    return res;
}

FitResult fit_inhomogeneous(
    const RateVector& observed, const std::vector<QubitId>& free_qubits,
    const std::function<RateVector(const std::map<QubitId, double>&)>& predictor,
    const std::map<QubitId, double>& initial, long budget) {
    const std::size_t n = free_qubits.size();
    if (n == 0) throw std::invalid_argument("fit_inhomogeneous: no free parameters");

    FitResult res;
    res.variant = "inhomogeneous";
    long evals = 0;

    auto theta_to_map = [&](const std::vector<double>& th) {
        std::map<QubitId, double> m = initial;  // pinned qubits keep their value
        for (std::size_t i = 0; i < n; ++i) m[free_qubits[i]] = th[i];
        return m;
    };
    auto clampv = [](double x) { return std::clamp(x, 0.0, 0.5); };

    std::vector<double> theta(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = initial.find(free_qubits[i]);
        theta[i] = clampv(it == initial.end() ? 0.02 : it->second);
    }

    auto residual = [&](const std::vector<double>& th) {
        RateVector r = predictor(theta_to_map(th));
        ++evals;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= observed[i];
        return r;
    };
    auto cost_of = [&](const RateVector& r) {
        double s = 0;
        for (double v : r) s += v * v;
        return s / double(r.size());
    };

    RateVector r0 = residual(theta);
    double cost = cost_of(r0);
    const std::size_t m_entries = r0.size();
    double radius = 0.02;
    double fd_step = 0.004;
    bool converged = false;

    auto solve_damped = [&](const std::vector<std::vector<double>>& A,
                            const std::vector<double>& g, double lambda) {
        auto M = A;
        for (std::size_t i = 0; i < n; ++i) M[i][i] += lambda * (M[i][i] + 1e-12);
        std::vector<double> rhs(n), d(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -g[i];
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
            std::swap(M[col], M[piv]);
            std::swap(rhs[col], rhs[piv]);
            if (std::abs(M[col][col]) < 1e-300) M[col][col] = 1e-300;
            for (std::size_t r = col + 1; r < n; ++r) {
                double f = M[r][col] / M[col][col];
                for (std::size_t cc = col; cc < n; ++cc) M[r][cc] -= f * M[col][cc];
                rhs[r] -= f * rhs[col];
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = rhs[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= M[i][j] * d[j];
            d[i] = s / M[i][i];
        }
        return d;
    };

    while (evals + long(n) + 1 <= budget && !converged) {
        // finite-difference Jacobian (linear surrogate)
        std::vector<RateVector> J(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> th = theta;
            double h = th[i] + fd_step <= 0.5 ? fd_step : -fd_step;
            th[i] = clampv(th[i] + h);
            double actual = th[i] - theta[i];
            RateVector ri = residual(th);
            J[i].resize(m_entries);
            for (std::size_t k = 0; k < m_entries; ++k)
                J[i][k] = actual != 0 ? (ri[k] - r0[k]) / actual : 0.0;
        }
        std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
        std::vector<double> g(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                double s = 0;
                for (std::size_t k = 0; k < m_entries; ++k) s += J[i][k] * J[j][k];
                A[i][j] = A[j][i] = s;
            }
            double s = 0;
            for (std::size_t k = 0; k < m_entries; ++k) s += J[i][k] * r0[k];
            g[i] = s;
        }
        // try damped steps at the current radius; shrink the radius and reuse
        // the model when nothing improves
        bool improved = false;
        while (!improved && radius > 1e-8 && evals < budget) {
            for (double lambda : {1e-10, 1e-6, 1e-3, 1e-1, 1e1, 1e3}) {
                if (evals >= budget) break;
                auto d = solve_damped(A, g, lambda);
                double norm = 0;
                for (double v : d) norm = std::max(norm, std::abs(v));
                if (norm > radius)
                    for (double& v : d) v *= radius / norm;
                std::vector<double> th = theta;
                for (std::size_t i = 0; i < n; ++i) th[i] = clampv(th[i] + d[i]);
                RateVector rn = residual(th);
                double cn = cost_of(rn);
                if (cn < cost) {
                    theta = th;
                    r0 = rn;
                    cost = cn;
                    improved = true;
                    radius = std::min(0.1, radius * 2.0);
                    break;
                }
            }
            if (!improved) radius *= 0.25;
        }
        if (!improved) {
            if (fd_step <= 2e-5) {
                converged = true;  // stationary within resolution
            } else {
                fd_step *= 0.25;
                radius = std::max(radius, 1e-3);
            }
        }
        if (cost < 1e-18) converged = true;
    }

    res.per_qubit = theta_to_map(theta);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += theta[i];
    res.p_bar = sum / double(n);
    res.cost = cost;
    res.evaluations = evals;
    res.converged = converged;
    return res;
}

std::string FitResult::to_json() const {
    nlohmann::json j;
    j["variant"] = variant;
    j["p"] = p;
    if (variant == "biased") j["eta"] = eta;
    if (!per_qubit.empty()) {
        nlohmann::json pq;
        for (const auto& [q, v] : per_qubit) pq[std::to_string(q)] = v;
        j["per_qubit"] = pq;
        j["p_bar"] = p_bar;
    }
    j["cost"] = cost;
    j["evaluations"] = evaluations;
    j["converged"] = converged;
    j["local_minimum_caveat"] = local_minimum_caveat;
    j["seed"] = seed;
    return j.dump(2);
}

}  // namespace hh
