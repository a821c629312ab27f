// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Statistical checks use fixed seeds so results reproduce.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "hh/analysis.hpp"
#include "hh/dense_engine.hpp"
#include "hh/fitting.hpp"
#include "hh/pauli_engine.hpp"

using namespace hh;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

void run_criterion(const std::string& name, const std::function<void(Criterion&)>& fn) {
    Criterion c;
    c.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %-38s %s  (%.2fs)\n", name.c_str(),
                c.pass ? "PASS" : "FAIL", secs);
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    if (!c.pass) ++g_failures;
}

InputState gauge_input(const GaugeOp& g, unsigned bits = 0) {
    InputState in;
    in.basis = g.kind == GaugeKind::z_type ? Basis::z : Basis::x;
    in.bits.resize(g.data_support.size());
    for (std::size_t i = 0; i < in.bits.size(); ++i)
        in.bits[i] = (bits >> (in.bits.size() - 1 - i)) & 1;
    return in;
}

InputState mode_input(CycleMode mode) {
    return mode == CycleMode::x_only ? InputState::plus(9) : InputState::zeros(9);
}

double binom_sigma(double rate, double n) {
    return std::sqrt(std::max(rate * (1 - rate), 1e-12) / n);
}

struct CycleSetup {
    Circuit circuit;
    NoisyCircuit noisy;
    SensitivityAnalysis analysis;
};

CycleSetup make_cycle(const CodeLayout& L, CycleMode mode, int cycles, double p) {
    CycleSetup s{build_cycle_circuit(L, mode, cycles, mode_input(mode)), {}, {}};
    s.noisy = attach_noise(s.circuit, NoiseModel::uniform_depolarizing(p));
    s.noisy.circuit = &s.circuit;
    s.analysis = fault_sensitivity(s.noisy, L);
    return s;
}

}  // namespace

// --------------------------------------------------------------------------

static void criterion_1_polynomials(Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    auto L = build_layout(3);
    struct Case {
        const char* gauge;
        std::vector<Rational> coeffs;
    };
    std::vector<Case> cases = {
        {"Z0",
         {Rational(3), Rational(-15, 2), Rational(10), Rational(-15, 2), Rational(3),
          Rational(-1, 2)}},
        {"X0",
         {Rational(5), Rational(-45, 2), Rational(60), Rational(-105), Rational(126),
          Rational(-105), Rational(60), Rational(-45, 2), Rational(5), Rational(-1, 2)}},
        {"X1",
         {Rational(15, 2), Rational(-105, 2), Rational(455, 2), Rational(-1365, 2),
          Rational(3003, 2), Rational(-5005, 2), Rational(6435, 2), Rational(-6435, 2),
          Rational(5005, 2), Rational(-3003, 2), Rational(1365, 2), Rational(-455, 2),
          Rational(105, 2), Rational(-15, 2), Rational(1, 2)}},
    };
    for (const auto& cs : cases) {
        const auto& g = L.gauge_by_name(cs.gauge);
        auto circ = build_gauge_circuit(L, g, gauge_input(g));
        auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.01));
        auto an = fault_sensitivity(noisy, L);
        int det = -1;
        for (std::size_t i = 0; i < an.detectors.detectors.size(); ++i)
            if (an.detectors.detectors[i].kind == DetectorKind::first_cycle) det = int(i);
        auto poly = change_rate_polynomial(noisy, an.sens[det]);
        c.require(poly.coeffs.size() == cs.coeffs.size() + 1,
                  std::string(cs.gauge) + " polynomial degree");
        for (std::size_t k = 0; k < cs.coeffs.size() && k + 1 < poly.coeffs.size(); ++k)
            c.require(poly.coeffs[k + 1] == cs.coeffs[k],
                      std::string(cs.gauge) + " coefficient p^" + std::to_string(k + 1) +
                          " = " + poly.coeffs[k + 1].str() + " expected " +
                          cs.coeffs[k].str());
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 1.0, "runtime bound (1 s)");
}

static void criterion_2_linear_law(Criterion& c) {
    auto L = build_layout(3);
    long checked = 0;
    auto check_circuit = [&](const Circuit& circ) {
        auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.02));
        auto an = fault_sensitivity(noisy, L);
        for (std::size_t i = 0; i < an.sens.size(); ++i) {
            const auto& det = an.detectors.detectors[i];
            if (!det.defined || !an.sens[i].deterministic) continue;
            auto poly = change_rate_polynomial(noisy, an.sens[i]);
            c.require(poly.coeffs.size() > 1 &&
                          poly.coeffs[1] == Rational(an.sens[i].m(), 2),
                      det.op_name + " cycle " + std::to_string(det.cycle));
            ++checked;
        }
    };
    for (const char* name : {"Z0", "Z3", "X0", "X1"}) {
        const auto& g = L.gauge_by_name(name);
        check_circuit(build_gauge_circuit(L, g, gauge_input(g)));
    }
    {
        InputState in;
        in.basis = Basis::z;
        in.bits.assign(4, 0);
        check_circuit(build_stabilizer_circuit(L, L.stabilizers[0], in));
        InputState inx;
        inx.basis = Basis::x;
        inx.bits.assign(6, 0);
        check_circuit(build_stabilizer_circuit(L, L.stabilizer_by_name("SX4"), inx));
    }
    for (auto mode : {CycleMode::z_only, CycleMode::x_only, CycleMode::full})
        check_circuit(build_cycle_circuit(L, mode, 3, mode_input(mode)));
    c.note("checked " + std::to_string(checked) + " detectors, zero tolerance");
}

static void criterion_3_mc_vs_exact(Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    auto L = build_layout(3);
    const std::size_t N = 100000;
    const std::uint64_t seed = 2033;
    long points = 0;
    double worst = 0;
    for (auto mode : {CycleMode::z_only, CycleMode::x_only, CycleMode::full}) {
        auto circ = build_cycle_circuit(L, mode, 16, mode_input(mode));
        auto base = attach_noise(circ, NoiseModel::uniform_depolarizing(0.01));
        auto an = fault_sensitivity(base, L);
        for (double p : {0.01, 0.03, 0.048}) {
            NoiseModel model = NoiseModel::uniform_depolarizing(p);
            auto exact = rates_for_model(an, base, model);
            auto noisy = attach_noise(circ, model);
            auto ds = sample_shots(noisy, N, seed);
            auto table = change_rates(ds, L);
            for (std::size_t i = 0; i < an.sens.size(); ++i) {
                const auto& det = an.detectors.detectors[i];
                if (!det.defined || !an.sens[i].deterministic) continue;
                const auto* row = table.find(det.op_name, det.cycle);
                if (!row || !row->defined) {
                    c.require(false, "missing measured rate " + det.op_name);
                    continue;
                }
                double sigma = binom_sigma(exact[i], double(N));
                double dev = std::abs(row->rate - exact[i]) / sigma;
                worst = std::max(worst, dev);
                c.require(dev < 3.0, mode_name(mode) + " p=" + std::to_string(p) + " " +
                                         det.op_name + " c" + std::to_string(det.cycle) +
                                         " dev=" + std::to_string(dev) + " sigma");
                ++points;
            }
        }
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 60.0, "runtime bound (1 min)");
    c.note("checked " + std::to_string(points) + " (operator, cycle) points at 3 sigma; worst " +
           std::to_string(worst) + " sigma");
}

static void criterion_4_inversion(Criterion& c) {
    struct Pair {
        double rate;
        int m;
        double paper;
    };
    // literal pairs as stated
    std::vector<Pair> literal = {{0.08, 6, 0.03},
                                 {0.18, 10, 0.04},
                                 {0.17, 15, 0.03},
                                 {0.21, 12, 0.044},
                                 {0.37, 25, 0.052}};
    int literal_pass = 0;
    for (const auto& pr : literal)
        if (std::abs(invert_rate(pr.rate, pr.m) - pr.paper) <= 0.002) ++literal_pass;
    c.require(literal_pass == 3, "expected exactly 3/5 literal pairs inside +-0.002");
    // the two defective pairs take the documented exact values
    c.require(std::abs(invert_rate(0.18, 10) - 0.043648) < 1e-4,
              "invert_rate(0.18,10) value");
    c.require(std::abs(invert_rate(0.17, 15) - 0.027321) < 1e-4,
              "invert_rate(0.17,15) value");
    // swapping the two gauge rates restores the published rounded fits
    std::vector<Pair> swapped = {{0.08, 6, 0.03},
                                 {0.17, 10, 0.04},
                                 {0.18, 15, 0.03},
                                 {0.21, 12, 0.044},
                                 {0.37, 25, 0.052}};
    for (const auto& pr : swapped)
        c.require(std::abs(invert_rate(pr.rate, pr.m) - pr.paper) <= 0.002,
                  "swapped pair (" + std::to_string(pr.rate) + ", m=" +
                      std::to_string(pr.m) + ")");
    c.note("literal (0.18,m=10)->0.0436 and (0.17,m=15)->0.0273 exceed +-0.002 of the");
    c.note("rounded reference values by construction: the stated pairs transpose the");
    c.note("XX/XXXX rates. All five pass once the two rates are swapped back.");
}

static void criterion_5_xor(Criterion& c) {
    c.require(xor_combine(0.08, 0.08) == 0.08 * 0.92 + 0.92 * 0.08, "exact arithmetic");
    c.require(std::abs(xor_combine(0.08, 0.08) - 0.1472) < 1e-15, "0.1472");
    c.require(std::abs(xor_combine(0.18, 0.17) - 0.2888) < 1e-15, "0.2888");
    c.note("the reference values round these to 0.15 and 0.29");
}

static void criterion_6_cycle_profile(Criterion& c) {
    auto L = build_layout(3);
    const std::size_t N = 100000;
    auto circ = build_cycle_circuit(L, CycleMode::z_only, 16, InputState::zeros(9));
    auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.048));
    auto ds = sample_shots(noisy, N, 77);
    auto table = change_rates(ds, L);
    for (const auto& name : {"Z0", "Z1", "Z2", "Z3", "Z4", "Z5"}) {
        std::vector<double> mids;
        for (int cyc = 1; cyc < 16; ++cyc) mids.push_back(table.find(name, cyc)->rate);
        double mean = 0;
        for (double r : mids) mean += r;
        mean /= double(mids.size());
        double sigma = binom_sigma(mean, double(N));
        for (double r : mids)
            c.require(std::abs(r - mean) < 3 * sigma,
                      std::string(name) + " intermediate cycles not constant");
        double first = table.find(name, 0)->rate;
        double fin = table.find(name, 16)->rate;
        c.require(first + 3 * sigma < mean, std::string(name) + " first-cycle dip");
        c.require(fin + 3 * sigma < mean, std::string(name) + " final-cycle dip");
    }
}

static void criterion_7_correlations(Criterion& c) {
    auto L = build_layout(3);
    const std::size_t N = 400000;
    auto circ = build_cycle_circuit(L, CycleMode::z_only, 8, InputState::zeros(9));
    // Uniform depolarizing with its SPAM realization: measurements flip with
    // probability p/2. Time-like correlations come from measurement errors
    // (an error flips one outcome and the next comparison flips back);
    // without the SPAM flips space-like entries dominate instead.
    NoiseModel model = NoiseModel::uniform_depolarizing(0.035);
    model.confusion = make_measurement_confusion(0.035, 0.0);
    auto noisy = attach_noise(circ, model);
    auto an = fault_sensitivity(noisy, L);
    auto pred = predict_correlations(noisy, an);
    auto ds = sample_shots(noisy, N, 5150);
    auto events = detection_events(ds, L);
    auto matrix = correlation_matrix(events);

    // align prediction indices with measured matrix indices (op, cycle)
    auto measured_index = [&](const DetectorDef* d) {
        for (std::size_t i = 0; i < events.op_of_index.size(); ++i)
            if (events.op_names[events.op_of_index[i]] == d->op_name &&
                events.cycle_of_index[i] == d->cycle)
                return int(i);
        return -1;
    };

    auto class_of = [&](int i, int j) { return classify_entry(events, i, j); };

    std::map<EntryClass, double> measured_sum, predicted_sum;
    std::map<EntryClass, long> count;
    std::vector<std::tuple<int, int, EntryClass>> pairs;  // measured index pairs
    for (std::size_t a = 0; a < pred.detectors.size(); ++a) {
        int ia = measured_index(pred.detectors[a]);
        for (std::size_t b = a + 1; b < pred.detectors.size(); ++b) {
            int ib = measured_index(pred.detectors[b]);
            if (ia < 0 || ib < 0) continue;
            auto cls = class_of(ia, ib);
            measured_sum[cls] += matrix.p_ij[ia][ib];
            predicted_sum[cls] += pred.p_ij[a][b];
            count[cls] += 1;
            pairs.push_back({ia, ib, cls});
        }
    }
    std::map<EntryClass, double> measured_mean, predicted_mean;
    for (auto cls : {EntryClass::time, EntryClass::space, EntryClass::space_time,
                     EntryClass::other}) {
        measured_mean[cls] = measured_sum[cls] / double(count[cls]);
        predicted_mean[cls] = predicted_sum[cls] / double(count[cls]);
    }
    c.require(measured_mean[EntryClass::time] > measured_mean[EntryClass::space],
              "time > space");
    c.require(measured_mean[EntryClass::space] > measured_mean[EntryClass::space_time],
              "space > space-time");
    c.require(measured_mean[EntryClass::space_time] > measured_mean[EntryClass::other],
              "space-time > other");

    // batch bootstrap: class means over 50 shot batches
    const int B = 50;
    const std::size_t batch = N / B;
    std::map<EntryClass, std::vector<double>> batch_means;
    for (int b = 0; b < B; ++b) {
        DetectionEventStream sub = events;
        sub.events.assign(events.events.begin() + b * batch,
                          events.events.begin() + (b + 1) * batch);
        auto msub = correlation_matrix(sub);
        std::map<EntryClass, double> s;
        std::map<EntryClass, long> n;
        for (auto [ia, ib, cls] : pairs) {
            if (!msub.defined[ia] || !msub.defined[ib]) continue;
            s[cls] += msub.p_ij[ia][ib];
            n[cls] += 1;
        }
        for (auto& [cls, v] : s)
            if (n[cls]) batch_means[cls].push_back(v / double(n[cls]));
    }
    for (auto cls : {EntryClass::time, EntryClass::space, EntryClass::space_time,
                     EntryClass::other}) {
        const auto& bm = batch_means[cls];
        double mean = 0;
        for (double v : bm) mean += v;
        mean /= double(bm.size());
        double var = 0;
        for (double v : bm) var += (v - mean) * (v - mean);
        double se = std::sqrt(var / double(bm.size() - 1) / double(bm.size()));
        double dev = std::abs(measured_mean[cls] - predicted_mean[cls]) / se;
        c.require(dev < 3.0, std::string(entry_class_name(cls)) + " class mean off by " +
                                 std::to_string(dev) + " bootstrap sigma");
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "class means (measured/predicted): time %.4f/%.4f space %.4f/%.4f "
                  "space-time %.4f/%.4f other %.5f/%.5f",
                  measured_mean[EntryClass::time], predicted_mean[EntryClass::time],
                  measured_mean[EntryClass::space], predicted_mean[EntryClass::space],
                  measured_mean[EntryClass::space_time],
                  predicted_mean[EntryClass::space_time],
                  measured_mean[EntryClass::other], predicted_mean[EntryClass::other]);
    c.note(buf);
}

static void criterion_8_fit_recovery(Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    auto L = build_layout(3);
    std::vector<CycleSetup> setups;
    setups.reserve(3);
    for (auto mode : {CycleMode::z_only, CycleMode::x_only, CycleMode::full}) {
        setups.push_back(make_cycle(L, mode, 16, 0.01));
        setups.back().noisy.circuit = &setups.back().circuit;  // re-seat after move
    }

    auto predict = [&](const NoiseModel& m) {
        RateVector out;
        for (const auto& s : setups) {
            auto r = rates_for_model(s.analysis, s.noisy, m);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const auto& det = s.analysis.detectors.detectors[i];
                if (!det.defined || !s.analysis.sens[i].deterministic) continue;
                out.push_back(r[i]);
            }
        }
        return out;
    };

    // uniform
    auto observed_u = predict(NoiseModel::uniform_depolarizing(0.048));
    auto fit_u = fit_global_uniform(observed_u, [&](double p) {
        return predict(NoiseModel::uniform_depolarizing(p));
    });
    c.require(std::abs(fit_u.p - 0.048) <= 0.005,
              "uniform recovery p=" + std::to_string(fit_u.p));

    // biased
    auto observed_b = predict(NoiseModel::biased(0.055, 8.0));
    auto fit_b = fit_global_biased(observed_b, [&](double p, double eta) {
        return predict(NoiseModel::biased(p, eta));
    });
    c.require(std::abs(fit_b.p - 0.055) / 0.055 <= 0.10,
              "biased p recovery " + std::to_string(fit_b.p));
    c.require(std::abs(fit_b.eta - 8.0) / 8.0 <= 0.10,
              "biased eta recovery " + std::to_string(fit_b.eta));

    // inhomogeneous: random table on all 23 qubits
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(0.01, 0.1);
    std::map<QubitId, double> truth;
    std::vector<QubitId> free_qs;
    for (QubitId q = 0; q < L.num_qubits(); ++q) {
        truth[q] = unif(rng);
        free_qs.push_back(q);
    }
    auto observed_i = predict(NoiseModel::inhomogeneous(truth));
    std::map<QubitId, double> init;
    for (QubitId q : free_qs) init[q] = 0.05;
    auto fit_i = fit_inhomogeneous(
        observed_i, free_qs,
        [&](const std::map<QubitId, double>& pq) {
            return predict(NoiseModel::inhomogeneous(pq));
        },
        init, 500);
    double floor = predictor_noise_floor(observed_i, 2048);
    c.require(fit_i.evaluations <= 500,
              "budget " + std::to_string(fit_i.evaluations));
    c.require(fit_i.cost < floor, "inhomogeneous cost " + std::to_string(fit_i.cost) +
                                      " floor " + std::to_string(floor));
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 300.0, "runtime bound (5 min)");
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "uniform p=%.6f biased (p=%.4f, eta=%.2f) inhomog cost %.2e floor %.2e "
                  "(%ld evals)",
                  fit_u.p, fit_b.p, fit_b.eta, fit_i.cost, floor, fit_i.evaluations);
    c.note(buf);
}

static void criterion_9_channel_algebra(Criterion& c) {
    for (int n : {1, 2}) {
        for (double p : {0.02, 0.31}) {
            auto b = make_biased(n, p, 0.5);
            auto d = make_depolarizing(n, p, Convention::error_rate);
            for (std::size_t i = 0; i < b.pauli_probs.size(); ++i)
                c.require(std::abs(b.pauli_probs[i] - d.pauli_probs[i]) < 1e-15,
                          "biased(eta=1/2) == uniform entry " + std::to_string(i));
        }
    }
    for (double p : {0.03, 0.2})
        c.require(std::abs(spam_rate(NoiseModel::biased(p, 0.5)) - 2 * p / 3) < 1e-15,
                  "SPAM 2p/3 at eta=1/2");
    double limit = spam_rate(NoiseModel::biased(0.08, 1e12));
    c.require(std::abs(limit - 0.08) < 1e-9, "SPAM eta->inf limit equals p");
    c.note("the often-quoted eta->inf limit 'p/2' contradicts the formula");
    c.note("p(1+2eta)/(2(eta+1)) -> p; the true limit is what gets asserted");
    // Kraus completeness at 1e-10
    for (double gamma : {0.0, 0.1, 0.73, 1.0}) {
        double k00 = 1, k01 = 0, k10 = 0, k11 = std::sqrt(1 - gamma);
        double a01 = std::sqrt(gamma);
        // K0^dag K0 + K1^dag K1
        double m00 = k00 * k00 + k10 * k10;
        double m11 = k01 * k01 + k11 * k11 + a01 * a01;
        double m01 = k00 * k01 + k10 * k11;
        c.require(std::abs(m00 - 1) < 1e-10 && std::abs(m11 - 1) < 1e-10 &&
                      std::abs(m01) < 1e-10,
                  "Kraus completeness gamma=" + std::to_string(gamma));
    }
}

static void criterion_10_engine_crosscheck(Criterion& c) {
    auto circ = build_ghz_circuit(3);
    auto dist0 = exact_distribution(circ, NoiseModel::uniform_depolarizing(0.0));
    c.require(dist0.size() == 2, "noiseless GHZ support");
    c.require(std::abs(dist0["000"] - 0.5) < 1e-12 && std::abs(dist0["111"] - 0.5) < 1e-12,
              "noiseless GHZ exact halves");

    const std::size_t N = 100000;
    auto noisy0 = attach_noise(circ, NoiseModel::uniform_depolarizing(0.0));
    auto ds0 = sample_shots(noisy0, N, 3);
    std::map<std::string, long> counts;
    for (const auto& s : ds0.shots) {
        std::string k;
        for (auto b : s) k += char('0' + b);
        counts[k]++;
    }
    c.require(counts.size() == 2 && counts.count("000") && counts.count("111"),
              "sampled noiseless GHZ support");
    c.require(std::abs(counts["000"] / double(N) - 0.5) < 3 * binom_sigma(0.5, N),
              "sampled GHZ split");

    NoiseModel m = NoiseModel::uniform_depolarizing(0.05);
    auto dist = exact_distribution(circ, m);
    auto ds = sample_shots(attach_noise(circ, m), N, 4);
    counts.clear();
    for (const auto& s : ds.shots) {
        std::string k;
        for (auto b : s) k += char('0' + b);
        counts[k]++;
    }
    for (const auto& [bits, p] : dist) {
        double f = counts[bits] / double(N);
        c.require(std::abs(f - p) < 3 * binom_sigma(p, N),
                  "depolarized GHZ outcome " + bits);
    }
}

static void criterion_11_input_dependence(Criterion& c) {
    auto L = build_layout(3);
    const std::size_t N = 100000;
    // statistical equality across all inputs under uniform depolarizing noise
    for (const char* name : {"Z0", "X0"}) {
        const auto& g = L.gauge_by_name(name);
        std::vector<double> rates;
        double exact0 = -1;
        for (unsigned bits = 0; bits < (1u << g.data_support.size()); ++bits) {
            auto circ = build_gauge_circuit(L, g, gauge_input(g, bits));
            auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.03));
            auto an = fault_sensitivity(noisy, L);
            double ex = exact_detector_rates(an)[0];
            if (exact0 < 0) exact0 = ex;
            c.require(std::abs(ex - exact0) < 1e-12,
                      std::string(name) + " exact input independence");
            auto ds = sample_shots(noisy, N, 900 + bits);
            int bit = -1;
            for (const auto& b : ds.labels)
                if (b.kind == BitKind::gauge_outcome) bit = b.bit_index;
            std::uint8_t predicted = an.reference_bits[bit];
            long changes = 0;
            for (const auto& s : ds.shots) changes += (s[bit] != predicted);
            rates.push_back(double(changes) / double(N));
        }
        for (double r : rates)
            c.require(std::abs(r - exact0) < 3 * binom_sigma(exact0, N),
                      std::string(name) + " sampled input independence");
    }

    // asymmetric SPAM makes |11> strictly worse than |00> for the ZZ circuit
    const auto& g = L.gauge_by_name("Z0");
    NoiseModel asym = NoiseModel::uniform_depolarizing(0.03);
    asym.confusion = make_measurement_confusion(0.06, 0.04);
    auto c00 = build_gauge_circuit(L, g, gauge_input(g, 0b00));
    auto c11 = build_gauge_circuit(L, g, gauge_input(g, 0b11));
    auto n00 = attach_noise(c00, asym);
    auto n11 = attach_noise(c11, asym);
    auto r00 = exact_detector_rates(fault_sensitivity(n00, L))[0];
    auto r11 = exact_detector_rates(fault_sensitivity(n11, L))[0];
    c.require(r11 > r00, "exact |11> rate exceeds |00> with Delta > 0");
    auto ds00 = sample_shots(n00, N, 31);
    auto ds11 = sample_shots(n11, N, 32);
    auto count_changes = [&](const SyndromeDataset& ds, std::uint8_t predicted) {
        long ch = 0;
        for (const auto& s : ds.shots) ch += (s[0] != predicted);
        return double(ch) / double(N);
    };
    double m00 = count_changes(ds00, 0), m11 = count_changes(ds11, 0);
    c.require(m11 - m00 > 3 * binom_sigma(m00, N) / 2, "sampled ordering");
    char buf[120];
    std::snprintf(buf, sizeof buf, "Delta>0: rate(|00>)=%.4f rate(|11>)=%.4f", m00, m11);
    c.note(buf);
}

int main() {
    run_criterion("1.polynomial-oracle", criterion_1_polynomials);
    run_criterion("2.linear-coefficient-law", criterion_2_linear_law);
    run_criterion("3.monte-carlo-vs-exact", criterion_3_mc_vs_exact);
    run_criterion("4.paper-value-inversion", criterion_4_inversion);
    run_criterion("5.xor-composition", criterion_5_xor);
    run_criterion("6.cycle-profile", criterion_6_cycle_profile);
    run_criterion("7.correlation-structure", criterion_7_correlations);
    run_criterion("8.fit-recovery", criterion_8_fit_recovery);
    run_criterion("9.channel-algebra", criterion_9_channel_algebra);
    run_criterion("10.engine-cross-check", criterion_10_engine_crosscheck);
    run_criterion("11.input-state-dependence", criterion_11_input_dependence);
    if (g_failures) {
        std::printf("\n%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("\nall acceptance criteria pass\n");
    return 0;
}
