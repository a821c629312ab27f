#include "hh/pauli_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <thread>

#include "hh/rng.hpp"
#include "hh/tableau.hpp"

namespace hh {

namespace {

std::map<QubitId, std::size_t> local_index(const Circuit& c) {
    std::map<QubitId, std::size_t> idx;
    for (std::size_t i = 0; i < c.qubits.size(); ++i) idx[c.qubits[i]] = i;
    return idx;
}

bool anticommutes1(int err, int comp) {  // PauliKind codes
    return err != 0 && comp != 0 && err != comp;
}

}  // namespace

std::vector<std::uint8_t> reference_bits(const Circuit& circuit) {
    auto idx = local_index(circuit);
    Tableau tab(circuit.qubits.size());
    for (std::size_t i = 0; i < circuit.meta.data_qubits.size(); ++i) {
        std::size_t q = idx.at(circuit.meta.data_qubits[i]);
        std::uint8_t bit = circuit.meta.input_bits.at(i);
        if (bit) tab.x(q);
        if (circuit.meta.input_basis == Basis::x) tab.h(q);
    }
    std::vector<std::uint8_t> refs(circuit.num_bits(), 0);
    for (const auto& step : circuit.timesteps) {
        for (const auto& ins : step) {
            switch (ins.kind) {
                case OpKind::reset:
                    if (ins.basis == Basis::z) tab.reset_z(idx.at(ins.q0));
                    else tab.reset_x(idx.at(ins.q0));
                    break;
                case OpKind::hadamard: tab.h(idx.at(ins.q0)); break;
                case OpKind::pauli_x: tab.x(idx.at(ins.q0)); break;
                case OpKind::cnot: tab.cx(idx.at(ins.q0), idx.at(ins.q1)); break;
                case OpKind::measure: {
                    auto r = ins.basis == Basis::z ? tab.measure_z(idx.at(ins.q0))
                                                   : tab.measure_x(idx.at(ins.q0));
                    refs.at(ins.cbit) = r.value;
                    break;
                }
                case OpKind::idle: break;
            }
        }
    }
    return refs;
}

SensitivityAnalysis fault_sensitivity(const NoisyCircuit& noisy, const CodeLayout& layout) {
    return fault_sensitivity(noisy, build_detectors(*noisy.circuit, layout));
}

SensitivityAnalysis fault_sensitivity(const NoisyCircuit& noisy, const DetectorSet& dets) {
    const Circuit& c = *noisy.circuit;
    SensitivityAnalysis an;
    an.detectors = dets;
    an.reference_bits = reference_bits(c);

    // locations grouped by timestep (prep flips at -1)
    std::map<int, std::vector<const FaultLocation*>> locs_at;
    for (const auto& loc : noisy.locations) locs_at[loc.timestep].push_back(&loc);

    std::size_t nq = 0;
    for (QubitId q : c.qubits) nq = std::max<std::size_t>(nq, q + 1);

    for (const auto& det : dets.detectors) {
        DetectorSensitivity ds;
        ds.detector_index = int(an.sens.size());
        std::set<int> bits(det.bits.begin(), det.bits.end());
        PauliString S(nq);

        auto note_pauli1 = [&](const FaultLocation& loc) {
            int comp = int(S.get(loc.q0));
            if (comp == 0) return;
            double q = 0;
            for (int e = 1; e < 4; ++e)
                if (anticommutes1(e, comp)) q += loc.probs[e];
            ds.components.push_back({loc.id, std::uint8_t(comp), 0});
            ds.q.push_back(q);
        };
        auto note_pauli2 = [&](const FaultLocation& loc) {
            int ca = int(S.get(loc.q0)), cb = int(S.get(loc.q1));
            if (ca == 0 && cb == 0) return;
            double q = 0;
            for (int e = 1; e < 16; ++e) {
                bool flip = anticommutes1(e >> 2, ca) ^ anticommutes1(e & 3, cb);
                if (flip) q += loc.probs[e];
            }
            ds.components.push_back({loc.id, std::uint8_t(ca), std::uint8_t(cb)});
            ds.q.push_back(q);
        };

        for (int t = int(c.timesteps.size()) - 1; t >= 0; --t) {
            // measurement readouts of this step
            for (const auto& ins : c.timesteps[t]) {
                if (ins.kind != OpKind::measure) continue;
                QubitId q = ins.q0;
                if (bits.count(ins.cbit)) {
                    if (ins.basis == Basis::z) S.mul_z(q);
                    else S.mul_x(q);
                }
                bool anti = ins.basis == Basis::z ? S.x_bit(q) : S.z_bit(q);
                if (anti) ds.deterministic = false;
            }
            // fault locations attached after this step's instructions
            auto it = locs_at.find(t);
            if (it != locs_at.end()) {
                for (const FaultLocation* loc : it->second) {
                    switch (loc->kind) {
                        case LocationKind::pauli1: note_pauli1(*loc); break;
                        case LocationKind::pauli2: note_pauli2(*loc); break;
                        case LocationKind::measure_flip: {
                            if (!bits.count(loc->bit)) break;
                            if (loc->probs[0] == 0 && loc->probs[1] == 0) break;
                            std::uint8_t ref = an.reference_bits.at(loc->bit);
                            ds.components.push_back({loc->id, 1, 0});
                            ds.q.push_back(loc->probs.at(ref));
                            ds.confusion_alt.push_back(
                                {ds.components.size() - 1, loc->probs.at(1 - ref)});
                            break;
                        }
                        case LocationKind::prep_flip: break;  // handled at t0
                    }
                }
            }
            // un-apply the step's gates
            for (const auto& ins : c.timesteps[t]) {
                switch (ins.kind) {
                    case OpKind::hadamard: S.conj_h(ins.q0); break;
                    case OpKind::cnot: S.conj_cx(ins.q0, ins.q1); break;
                    case OpKind::reset: {
                        bool anti = ins.basis == Basis::z ? S.x_bit(ins.q0)
                                                          : S.z_bit(ins.q0);
                        if (anti) ds.deterministic = false;
                        S.clear(ins.q0);
                        break;
                    }
                    default: break;
                }
            }
        }

        // preparation flips act on the input state
        auto itp = locs_at.find(-1);
        if (itp != locs_at.end()) {
            for (const FaultLocation* loc : itp->second) {
                bool sens = loc->basis == Basis::z ? S.z_bit(loc->q0) : S.x_bit(loc->q0);
                if (!sens || loc->probs.at(0) == 0) continue;
                ds.components.push_back({loc->id, 1, 0});
                ds.q.push_back(loc->probs.at(0));
            }
        }

        // leftover observable must be diagonal in the input basis
        for (QubitId q : c.qubits) {
            auto comp = S.get(q);
            if (comp == PauliKind::I) continue;
            bool is_data = std::find(c.meta.data_qubits.begin(), c.meta.data_qubits.end(),
                                     q) != c.meta.data_qubits.end();
            Basis b = is_data ? c.meta.input_basis : Basis::z;
            if ((b == Basis::z && comp != PauliKind::Z) ||
                (b == Basis::x && comp != PauliKind::X))
                ds.deterministic = false;
        }
        if (noisy.model.confusion && noisy.model.confusion->delta > 0 &&
            ds.confusion_alt.size() > 1)
            an.exact = false;  // sequential confusion folding approximates
        an.sens.push_back(std::move(ds));
    }
    return an;
}

double exact_rate_from_qs(const std::vector<double>& qs) {
    double prod = 1.0;
    for (double q : qs) prod *= (1.0 - 2.0 * q);
    return (1.0 - prod) / 2.0;
}

namespace {

// Pauli and preparation flips are value independent and compose by the
// product formula; readout confusion is conditioned on the pre-readout value
// and folds as P -> P(1-q_flipped) + (1-P)q_unflipped. Exact for detectors
// with at most one confused readout (single-operator circuits); sequential
// folding is an approximation beyond that.
double fold_detector_rate(const DetectorSensitivity& s) {
    if (s.confusion_alt.empty()) return exact_rate_from_qs(s.q);
    std::vector<bool> is_conf(s.q.size(), false);
    for (const auto& [idx, alt] : s.confusion_alt) is_conf[idx] = true;
    double prod = 1.0;
    for (std::size_t k = 0; k < s.q.size(); ++k)
        if (!is_conf[k]) prod *= (1.0 - 2.0 * s.q[k]);
    double p = (1.0 - prod) / 2.0;
    for (const auto& [idx, alt] : s.confusion_alt)
        p = p * (1.0 - alt) + (1.0 - p) * s.q[idx];
    return p;
}

}  // namespace

std::vector<double> exact_detector_rates(const SensitivityAnalysis& an) {
    std::vector<double> out;
    for (const auto& s : an.sens)
        out.push_back(s.deterministic ? fold_detector_rate(s) : std::nan(""));
    return out;
}

RatePolynomial rate_polynomial_for_m(int m) {
    RatePolynomial poly;
    poly.coeffs.assign(std::size_t(m) + 1, Rational(0));
    // (1 - (1-p)^m) / 2 = sum_k (-1)^{k+1} C(m,k)/2 p^k
    Rational binom(1);
    for (int k = 1; k <= m; ++k) {
        binom = binom * Rational(m - k + 1) * Rational(1, k);
        poly.coeffs[k] = Rational(k % 2 ? 1 : -1) * binom * Rational(1, 2);
    }
    return poly;
}

RatePolynomial change_rate_polynomial(const NoisyCircuit& noisy,
                                      const DetectorSensitivity& sens) {
    if (!noisy.uniform_depol_parameter)
        throw std::invalid_argument(
            "change_rate_polynomial needs a homogeneous depolarizing-parameter model");
    if (!sens.deterministic)
        throw std::invalid_argument("detector is not noiselessly deterministic");
    // all sensitive locations flip with probability p/2
    double p = noisy.model.p;
    int m = 0;
    for (double q : sens.q) {
        if (q == 0.0) continue;
        if (p > 0 && std::abs(q - p / 2) > 1e-12 * std::max(1.0, p))
            throw std::invalid_argument("heterogeneous location probabilities");
        ++m;
    }
    if (p == 0.0) m = int(sens.q.size());  // structure independent of p
    return rate_polynomial_for_m(m);
}

CorrelationPrediction predict_correlations(const NoisyCircuit& noisy,
                                           const SensitivityAnalysis& an,
                                           bool include_final) {
    CorrelationPrediction pred;
    std::vector<const DetectorSensitivity*> sel;
    for (std::size_t i = 0; i < an.sens.size(); ++i) {
        const auto& d = an.detectors.detectors[i];
        if (!include_final && d.kind == DetectorKind::final_cycle) continue;
        if (!d.defined || !an.sens[i].deterministic) continue;
        pred.detectors.push_back(&d);
        sel.push_back(&an.sens[i]);
    }
    const std::size_t n = sel.size();
    pred.mean.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        pred.mean[i] = exact_rate_from_qs(sel[i]->q);
    pred.p_ij.assign(n, std::vector<double>(n, 0.0));

    // location lookup keyed by location id
    const auto& locs = noisy.locations;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<int, LocalComponent> ci;
        for (std::size_t k = 0; k < sel[i]->components.size(); ++k)
            ci[sel[i]->components[k].location] = sel[i]->components[k];
        for (std::size_t j = i + 1; j < n; ++j) {
            std::map<int, LocalComponent> cj;
            for (std::size_t k = 0; k < sel[j]->components.size(); ++k)
                cj[sel[j]->components[k].location] = sel[j]->components[k];

            // fold joint flip distribution over (x_i, x_j)
            std::array<double, 4> P{1, 0, 0, 0};
            std::set<int> touched;
            for (const auto& [loc, comp] : ci) touched.insert(loc);
            for (const auto& [loc, comp] : cj) touched.insert(loc);
            for (int loc_id : touched) {
                const FaultLocation& loc = locs.at(loc_id);
                auto iti = ci.find(loc_id);
                auto itj = cj.find(loc_id);
                int ai = iti == ci.end() ? 0 : iti->second.a;
                int bi = iti == ci.end() ? 0 : iti->second.b;
                int aj = itj == cj.end() ? 0 : itj->second.a;
                int bj = itj == cj.end() ? 0 : itj->second.b;
                std::array<double, 4> dloc{0, 0, 0, 0};
                if (loc.kind == LocationKind::pauli1) {
                    for (int e = 0; e < 4; ++e) {
                        int fi = anticommutes1(e, ai);
                        int fj = anticommutes1(e, aj);
                        dloc[fi * 2 + fj] += loc.probs[e];
                    }
                } else if (loc.kind == LocationKind::pauli2) {
                    for (int e = 0; e < 16; ++e) {
                        int fi = anticommutes1(e >> 2, ai) ^ anticommutes1(e & 3, bi);
                        int fj = anticommutes1(e >> 2, aj) ^ anticommutes1(e & 3, bj);
                        dloc[fi * 2 + fj] += loc.probs[e];
                    }
                } else {
                    // classical flip: hits every detector containing the bit
                    double q = loc.kind == LocationKind::measure_flip
                                   ? loc.probs.at(an.reference_bits.at(loc.bit))
                                   : loc.probs.at(0);
                    int fi = iti != ci.end();
                    int fj = itj != cj.end();
                    dloc[0] = 1 - q;
                    dloc[fi * 2 + fj] += q;
                }
                std::array<double, 4> Pn{0, 0, 0, 0};
                for (int s = 0; s < 4; ++s)
                    for (int t = 0; t < 4; ++t) Pn[s ^ t] += P[s] * dloc[t];
                P = Pn;
            }
            double xi = P[2] + P[3], xj = P[1] + P[3], xij = P[3];
            double denom = (1 - 2 * xi) * (1 - 2 * xj);
            double val = denom != 0 ? (xij - xi * xj) / denom : 0.0;
            pred.p_ij[i][j] = pred.p_ij[j][i] = val;
        }
    }
    return pred;
}

std::vector<double> rates_for_model(const SensitivityAnalysis& an,
                                    const NoisyCircuit& base,
                                    const NoiseModel& model) {
    // per-qubit and per-pair channel caches
    std::map<QubitId, std::vector<double>> one_q;
    std::map<std::pair<QubitId, QubitId>, std::vector<double>> two_q;
    auto table1 = [&](QubitId q) -> const std::vector<double>& {
        auto it = one_q.find(q);
        if (it == one_q.end())
            it = one_q.emplace(q, model.one_qubit_channel(q).pauli_probs).first;
        return it->second;
    };
    auto table2 = [&](QubitId a, QubitId b) -> const std::vector<double>& {
        auto key = std::make_pair(a, b);
        auto it = two_q.find(key);
        if (it == two_q.end())
            it = two_q.emplace(key, model.two_qubit_channel(a, b).pauli_probs).first;
        return it->second;
    };
    std::vector<double> out;
    out.reserve(an.sens.size());
    for (const auto& s : an.sens) {
        if (!s.deterministic) {
            out.push_back(std::nan(""));
            continue;
        }
        std::vector<bool> is_conf(s.q.size(), false);
        for (const auto& [idx, alt] : s.confusion_alt) is_conf[idx] = true;
        double prod = 1.0;
        for (std::size_t k = 0; k < s.components.size(); ++k) {
            if (is_conf[k]) continue;
            const auto& comp = s.components[k];
            const FaultLocation& loc = base.locations.at(comp.location);
            double q = 0;
            if (loc.kind == LocationKind::pauli1) {
                const auto& t = table1(loc.q0);
                for (int e = 1; e < 4; ++e)
                    if (anticommutes1(e, comp.a)) q += t[e];
            } else if (loc.kind == LocationKind::pauli2) {
                const auto& t = table2(loc.q0, loc.q1);
                for (int e = 1; e < 16; ++e)
                    if (anticommutes1(e >> 2, comp.a) ^ anticommutes1(e & 3, comp.b))
                        q += t[e];
            } else {
                q = s.q[k];  // preparation flips keep their configured probabilities
            }
            prod *= (1.0 - 2.0 * q);
        }
        double p = (1.0 - prod) / 2.0;
        for (const auto& [idx, alt] : s.confusion_alt)
            p = p * (1.0 - alt) + (1.0 - p) * s.q[idx];
        out.push_back(p);
    }
    return out;
}

SyndromeDataset sample_shots(const NoisyCircuit& noisy, std::size_t n_shots,
                             std::uint64_t seed, std::size_t workers) {
    const Circuit& c = *noisy.circuit;
    if (noisy.model.amp_damping_gamma && *noisy.model.amp_damping_gamma > 0)
        throw std::invalid_argument(
            "amplitude damping is not a Pauli channel; use the dense engine");

    auto refs = reference_bits(c);
    auto idx = local_index(c);
    const std::size_t nq = c.qubits.size();

    // Flatten the instruction stream with local qubit indices and the
    // attached fault locations so the per-shot loop stays lookup free.
    struct CompiledOp {
        OpKind kind;
        Basis basis;
        std::uint16_t q0 = 0, q1 = 0;
        int cbit = -1;
        LocationKind loc_kind = LocationKind::pauli1;
        double loc_total = 0;
        const double* probs = nullptr;
    };
    std::vector<CompiledOp> program;
    struct PrepFlip {
        std::uint16_t q;
        Basis basis;
        double prob;
    };
    std::vector<PrepFlip> prep;
    {
        std::vector<const FaultLocation*> instr_locs;
        for (const auto& loc : noisy.locations) {
            if (loc.kind == LocationKind::prep_flip) {
                if (loc.probs[0] > 0)
                    prep.push_back({std::uint16_t(idx.at(loc.q0)), loc.basis, loc.probs[0]});
                continue;
            }
            instr_locs.push_back(&loc);
        }
        std::size_t k = 0;
        for (const auto& step : c.timesteps) {
            for (const auto& ins : step) {
                const FaultLocation& loc = *instr_locs.at(k++);
                CompiledOp op;
                op.kind = ins.kind;
                op.basis = ins.basis;
                op.q0 = std::uint16_t(idx.at(ins.q0));
                if (ins.kind == OpKind::cnot) op.q1 = std::uint16_t(idx.at(ins.q1));
                op.cbit = ins.cbit;
                op.loc_kind = loc.kind;
                op.probs = loc.probs.data();
                if (loc.kind == LocationKind::measure_flip)
                    op.loc_total = std::max(loc.probs[0], loc.probs[1]);
                else
                    op.loc_total = 1.0 - loc.probs[0];
                program.push_back(op);
            }
        }
    }

    std::vector<int> data_pos(nq, -1);
    for (std::size_t i = 0; i < c.meta.data_qubits.size(); ++i)
        data_pos[idx.at(c.meta.data_qubits[i])] = int(i);

    SyndromeDataset ds;
    ds.meta = c.meta;
    ds.labels = c.classical_bits;
    ds.seed = seed;
    ds.shots.assign(n_shots, std::vector<std::uint8_t>(c.num_bits(), 0));

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint8_t> fx(nq), fz(nq);
        for (std::size_t s = lo; s < hi; ++s) {
            ShotRng rng(seed, s);
            std::fill(fx.begin(), fx.end(), 0);
            std::fill(fz.begin(), fz.end(), 0);
            // fresh randomness for the observables conjugate to the preparation
            for (std::size_t q = 0; q < nq; ++q) {
                Basis b = data_pos[q] >= 0 ? c.meta.input_basis : Basis::z;
                (b == Basis::z ? fz[q] : fx[q]) = rng.next_bool();
            }
            for (const auto& pf : prep) {
                if (rng.next_double() < pf.prob) {
                    if (pf.basis == Basis::z) fx[pf.q] ^= 1;
                    else fz[pf.q] ^= 1;
                }
            }
            auto& row = ds.shots[s];
            for (const auto& op : program) {
                switch (op.kind) {
                    case OpKind::reset:
                        if (op.basis == Basis::z) { fx[op.q0] = 0; fz[op.q0] = rng.next_bool(); }
                        else { fz[op.q0] = 0; fx[op.q0] = rng.next_bool(); }
                        break;
                    case OpKind::hadamard: std::swap(fx[op.q0], fz[op.q0]); break;
                    case OpKind::pauli_x: break;
                    case OpKind::cnot:
                        fx[op.q1] ^= fx[op.q0];
                        fz[op.q0] ^= fz[op.q1];
                        break;
                    case OpKind::measure: {
                        std::uint8_t v = refs[op.cbit] ^
                                         (op.basis == Basis::z ? fx[op.q0] : fz[op.q0]);
                        if (op.loc_total > 0 && rng.next_double() < op.probs[v]) v ^= 1;
                        row[op.cbit] = v;
                        (op.basis == Basis::z ? fz[op.q0] : fx[op.q0]) = rng.next_bool();
                        break;
                    }
                    case OpKind::idle: break;
                }
                if (op.kind == OpKind::measure) continue;
                if (op.loc_total <= 0) continue;
                double u = rng.next_double();
                if (u >= op.loc_total) continue;
                if (op.loc_kind == LocationKind::pauli1) {
                    double acc = 0;
                    int e = 1;
                    for (; e < 4; ++e) {
                        acc += op.probs[e];
                        if (u < acc) break;
                    }
                    if (e > 3) e = 3;
                    fx[op.q0] ^= (e & 1);
                    fz[op.q0] ^= (e >> 1);
                } else {
                    double acc = 0;
                    int e = 1;
                    for (; e < 16; ++e) {
                        acc += op.probs[e];
                        if (u < acc) break;
                    }
                    if (e > 15) e = 15;
                    int ea = e >> 2, eb = e & 3;
                    fx[op.q0] ^= (ea & 1);
                    fz[op.q0] ^= (ea >> 1);
                    fx[op.q1] ^= (eb & 1);
                    fz[op.q1] ^= (eb >> 1);
                }
            }
        }
    };

    // Per-shot random streams make the result independent of the split.
    if (workers == 0)
        workers = std::min<std::size_t>(std::thread::hardware_concurrency(),
                                        n_shots / 4096);
    if (workers > 1) {
        std::vector<std::thread> pool;
        std::size_t chunk = (n_shots + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t lo = w * chunk, hi = std::min(n_shots, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    } else {
        run_range(0, n_shots);
    }
    return ds;
}

}  // namespace hh
