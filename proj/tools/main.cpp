// Command-line front end: heavy-hexagon layouts, syndrome circuits, noisy
// sampling, exact analytics, shot-file ingestion and noise-model fitting.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hh/analysis.hpp"
#include "hh/dense_engine.hpp"
#include "hh/fitting.hpp"
#include "hh/io.hpp"
#include "hh/pauli_engine.hpp"
#include "json.hpp"

using namespace hh;

namespace {

CycleMode parse_mode(const std::string& m) {
    if (m == "z") return CycleMode::z_only;
    if (m == "x") return CycleMode::x_only;
    if (m == "full") return CycleMode::full;
    throw CLI::ValidationError("--mode must be one of z, x, full");
}

InputState default_input(const CodeLayout& layout, CycleMode mode,
                         const std::string& bits) {
    InputState in;
    in.basis = mode == CycleMode::x_only ? Basis::x : Basis::z;
    std::size_t n = layout.count_role(QubitRole::data);
    if (bits.empty()) {
        in.bits.assign(n, 0);
    } else {
        if (bits.size() != n)
            throw std::runtime_error("--input needs one bit per data qubit");
        for (char c : bits) in.bits.push_back(c == '1');
    }
    return in;
}

InputState input_for_support(std::size_t n, Basis basis, const std::string& bits) {
    InputState in;
    in.basis = basis;
    if (bits.empty()) {
        in.bits.assign(n, 0);
    } else {
        if (bits.size() != n)
            throw std::runtime_error("--input length does not match operator support");
        for (char c : bits) in.bits.push_back(c == '1');
    }
    return in;
}

// Observed/predicted rate vectors aligned over a set of datasets.
struct FitProblem {
    CodeLayout layout;
    std::vector<Circuit> circuits;
    std::vector<NoisyCircuit> noisy;
    std::vector<SensitivityAnalysis> analyses;
    RateVector observed;

    explicit FitProblem(int distance) : layout(build_layout(distance)) {}

    void add_dataset(const SyndromeDataset& ds) {
        InputState in;
        in.basis = ds.meta.input_basis;
        in.bits = ds.meta.input_bits;
        circuits.push_back(build_cycle_circuit(layout, ds.meta.mode, ds.meta.cycles, in));
    }

    void finalize(const std::vector<SyndromeDataset>& datasets) {
        for (std::size_t k = 0; k < circuits.size(); ++k) {
            noisy.push_back(attach_noise(circuits[k], NoiseModel::uniform_depolarizing(0.01)));
        }
        for (std::size_t k = 0; k < circuits.size(); ++k)
            analyses.push_back(fault_sensitivity(noisy[k], layout));
        for (std::size_t k = 0; k < datasets.size(); ++k) {
            auto table = change_rates(datasets[k], layout);
            for (std::size_t i = 0; i < analyses[k].sens.size(); ++i) {
                const auto& det = analyses[k].detectors.detectors[i];
                if (!det.defined || !analyses[k].sens[i].deterministic) continue;
                const auto* row = table.find(det.op_name, det.cycle);
                if (!row || !row->defined)
                    throw std::runtime_error("dataset lacks a rate for " + det.op_name);
                observed.push_back(row->rate);
            }
        }
    }

    RateVector predict(const NoiseModel& model) const {
        RateVector out;
        for (std::size_t k = 0; k < analyses.size(); ++k) {
            auto r = rates_for_model(analyses[k], noisy[k], model);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const auto& det = analyses[k].detectors.detectors[i];
                if (!det.defined || !analyses[k].sens[i].deterministic) continue;
                out.push_back(r[i]);
            }
        }
        return out;
    }

    std::vector<QubitId> all_qubits() const {
        std::vector<QubitId> qs;
        for (const auto& c : circuits)
            for (QubitId q : c.qubits)
                if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
        std::sort(qs.begin(), qs.end());
        return qs;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"heavy-hexagon syndrome measurement toolkit"};
    app.require_subcommand(1);

    // ---- layout
    auto* cmd_layout = app.add_subcommand("layout", "construct a heavy-hexagon code layout");
    int distance = 3;
    std::string out_path;
    bool do_verify = false;
    cmd_layout->add_option("--distance", distance, "odd code distance >= 3")->required();
    cmd_layout->add_option("--out", out_path, "layout JSON output")->required();
    cmd_layout->add_flag("--verify", do_verify, "print invariant checks");

    // ---- circuit
    auto* cmd_circuit = app.add_subcommand("circuit", "build a measurement circuit");
    std::string mode_str = "z", gauge_name, stab_name, input_bits, circ_out;
    int cycles = 1, c_distance = 3;
    cmd_circuit->add_option("--distance", c_distance, "code distance")->required();
    cmd_circuit->add_option("--mode", mode_str, "z | x | full (cycle circuits)");
    cmd_circuit->add_option("--cycles", cycles, "number of measurement cycles");
    cmd_circuit->add_option("--gauge", gauge_name, "single gauge prepare-and-measure");
    cmd_circuit->add_option("--stabilizer", stab_name, "single stabilizer circuit");
    cmd_circuit->add_option("--input", input_bits, "input bits (0/1 per qubit)");
    cmd_circuit->add_option("--out", circ_out, "circuit text output")->required();

    // ---- sample
    auto* cmd_sample = app.add_subcommand("sample", "Pauli-frame Monte Carlo sampling");
    std::string s_circ, s_noise, s_out;
    std::size_t shots = 2048;
    std::uint64_t seed = 1;
    bool packed = false;
    cmd_sample->add_option("--circuit", s_circ)->required();
    cmd_sample->add_option("--noise", s_noise)->required();
    cmd_sample->add_option("--shots", shots);
    cmd_sample->add_option("--seed", seed);
    cmd_sample->add_flag("--packed", packed, "binary shot body");
    cmd_sample->add_option("--out", s_out)->required();

    // ---- exact
    auto* cmd_exact = app.add_subcommand("exact", "exact rates / distributions");
    std::string e_circ, e_noise, e_out, e_dist, e_poly;
    cmd_exact->add_option("--circuit", e_circ)->required();
    cmd_exact->add_option("--noise", e_noise)->required();
    cmd_exact->add_option("--out", e_out, "exact change-rate CSV");
    cmd_exact->add_option("--distribution", e_dist, "dense outcome distribution CSV");
    cmd_exact->add_option("--polynomial", e_poly,
                          "change-rate polynomials as exact rationals (JSON)");

    // ---- analyze
    auto* cmd_analyze = app.add_subcommand("analyze", "change rates from a shot archive");
    std::string a_shots, a_out, a_plot;
    double confidence = 0.95;
    int a_distance = 0;
    cmd_analyze->add_option("--shots", a_shots)->required();
    cmd_analyze->add_option("--out", a_out)->required();
    cmd_analyze->add_option("--plot-data", a_plot, "x/y/error plot file");
    cmd_analyze->add_option("--confidence", confidence);
    cmd_analyze->add_option("--distance", a_distance, "override layout distance");

    // ---- correlate
    auto* cmd_corr = app.add_subcommand("correlate", "detection-event correlation matrix");
    std::string q_shots, q_out;
    cmd_corr->add_option("--shots", q_shots)->required();
    cmd_corr->add_option("--out", q_out)->required();

    // ---- fit
    auto* cmd_fit = app.add_subcommand("fit", "fit a noise model to change rates");
    std::vector<std::string> f_shots;
    std::string f_variant = "uniform", f_out;
    long budget = 500;
    std::uint64_t f_seed = 1;
    cmd_fit->add_option("--shots", f_shots, "one or more shot archives")->required();
    cmd_fit->add_option("--variant", f_variant, "uniform | biased | inhomogeneous");
    cmd_fit->add_option("--budget", budget, "evaluation budget (inhomogeneous)");
    cmd_fit->add_option("--seed", f_seed);
    cmd_fit->add_option("--out", f_out)->required();

    // ---- ingest
    auto* cmd_ingest = app.add_subcommand("ingest", "relabel an external shot archive");
    std::string i_archive, i_map, i_out;
    int i_distance = 3;
    cmd_ingest->add_option("--archive", i_archive)->required();
    cmd_ingest->add_option("--device-map", i_map, "device map JSON (default falcon-27)");
    cmd_ingest->add_option("--distance", i_distance);
    cmd_ingest->add_option("--out", i_out)->required();

    // ---- device-map
    auto* cmd_map = app.add_subcommand("device-map", "write the built-in device map");
    std::string m_out;
    cmd_map->add_option("--out", m_out)->required();

    // ---- report
    auto* cmd_report = app.add_subcommand("report", "emit analysis reports from shots");
    std::string r_shots, r_format = "csv", r_out;
    cmd_report->add_option("--shots", r_shots)->required();
    cmd_report->add_option("--format", r_format, "csv | json | plot-data");
    cmd_report->add_option("--out", r_out)->required();

    CLI11_PARSE(app, argc, argv);

    if (*cmd_layout) {
        auto L = build_layout(distance);
        write_file(out_path, L.to_json());
        if (do_verify) {
            auto rep = verify_layout(L);
            for (const auto& c : rep.checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                          << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
            if (!rep.all_pass()) return 1;
        }
        std::cout << "layout d=" << distance << " qubits=" << L.num_qubits()
                  << " -> " << out_path << "\n";
        return 0;
    }

    if (*cmd_circuit) {
        auto L = build_layout(c_distance);
        Circuit circ;
        if (!gauge_name.empty()) {
            const auto& g = L.gauge_by_name(gauge_name);
            Basis b = g.kind == GaugeKind::z_type ? Basis::z : Basis::x;
            circ = build_gauge_circuit(L, g,
                                       input_for_support(g.data_support.size(), b, input_bits));
        } else if (!stab_name.empty()) {
            const auto& s = L.stabilizer_by_name(stab_name);
            Basis b = s.kind == StabilizerKind::surface_z ? Basis::z : Basis::x;
            circ = build_stabilizer_circuit(
                L, s, input_for_support(s.pauli.support.size(), b, input_bits));
        } else {
            CycleMode mode = parse_mode(mode_str);
            circ = build_cycle_circuit(L, mode, cycles, default_input(L, mode, input_bits));
        }
        write_file(circ_out, circ.to_text());
        std::cout << "circuit depth=" << circ.depth() << " bits=" << circ.num_bits()
                  << " -> " << circ_out << "\n";
        return 0;
    }

    if (*cmd_sample) {
        auto circ = Circuit::from_text(read_file(s_circ));
        auto model = NoiseModel::from_json(read_file(s_noise));
        auto noisy = attach_noise(circ, model);
        auto ds = sample_shots(noisy, shots, seed);
        write_archive(s_out, ds, packed);
        std::cout << "sampled " << shots << " shots -> " << s_out << "\n";
        return 0;
    }

    if (*cmd_exact) {
        auto circ = Circuit::from_text(read_file(e_circ));
        auto model = NoiseModel::from_json(read_file(e_noise));
        if (!e_out.empty()) {
            auto L = build_layout(circ.meta.distance);
            auto noisy = attach_noise(circ, model);
            auto an = fault_sensitivity(noisy, L);
            auto rates = exact_detector_rates(an);
            std::ostringstream os;
            os << "operator_id,cycle,rate,m\n";
            os.precision(12);
            for (std::size_t i = 0; i < an.sens.size(); ++i) {
                const auto& det = an.detectors.detectors[i];
                os << det.op_name << "," << det.cycle << ",";
                if (det.defined && an.sens[i].deterministic)
                    os << rates[i] << "," << an.sens[i].m();
                else
                    os << "undefined,";
                os << "\n";
            }
            write_file(e_out, os.str());
            std::cout << "exact rates -> " << e_out << "\n";
        }
        if (!e_dist.empty()) {
            auto dist = exact_distribution(circ, model);
            std::ostringstream os;
            os << "bitstring,probability\n";
            os.precision(12);
            for (const auto& [k, v] : dist) os << k << "," << v << "\n";
            write_file(e_dist, os.str());
            std::cout << "distribution -> " << e_dist << "\n";
        }
        if (!e_poly.empty()) {
            auto L = build_layout(circ.meta.distance);
            auto noisy = attach_noise(circ, model);
            auto an = fault_sensitivity(noisy, L);
            nlohmann::json j;
            j["format_version"] = 1;
            j["parameter"] = "depolarizing parameter";
            for (std::size_t i = 0; i < an.sens.size(); ++i) {
                const auto& det = an.detectors.detectors[i];
                if (!det.defined || !an.sens[i].deterministic) continue;
                auto poly = change_rate_polynomial(noisy, an.sens[i]);
                nlohmann::json pj;
                pj["operator_id"] = det.op_name;
                pj["cycle"] = det.cycle;
                pj["m"] = an.sens[i].m();
                nlohmann::json coeffs = nlohmann::json::array();
                for (const auto& r : poly.coeffs) {
                    auto digits = [&](Rational::int128 v) {
                        std::string s;
                        bool neg = v < 0;
                        if (neg) v = -v;
                        if (v == 0) s = "0";
                        while (v) {
                            s += char('0' + int(v % 10));
                            v /= 10;
                        }
                        if (neg) s += '-';
                        return std::string(s.rbegin(), s.rend());
                    };
                    coeffs.push_back({digits(r.num), digits(r.den)});
                }
                pj["coefficients"] = coeffs;
                j["polynomials"].push_back(pj);
            }
            write_file(e_poly, j.dump(2));
            std::cout << "polynomials -> " << e_poly << "\n";
        }
        return 0;
    }

    if (*cmd_analyze) {
        auto ds = read_archive(a_shots);
        auto L = build_layout(a_distance > 0 ? a_distance : ds.meta.distance);
        auto table = change_rates(ds, L, confidence);
        write_file(a_out, rates_csv(table));
        if (!a_plot.empty()) write_file(a_plot, plot_data(table));
        std::cout << "change rates (" << table.rows.size() << " rows) -> " << a_out
                  << "\n";
        return 0;
    }

    if (*cmd_corr) {
        auto ds = read_archive(q_shots);
        auto L = build_layout(ds.meta.distance);
        auto events = detection_events(ds, L);
        auto matrix = correlation_matrix(events);
        write_file(q_out, correlation_csv(matrix));
        std::cout << "correlation matrix (" << matrix.mean.size() << " indices) -> "
                  << q_out << "\n";
        return 0;
    }

    if (*cmd_fit) {
        std::vector<SyndromeDataset> datasets;
        for (const auto& path : f_shots) datasets.push_back(read_archive(path));
        FitProblem prob(datasets.at(0).meta.distance);
        for (const auto& ds : datasets) prob.add_dataset(ds);
        prob.finalize(datasets);

        FitResult res;
        if (f_variant == "uniform") {
            res = fit_global_uniform(prob.observed, [&](double p) {
                return prob.predict(NoiseModel::uniform_depolarizing(p));
            });
        } else if (f_variant == "biased") {
            res = fit_global_biased(prob.observed, [&](double p, double eta) {
                return prob.predict(NoiseModel::biased(p, eta));
            });
        } else if (f_variant == "inhomogeneous") {
            auto uni = fit_global_uniform(prob.observed, [&](double p) {
                return prob.predict(NoiseModel::uniform_depolarizing(p));
            });
            auto qs = prob.all_qubits();
            std::map<QubitId, double> init;
            for (QubitId q : qs) init[q] = uni.p;
            res = fit_inhomogeneous(
                prob.observed, qs,
                [&](const std::map<QubitId, double>& pq) {
                    return prob.predict(NoiseModel::inhomogeneous(pq));
                },
                init, budget);
        } else {
            throw CLI::ValidationError("--variant must be uniform, biased or inhomogeneous");
        }
        res.seed = f_seed;
        write_file(f_out, res.to_json());
        std::cout << "fit " << f_variant << " cost=" << res.cost << " -> " << f_out
                  << "\n";
        return 0;
    }

    if (*cmd_ingest) {
        auto L = build_layout(i_distance);
        DeviceMap map = i_map.empty() ? DeviceMap::falcon27()
                                      : DeviceMap::from_json(read_file(i_map));
        auto ds = ingest(i_archive, L, map);
        write_archive(i_out, ds);
        std::cout << "ingested " << ds.num_shots() << " shots -> " << i_out << "\n";
        return 0;
    }

    if (*cmd_map) {
        write_file(m_out, DeviceMap::falcon27().to_json());
        std::cout << "device map -> " << m_out << "\n";
        return 0;
    }

    if (*cmd_report) {
        auto ds = read_archive(r_shots);
        auto L = build_layout(ds.meta.distance);
        auto table = change_rates(ds, L);
        if (r_format == "csv") {
            write_file(r_out, rates_csv(table));
        } else if (r_format == "plot-data") {
            write_file(r_out, plot_data(table));
        } else if (r_format == "json") {
            nlohmann::json j;
            j["format_version"] = 1;
            for (const auto& row : table.rows) {
                nlohmann::json rj;
                rj["operator_id"] = row.op_name;
                rj["cycle"] = row.cycle;
                rj["defined"] = row.defined;
                if (row.defined) {
                    rj["changes"] = row.changes;
                    rj["shots"] = row.shots;
                    rj["rate"] = row.rate;
                    rj["ci_low"] = row.ci_low;
                    rj["ci_high"] = row.ci_high;
                }
                j["rows"].push_back(rj);
            }
            write_file(r_out, j.dump(2));
        } else {
            throw CLI::ValidationError("--format must be csv, json or plot-data");
        }
        std::cout << "report -> " << r_out << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
