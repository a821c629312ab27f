#include "hh/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hh {

namespace {

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " out of [0,1]");
}

std::vector<double> table_1q(double pI, double pX, double pZ, double pY) {
    // index = xz code: I, X, Z, Y
    return {pI, pX, pZ, pY};
}

}  // namespace

ChannelSpec make_bit_flip(double p) {
    check_prob(p, "bit-flip p");
    ChannelSpec c;
    c.variant = ChannelVariant::bit_flip;
    c.n = 1;
    c.p = p;
    c.pauli_probs = table_1q(1 - p, p, 0.0, 0.0);
    return c;
}

ChannelSpec make_phase_flip(double p) {
    check_prob(p, "phase-flip p");
    ChannelSpec c;
    c.variant = ChannelVariant::phase_flip;
    c.n = 1;
    c.p = p;
    c.pauli_probs = table_1q(1 - p, 0.0, p, 0.0);
    return c;
}

ChannelSpec make_depolarizing(int n, double value, Convention conv) {
    if (n != 1 && n != 2) throw std::invalid_argument("depolarizing n must be 1 or 2");
    check_prob(value, "depolarizing value");
    ChannelSpec c;
    c.variant = ChannelVariant::depolarizing;
    c.n = n;
    c.convention = conv;
    c.p = value;
    int dim = n == 1 ? 4 : 16;
    c.pauli_probs.assign(dim, 0.0);
    if (conv == Convention::depol_parameter) {
        for (int i = 0; i < dim; ++i) c.pauli_probs[i] = value / dim;
        c.pauli_probs[0] += 1 - value;
    } else {
        double per = value / (dim - 1);
        for (int i = 1; i < dim; ++i) c.pauli_probs[i] = per;
        c.pauli_probs[0] = 1 - value;
    }
    return c;
}

ChannelSpec make_pauli_table(int n, std::vector<double> nontrivial) {
    if (n != 1 && n != 2) throw std::invalid_argument("pauli table n must be 1 or 2");
    std::size_t dim = n == 1 ? 4 : 16;
    if (nontrivial.size() != dim - 1)
        throw std::invalid_argument("pauli table needs 4^n-1 entries");
    double sum = 0;
    for (double w : nontrivial) {
        check_prob(w, "pauli table entry");
        sum += w;
    }
    if (sum > 1.0 + 1e-12) throw std::invalid_argument("pauli table sums past 1");
    ChannelSpec c;
    c.variant = ChannelVariant::pauli_table;
    c.n = n;
    c.pauli_probs.assign(dim, 0.0);
    c.pauli_probs[0] = 1 - sum;
    for (std::size_t i = 1; i < dim; ++i) c.pauli_probs[i] = nontrivial[i - 1];
    return c;
}

ChannelSpec make_biased(int n, double p, double eta) {
    if (n != 1 && n != 2) throw std::invalid_argument("biased n must be 1 or 2");
    check_prob(p, "biased p");
    if (!(eta > 0)) throw std::invalid_argument("biased eta must be positive");
    ChannelSpec c;
    c.variant = ChannelVariant::biased;
    c.n = n;
    c.convention = Convention::error_rate;
    c.p = p;
    c.eta = eta;
    if (n == 1) {
        double rxy = 1.0 / (2 * (eta + 1));
        double rz = eta / (eta + 1);
        c.pauli_probs = table_1q(1 - p, p * rxy, p * rz, p * rxy);
    } else {
        // r_H on the three Z-only Paulis, r_L on the remaining twelve:
        // r_H = eta / ((2^n-1)(eta + 2^{n-1})), r_L = r_H / (2 eta).
        double rh = eta / (3.0 * (eta + 2.0));
        double rl = 1.0 / (6.0 * (eta + 2.0));
        c.pauli_probs.assign(16, 0.0);
        double sum = 0;
        for (int i = 1; i < 16; ++i) {
            int a = i >> 2, b = i & 3;  // xz codes of the two qubits
            bool z_only = (a == 0 || a == 2) && (b == 0 || b == 2);
            double w = p * (z_only ? rh : rl);
            c.pauli_probs[i] = w;
            sum += w;
        }
        c.pauli_probs[0] = 1 - sum;
    }
    return c;
}

ChannelSpec make_amplitude_damping(double gamma) {
    check_prob(gamma, "damping gamma");
    ChannelSpec c;
    c.variant = ChannelVariant::amplitude_damping;
    c.n = 1;
    c.gamma = gamma;
    return c;
}

ChannelSpec make_measurement_confusion(double p, double delta) {
    check_prob(p, "confusion p");
    if (delta < 0 || p / 2 + delta > 1)
        throw std::invalid_argument("confusion delta out of range");
    ChannelSpec c;
    c.variant = ChannelVariant::measurement_confusion;
    c.n = 1;
    c.p = p;
    c.delta = delta;
    c.confusion = {{{1 - p / 2, p / 2}, {p / 2 + delta, 1 - p / 2 - delta}}};
    return c;
}

double convert_convention(double value, int n, Convention from) {
    check_prob(value, "conversion value");
    if (n == 1)
        return from == Convention::error_rate ? value * 4.0 / 3.0 : value * 3.0 / 4.0;
    if (n == 2)
        return from == Convention::error_rate ? value * 16.0 / 15.0 : value * 15.0 / 16.0;
    throw std::invalid_argument("conversion n must be 1 or 2");
}

bool NoiseModel::is_zero() const {
    if (confusion && confusion->p > 0) return false;
    if (amp_damping_gamma && *amp_damping_gamma > 0) return false;
    if (variant == ModelVariant::inhomogeneous) {
        for (const auto& [q, v] : per_qubit)
            if (v > 0) return false;
        return true;
    }
    return p == 0.0;
}

double NoiseModel::qubit_parameter(QubitId q) const {
    if (variant != ModelVariant::inhomogeneous) return p;
    auto it = per_qubit.find(q);
    return it == per_qubit.end() ? 0.0 : it->second;
}

ChannelSpec NoiseModel::one_qubit_channel(QubitId q) const {
    switch (variant) {
        case ModelVariant::biased: return make_biased(1, p, eta);
        case ModelVariant::inhomogeneous:
            return make_depolarizing(1, qubit_parameter(q), Convention::depol_parameter);
        default: return make_depolarizing(1, p, convention);
    }
}

ChannelSpec NoiseModel::two_qubit_channel(QubitId a, QubitId b) const {
    switch (variant) {
        case ModelVariant::biased: return make_biased(2, p, eta);
        case ModelVariant::inhomogeneous:
            return make_depolarizing(2, pair_parameter(a, b), Convention::depol_parameter);
        default: return make_depolarizing(2, p, convention);
    }
}

double spam_rate(const NoiseModel& model) {
    switch (model.variant) {
        case ModelVariant::biased:
            return model.p * (1 + 2 * model.eta) / (2 * (model.eta + 1));
        case ModelVariant::inhomogeneous:
            throw std::invalid_argument("spam_rate: inhomogeneous model has no single rate");
        default:
            return model.convention == Convention::error_rate ? 2 * model.p / 3
                                                              : model.p / 2;
    }
}

NoisyCircuit attach_noise(const Circuit& circuit, const NoiseModel& model) {
    NoisyCircuit nc;
    nc.circuit = &circuit;
    nc.model = model;
    nc.uniform_depol_parameter = model.variant == ModelVariant::depolarizing &&
                                 model.convention == Convention::depol_parameter &&
                                 !(model.confusion && model.confusion->p > 0);

    auto flip_probs = [&]() -> std::vector<double> {
        if (!model.confusion) return {0.0, 0.0};
        const auto& m = model.confusion->confusion;
        return {m[0][1], m[1][0]};  // P(flip | true 0), P(flip | true 1)
    };

    int next = 0;
    // State preparation flips mirror the readout confusion (SPAM).
    if (model.confusion && model.confusion->p > 0) {
        const auto& data = circuit.meta.data_qubits;
        for (std::size_t i = 0; i < data.size(); ++i) {
            FaultLocation loc;
            loc.id = next++;
            loc.kind = LocationKind::prep_flip;
            loc.timestep = -1;
            loc.q0 = data[i];
            loc.basis = circuit.meta.input_basis;
            std::uint8_t bit = i < circuit.meta.input_bits.size() ? circuit.meta.input_bits[i] : 0;
            loc.probs = {flip_probs()[bit]};
            nc.locations.push_back(std::move(loc));
        }
    }

    for (std::size_t t = 0; t < circuit.timesteps.size(); ++t) {
        for (const auto& ins : circuit.timesteps[t]) {
            FaultLocation loc;
            loc.id = next;
            loc.timestep = int(t);
            switch (ins.kind) {
                case OpKind::reset:
                case OpKind::hadamard:
                case OpKind::pauli_x:
                case OpKind::idle: {
                    loc.kind = LocationKind::pauli1;
                    loc.q0 = ins.q0;
                    loc.probs = model.one_qubit_channel(ins.q0).pauli_probs;
                    break;
                }
                case OpKind::cnot: {
                    loc.kind = LocationKind::pauli2;
                    loc.q0 = ins.q0;
                    loc.q1 = ins.q1;
                    loc.probs = model.two_qubit_channel(ins.q0, ins.q1).pauli_probs;
                    break;
                }
                case OpKind::measure: {
                    loc.kind = LocationKind::measure_flip;
                    loc.q0 = ins.q0;
                    loc.bit = ins.cbit;
                    loc.probs = flip_probs();
                    break;
                }
            }
            ++next;
            nc.locations.push_back(std::move(loc));
        }
    }
    return nc;
}

std::string NoiseModel::to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    switch (variant) {
        case ModelVariant::depolarizing: j["model"] = "depolarizing"; break;
        case ModelVariant::biased: j["model"] = "biased"; break;
        case ModelVariant::inhomogeneous: j["model"] = "inhomogeneous"; break;
    }
    j["convention"] =
        convention == Convention::error_rate ? "error_rate" : "depol_parameter";
    j["p"] = p;
    if (variant == ModelVariant::biased) j["eta"] = eta;
    if (variant == ModelVariant::inhomogeneous) {
        nlohmann::json pq;
        for (const auto& [q, v] : per_qubit) pq[std::to_string(q)] = v;
        j["per_qubit"] = pq;
    }
    if (confusion) {
        j["measurement"] = {{"p", confusion->p}, {"delta", confusion->delta}};
    }
    if (amp_damping_gamma) j["amplitude_damping"] = {{"gamma", *amp_damping_gamma}};
    return j.dump(2);
}

NoiseModel NoiseModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NoiseModel m;
    std::string model = j.value("model", "depolarizing");
    std::string conv = j.value("convention", "depol_parameter");
    m.convention = conv == "error_rate" ? Convention::error_rate : Convention::depol_parameter;
    m.p = j.value("p", 0.0);
    if (model == "depolarizing") {
        m.variant = ModelVariant::depolarizing;
    } else if (model == "biased") {
        m.variant = ModelVariant::biased;
        m.eta = j.at("eta").get<double>();
        m.convention = Convention::error_rate;
    } else if (model == "inhomogeneous") {
        m.variant = ModelVariant::inhomogeneous;
        m.convention = Convention::depol_parameter;
        for (auto& [k, v] : j.at("per_qubit").items())
            m.per_qubit[QubitId(std::stoul(k))] = v.get<double>();
    } else {
        throw std::runtime_error("unknown noise model: " + model);
    }
    if (j.contains("measurement"))
        m.confusion = make_measurement_confusion(j["measurement"].at("p").get<double>(),
                                                 j["measurement"].value("delta", 0.0));
    if (j.contains("amplitude_damping"))
        m.amp_damping_gamma = j["amplitude_damping"].at("gamma").get<double>();
    return m;
}

}  // namespace hh
