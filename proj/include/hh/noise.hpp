#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hh/circuit.hpp"

namespace hh {

enum class Convention : std::uint8_t { error_rate, depol_parameter };

enum class ChannelVariant : std::uint8_t {
    bit_flip,
    phase_flip,
    depolarizing,
    pauli_table,
    biased,
    amplitude_damping,
    measurement_confusion,
};

// Explicit channel description. Pauli channels carry a probability table
// (4 entries for n=1, 16 for n=2, identity included); amplitude damping a
// Kraus pair; measurement confusion a 2x2 row-stochastic matrix.
struct ChannelSpec {
    ChannelVariant variant = ChannelVariant::depolarizing;
    int n = 1;
    Convention convention = Convention::depol_parameter;
    double p = 0.0;
    double eta = 0.5;
    double gamma = 0.0;
    double delta = 0.0;
    std::vector<double> pauli_probs;  // index = base-4 digits, qubit 0 most significant

    // measurement confusion matrix P(i|j): rows j = true value
    std::array<std::array<double, 2>, 2> confusion{{{1, 0}, {0, 1}}};
};

ChannelSpec make_bit_flip(double p);
ChannelSpec make_phase_flip(double p);
ChannelSpec make_depolarizing(int n, double value, Convention conv);
ChannelSpec make_pauli_table(int n, std::vector<double> nontrivial_probs);
ChannelSpec make_biased(int n, double p, double eta);
ChannelSpec make_amplitude_damping(double gamma);
ChannelSpec make_measurement_confusion(double p, double delta);

double convert_convention(double value, int n, Convention from);

enum class ModelVariant : std::uint8_t { depolarizing, biased, inhomogeneous };

// Per-instruction-class noise bindings. Single-qubit gates and idles carry the
// same channel; two-qubit channels follow CNOTs; resets carry the single-qubit
// channel; measurement is noiseless unless a confusion channel is configured,
// in which case classical flips are applied at readout and at data preparation
// (SPAM treated symmetrically).
struct NoiseModel {
    ModelVariant variant = ModelVariant::depolarizing;
    Convention convention = Convention::depol_parameter;
    double p = 0.0;
    double eta = 0.5;
    std::map<QubitId, double> per_qubit;  // inhomogeneous depolarizing parameters
    std::optional<ChannelSpec> confusion;
    std::optional<double> amp_damping_gamma;  // dense engine only

    static NoiseModel uniform_depolarizing(double value,
                                           Convention conv = Convention::depol_parameter) {
        NoiseModel m;
        m.variant = ModelVariant::depolarizing;
        m.convention = conv;
        m.p = value;
        return m;
    }
    static NoiseModel biased(double p, double eta) {
        NoiseModel m;
        m.variant = ModelVariant::biased;
        m.convention = Convention::error_rate;
        m.p = p;
        m.eta = eta;
        return m;
    }
    static NoiseModel inhomogeneous(std::map<QubitId, double> per_qubit) {
        NoiseModel m;
        m.variant = ModelVariant::inhomogeneous;
        m.convention = Convention::depol_parameter;
        m.per_qubit = std::move(per_qubit);
        return m;
    }

    bool is_zero() const;
    double qubit_parameter(QubitId q) const;
    // arithmetic mean rule for two-qubit channels
    double pair_parameter(QubitId a, QubitId b) const {
        return 0.5 * (qubit_parameter(a) + qubit_parameter(b));
    }

    ChannelSpec one_qubit_channel(QubitId q) const;
    ChannelSpec two_qubit_channel(QubitId a, QubitId b) const;

    std::string to_json() const;
    static NoiseModel from_json(const std::string& text);
};

double spam_rate(const NoiseModel& model);

enum class LocationKind : std::uint8_t { pauli1, pauli2, measure_flip, prep_flip };

struct FaultLocation {
    int id = -1;
    LocationKind kind = LocationKind::pauli1;
    int timestep = -1;
    QubitId q0 = 0, q1 = 0;
    int bit = -1;               // measure_flip: classical bit index
    Basis basis = Basis::z;     // prep_flip basis
    std::vector<double> probs;  // pauli tables, or flip probs {p(flip|0), p(flip|1)}
};

struct NoisyCircuit {
    const Circuit* circuit = nullptr;
    NoiseModel model;
    std::vector<FaultLocation> locations;
    bool uniform_depol_parameter = false;  // all Pauli locations share one q=p/2
};

NoisyCircuit attach_noise(const Circuit& circuit, const NoiseModel& model);

}  // namespace hh
