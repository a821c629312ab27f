#pragma once

#include <vector>

#include "hh/dataset.hpp"
#include "hh/detectors.hpp"
#include "hh/noise.hpp"
#include "hh/rational.hpp"

namespace hh {

// S-component of a detector's back-propagated observable at one fault
// location. For Pauli locations a/b are PauliKind codes of the observable on
// the location's qubit(s); for classical flip locations a==1 marks membership.
struct LocalComponent {
    int location = -1;
    std::uint8_t a = 0, b = 0;
};

struct DetectorSensitivity {
    int detector_index = -1;
    bool deterministic = true;
    std::vector<LocalComponent> components;  // sensitive locations only
    std::vector<double> q;                   // aligned flip probabilities
    // readout-confusion entries: index into components plus the flip
    // probability conditioned on a pre-flipped value (differs when delta > 0)
    std::vector<std::pair<std::size_t, double>> confusion_alt;
    int m() const {
        int n = 0;
        for (double x : q) n += (x > 0.0);
        return n;
    }
};

struct SensitivityAnalysis {
    DetectorSet detectors;
    std::vector<DetectorSensitivity> sens;   // aligned with detectors.detectors
    std::vector<std::uint8_t> reference_bits;
    bool exact = true;  // false when value-dependent confusion makes rates approximate
};

SensitivityAnalysis fault_sensitivity(const NoisyCircuit& noisy, const CodeLayout& layout);
SensitivityAnalysis fault_sensitivity(const NoisyCircuit& noisy, const DetectorSet& dets);

// Exact change rate per detector under independent stochastic Pauli faults:
// (1 - prod(1-2q)) / 2. NaN for nondeterministic detectors.
std::vector<double> exact_detector_rates(const SensitivityAnalysis& an);
double exact_rate_from_qs(const std::vector<double>& qs);

struct RatePolynomial {
    std::vector<Rational> coeffs;  // ascending degree, coeffs[0] == 0

    double eval(double p) const {
        // Horner in extended precision; the expanded form is ill conditioned
        // near p = 1 for large m, where the closed form (1-(1-p)^m)/2 is the
        // right tool anyway.
        long double acc = 0;
        for (std::size_t k = coeffs.size(); k-- > 0;)
            acc = acc * p + (long double)(coeffs[k].value());
        return double(acc);
    }
};

// Expansion of (1 - (1-p)^m)/2 in the depolarizing parameter. Requires every
// sensitive location to carry the uniform depolarizing-parameter channel.
RatePolynomial change_rate_polynomial(const NoisyCircuit& noisy,
                                      const DetectorSensitivity& sens);
RatePolynomial rate_polynomial_for_m(int m);

struct CorrelationPrediction {
    std::vector<const DetectorDef*> detectors;
    std::vector<double> mean;               // <x_i>
    std::vector<std::vector<double>> p_ij;  // symmetric, zero diagonal
};

CorrelationPrediction predict_correlations(const NoisyCircuit& noisy,
                                           const SensitivityAnalysis& an,
                                           bool include_final = false);

// workers == 0 picks a count automatically; any split yields identical shots.
SyndromeDataset sample_shots(const NoisyCircuit& noisy, std::size_t shots,
                             std::uint64_t seed, std::size_t workers = 0);

// Reference (noiseless) bits with random outcomes resolved to 0.
std::vector<std::uint8_t> reference_bits(const Circuit& circuit);

// Re-evaluates exact detector rates for a different noise model using the
// stored sensitivity structure (which is model independent for Pauli models).
// Orders of magnitude cheaper than re-walking the circuit, so fitting loops
// can afford hundreds of evaluations.
std::vector<double> rates_for_model(const SensitivityAnalysis& an,
                                    const NoisyCircuit& base,
                                    const NoiseModel& model);

}  // namespace hh
