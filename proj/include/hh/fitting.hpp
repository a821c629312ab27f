#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hh/layout.hpp"

namespace hh {

struct FitResult {
    std::string variant;
    double p = 0.0;
    double eta = 0.0;
    std::map<QubitId, double> per_qubit;
    double p_bar = 0.0;  // mean over free (non-pinned) qubits
    double cost = 0.0;   // mean squared error over predicted rates
    long evaluations = 0;
    bool converged = true;
    bool local_minimum_caveat = true;  // derivative-free fits may sit in local minima
    std::uint64_t seed = 0;

    std::string to_json() const;
};

// Unique root of (1 - (1-p)^m)/2 = R on [0, 1).
double invert_rate(double rate, int m);

// Observed rates flattened to a vector; the predictor maps parameters to the
// same layout of entries.
using RateVector = std::vector<double>;

FitResult fit_global_uniform(const RateVector& observed,
                             const std::function<RateVector(double p)>& predictor);

FitResult fit_global_biased(const RateVector& observed,
                            const std::function<RateVector(double p, double eta)>& predictor);

// Gauss-Newton steps on a finite-difference linear surrogate inside a trust
// region (COBYLA-class derivative-free local optimization).
FitResult fit_inhomogeneous(const RateVector& observed,
                            const std::vector<QubitId>& free_qubits,
                            const std::function<RateVector(const std::map<QubitId, double>&)>& predictor,
                            const std::map<QubitId, double>& initial,
                            long budget);

double mse(const RateVector& a, const RateVector& b);

// Statistical floor of a sampled predictor: mean binomial variance per entry.
double predictor_noise_floor(const RateVector& rates, long shots);

}  // namespace hh
