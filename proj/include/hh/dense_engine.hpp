#pragma once

#include <map>
#include <string>

#include "hh/dataset.hpp"
#include "hh/noise.hpp"

namespace hh {

// Exact outcome distribution over the circuit's classical bits via density
// operator evolution with measurement branching. Bitstring index i is
// classical bit i. Guarded to small systems.
std::map<std::string, double> exact_distribution(const Circuit& circuit,
                                                 const NoiseModel& model,
                                                 std::size_t max_qubits = 12);

// Stochastic Kraus unraveling on a statevector; supports Pauli channels,
// amplitude damping and measurement confusion.
SyndromeDataset run_trajectories(const NoisyCircuit& noisy, std::size_t shots,
                                 std::uint64_t seed, std::size_t max_qubits = 20);

}  // namespace hh
