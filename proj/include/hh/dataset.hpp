#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hh/circuit.hpp"

namespace hh {

// Per-shot measurement records aligned to the circuit's classical bit labels.
struct SyndromeDataset {
    CircuitMeta meta;
    std::vector<ClassicalBitLabel> labels;
    std::vector<std::vector<std::uint8_t>> shots;
    std::string source = "simulated";
    std::uint64_t seed = 0;

    std::size_t num_bits() const { return labels.size(); }
    std::size_t num_shots() const { return shots.size(); }
};

}  // namespace hh
