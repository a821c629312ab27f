#pragma once

#include <string>
#include <vector>

#include "hh/circuit.hpp"
#include "hh/layout.hpp"

namespace hh {

enum class DetectorKind : std::uint8_t { first_cycle, mid_cycle, final_cycle };

// A change indicator: XOR of the listed classical bits, compared against the
// noiseless prediction. "defined" is false when the preparation or final
// measurement basis cannot determine the operator value (kept, never imputed).
struct DetectorDef {
    std::string op_name;
    int op_index = -1;  // position in the analyzed-operator list (matrix index S)
    int cycle = -1;
    DetectorKind kind = DetectorKind::first_cycle;
    std::vector<int> bits;
    bool defined = true;
    std::uint8_t predicted = 0;
    std::vector<QubitId> data_support;  // operator support (entry classification)
};

struct DetectorSet {
    std::vector<std::string> op_names;  // canonical operator order
    int cycles = 0;                     // matrix cycles (0 for single-shot circuits)
    std::vector<DetectorDef> detectors;

    const DetectorDef* find(int op_index, int cycle) const {
        for (const auto& d : detectors)
            if (d.op_index == op_index && d.cycle == cycle) return &d;
        return nullptr;
    }
};

// Derives the analyzed operators and their per-cycle change detectors from the
// circuit metadata: gauge-level for single-gauge/stabilizer circuits and the
// z/x cycle modes, stabilizer-level for full cycles.
DetectorSet build_detectors(const Circuit& circuit, const CodeLayout& layout,
                            bool include_final = true);

}  // namespace hh
