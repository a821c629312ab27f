#pragma once

#include <string>
#include <vector>

#include "hh/dataset.hpp"
#include "hh/detectors.hpp"
#include "hh/layout.hpp"

namespace hh {

struct ChangeRateRow {
    std::string op_name;
    int op_index = -1;
    int cycle = -1;            // cycles index the final data comparison too
    bool is_final = false;
    bool defined = true;
    long changes = 0;
    long shots = 0;
    double rate = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
};

struct ChangeRateTable {
    std::vector<ChangeRateRow> rows;

    const ChangeRateRow* find(const std::string& op, int cycle) const {
        for (const auto& r : rows)
            if (r.op_name == op && r.cycle == cycle) return &r;
        return nullptr;
    }
};

// Per-shot binary change events, index i = cycles * S + c.
struct DetectionEventStream {
    std::vector<std::string> op_names;
    int cycles = 0;
    std::vector<int> op_of_index;     // S per matrix index
    std::vector<int> cycle_of_index;  // c per matrix index
    std::vector<bool> defined;
    std::vector<std::vector<QubitId>> support_of_op;
    // events[shot][index]
    std::vector<std::vector<std::uint8_t>> events;
};

struct CorrelationMatrix {
    std::vector<double> mean;                 // <x_i>
    std::vector<std::vector<double>> p_ij;    // symmetric, zero diagonal
    std::vector<bool> defined;                // per index (mean away from 1/2)
    DetectionEventStream const* stream = nullptr;
};

enum class EntryClass : std::uint8_t { space, time, space_time, other };

inline const char* entry_class_name(EntryClass c) {
    switch (c) {
        case EntryClass::space: return "space";
        case EntryClass::time: return "time";
        case EntryClass::space_time: return "space_time";
        default: return "other";
    }
}

double xor_combine(double pa, double pb);

struct Interval {
    double low = 0, high = 0;
};

// Wilson score interval.
Interval binomial_interval(long successes, long trials, double confidence);

ChangeRateTable change_rates(const SyndromeDataset& dataset, const CodeLayout& layout,
                             double confidence = 0.95);

DetectionEventStream detection_events(const SyndromeDataset& dataset,
                                      const CodeLayout& layout);

CorrelationMatrix correlation_matrix(const DetectionEventStream& events,
                                     double mean_epsilon = 1e-3);

EntryClass classify_entry(const DetectionEventStream& events, int i, int j);

std::vector<std::vector<EntryClass>> classify_entries(const CorrelationMatrix& matrix);

}  // namespace hh
