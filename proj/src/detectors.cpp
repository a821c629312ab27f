#include "hh/detectors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hh {

namespace {

std::uint8_t xor_input_bits(const CircuitMeta& meta, const std::vector<QubitId>& support) {
    std::uint8_t v = 0;
    for (QubitId q : support) {
        auto it = std::find(meta.data_qubits.begin(), meta.data_qubits.end(), q);
        if (it == meta.data_qubits.end())
            throw std::logic_error("operator support outside circuit data qubits");
        v ^= meta.input_bits.at(std::size_t(it - meta.data_qubits.begin()));
    }
    return v;
}

}  // namespace

DetectorSet build_detectors(const Circuit& circuit, const CodeLayout& layout,
                            bool include_final) {
    const auto& meta = circuit.meta;
    DetectorSet set;

    // bit lookup tables
    std::map<std::pair<int, int>, std::vector<int>> gauge_bits;  // (gauge id, cycle)
    std::map<QubitId, int> data_final_bits;
    int max_cycle = -1;
    for (const auto& b : circuit.classical_bits) {
        if (b.kind == BitKind::gauge_outcome) {
            gauge_bits[{b.operator_id, b.cycle}].push_back(b.bit_index);
            max_cycle = std::max(max_cycle, b.cycle);
        } else if (b.kind == BitKind::data_final) {
            data_final_bits[b.qubit] = b.bit_index;
        }
    }

    struct Op {
        std::string name;
        std::vector<int> gauge_ids;
        std::vector<QubitId> support;
        Basis basis;
    };
    std::vector<Op> ops;

    if (meta.stabilizer_level) {
        for (const auto& s : layout.stabilizers) {
            Op op;
            op.name = s.name();
            op.gauge_ids = s.factors;
            for (const auto& [q, p] : s.pauli.support) op.support.push_back(q);
            op.basis = s.kind == StabilizerKind::surface_z ? Basis::z : Basis::x;
            ops.push_back(std::move(op));
        }
    } else {
        for (int gid : meta.operator_ids) {
            const auto& g = layout.gauges.at(gid);
            ops.push_back({g.name(), {gid}, g.data_support,
                           g.kind == GaugeKind::z_type ? Basis::z : Basis::x});
        }
    }
    for (const auto& op : ops) set.op_names.push_back(op.name);
    set.cycles = max_cycle + 1;

    for (std::size_t s = 0; s < ops.size(); ++s) {
        const Op& op = ops[s];
        for (int c = 0; c <= max_cycle; ++c) {
            DetectorDef d;
            d.op_name = op.name;
            d.op_index = int(s);
            d.cycle = c;
            d.data_support = op.support;
            bool have = true;
            for (int gid : op.gauge_ids) {
                auto it = gauge_bits.find({gid, c});
                if (it == gauge_bits.end()) { have = false; break; }
                d.bits.insert(d.bits.end(), it->second.begin(), it->second.end());
            }
            if (!have) continue;
            if (c == 0) {
                d.kind = DetectorKind::first_cycle;
                d.defined = (op.basis == meta.input_basis);
                d.predicted = d.defined ? xor_input_bits(meta, op.support) : 0;
            } else {
                d.kind = DetectorKind::mid_cycle;
                for (int gid : op.gauge_ids) {
                    const auto& prev = gauge_bits.at({gid, c - 1});
                    d.bits.insert(d.bits.end(), prev.begin(), prev.end());
                }
                d.predicted = 0;
            }
            set.detectors.push_back(std::move(d));
        }
        // Final comparison: data-qubit measurement products against the last
        // recorded operator value.
        if (include_final && !data_final_bits.empty() && max_cycle >= 0) {
            DetectorDef d;
            d.op_name = op.name;
            d.op_index = int(s);
            d.cycle = max_cycle + 1;
            d.kind = DetectorKind::final_cycle;
            d.data_support = op.support;
            d.defined = (op.basis == meta.input_basis);
            d.predicted = 0;
            bool have = true;
            for (int gid : op.gauge_ids) {
                auto it = gauge_bits.find({gid, max_cycle});
                if (it == gauge_bits.end()) { have = false; break; }
                d.bits.insert(d.bits.end(), it->second.begin(), it->second.end());
            }
            for (QubitId q : op.support) {
                auto it = data_final_bits.find(q);
                if (it == data_final_bits.end()) { have = false; break; }
                d.bits.push_back(it->second);
            }
            if (have) set.detectors.push_back(std::move(d));
        }
    }
    return set;
}

}  // namespace hh
