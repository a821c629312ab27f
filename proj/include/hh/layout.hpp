#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hh/pauli.hpp"

namespace hh {

enum class QubitRole : std::uint8_t { data, measure, flag };

enum class GaugeKind : std::uint8_t { z_type, x_type };

struct GaugeOp {
    int id = -1;          // global gauge index
    int kind_index = -1;  // index within the Z or X family
    GaugeKind kind = GaugeKind::z_type;
    std::vector<QubitId> data_support;   // ascending
    QubitId measure_qubit = 0;
    std::vector<QubitId> flag_qubits;    // empty for Z-type
    PauliOperator pauli;                 // the measured operator

    std::string name() const {
        return (kind == GaugeKind::z_type ? "Z" : "X") + std::to_string(kind_index);
    }
};

enum class StabilizerKind : std::uint8_t { surface_z, bacon_shor_x };

struct StabilizerOp {
    int id = -1;
    StabilizerKind kind = StabilizerKind::surface_z;
    PauliOperator pauli;
    std::vector<int> factors;  // gauge ids whose product equals pauli

    std::string name() const {
        return (kind == StabilizerKind::surface_z ? "SZ" : "SX") + std::to_string(id);
    }
};

// Distance-d heavy-hexagon code: d^2 data qubits on a grid, two-qubit Z gauge
// operators on vertical links, weight-4 X gauges on bulk plaquettes and
// weight-2 X gauges on the top/bottom boundary, measured through flag qubits.
// Immutable after construction.
struct CodeLayout {
    int distance = 0;
    std::vector<QubitRole> roles;                 // indexed by qubit id
    std::vector<std::pair<QubitId, QubitId>> adjacency;
    std::vector<GaugeOp> gauges;                  // all Z gauges first, then X
    std::vector<StabilizerOp> stabilizers;        // surface Z first, then Bacon-Shor X
    PauliOperator logical_x, logical_z;

    std::size_t num_qubits() const { return roles.size(); }
    std::size_t count_role(QubitRole r) const;
    std::vector<QubitId> qubits_with_role(QubitRole r) const;

    QubitId data_qubit(int row, int col) const {
        return QubitId(row * distance + col);
    }
    // Link ancilla between data (row,col) and (row+1,col).
    QubitId link_qubit(int row, int col) const {
        return QubitId(distance * distance + row * distance + col);
    }

    std::vector<int> z_gauge_ids() const;
    std::vector<int> x_gauge_ids() const;
    const GaugeOp& gauge_by_name(const std::string& name) const;
    const StabilizerOp& stabilizer_by_name(const std::string& name) const;

    std::string to_json() const;
    static CodeLayout from_json(const std::string& text);
};

CodeLayout build_layout(int distance);

// The decomposition is produced during construction; this accessor exposes
// the factor lists for external callers.
std::vector<StabilizerOp> stabilizer_decomposition(const CodeLayout& layout);

struct LayoutCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct LayoutReport {
    std::vector<LayoutCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

LayoutReport verify_layout(const CodeLayout& layout);

}  // namespace hh
