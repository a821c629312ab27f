#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hh/layout.hpp"
#include "hh/pauli.hpp"

namespace hh {

enum class OpKind : std::uint8_t { reset, hadamard, pauli_x, cnot, measure, idle };

enum class Basis : std::uint8_t { z, x };

inline char basis_char(Basis b) { return b == Basis::z ? 'z' : 'x'; }

struct Instruction {
    OpKind kind = OpKind::idle;
    QubitId q0 = 0;
    QubitId q1 = 0;           // cnot target
    Basis basis = Basis::z;   // reset/measure basis
    int cbit = -1;            // measure classical bit

    static Instruction reset(QubitId q, Basis b = Basis::z) {
        return {OpKind::reset, q, 0, b, -1};
    }
    static Instruction h(QubitId q) { return {OpKind::hadamard, q, 0, Basis::z, -1}; }
    static Instruction x(QubitId q) { return {OpKind::pauli_x, q, 0, Basis::z, -1}; }
    static Instruction cx(QubitId c, QubitId t) { return {OpKind::cnot, c, t, Basis::z, -1}; }
    static Instruction measure(QubitId q, int bit, Basis b = Basis::z) {
        return {OpKind::measure, q, 0, b, bit};
    }
    static Instruction idle(QubitId q) { return {OpKind::idle, q, 0, Basis::z, -1}; }

    std::vector<QubitId> qubits() const {
        if (kind == OpKind::cnot) return {q0, q1};
        return {q0};
    }
};

enum class BitKind : std::uint8_t { gauge_outcome, flag_outcome, data_final };

struct ClassicalBitLabel {
    int bit_index = -1;
    BitKind kind = BitKind::gauge_outcome;
    int operator_id = -1;  // gauge id for gauge/flag bits
    int cycle = -1;
    QubitId qubit = 0;     // measured qubit
};

enum class CycleMode : std::uint8_t { z_only, x_only, full };

inline std::string mode_name(CycleMode m) {
    switch (m) {
        case CycleMode::z_only: return "z";
        case CycleMode::x_only: return "x";
        default: return "full";
    }
}

struct InputState {
    Basis basis = Basis::z;
    std::vector<std::uint8_t> bits;  // one per data qubit in the circuit's data list

    static InputState zeros(std::size_t n) { return {Basis::z, std::vector<std::uint8_t>(n, 0)}; }
    static InputState plus(std::size_t n) { return {Basis::x, std::vector<std::uint8_t>(n, 0)}; }
};

std::vector<InputState> enumerate_input_states(std::size_t support_size, Basis basis);

struct CircuitMeta {
    std::string family;        // "gauge", "stabilizer", "cycle", "ghz"
    int distance = 0;
    CycleMode mode = CycleMode::z_only;
    int cycles = 0;
    Basis input_basis = Basis::z;
    std::vector<std::uint8_t> input_bits;     // aligned to data_qubits
    std::vector<QubitId> data_qubits;         // qubits carrying the input state
    std::vector<int> operator_ids;            // measured gauges (layout ids)
    bool stabilizer_level = false;            // analyze stabilizer products (full mode)
};

struct Circuit {
    std::vector<QubitId> qubits;                        // active set, ascending
    std::vector<std::vector<Instruction>> timesteps;
    std::vector<ClassicalBitLabel> classical_bits;
    CircuitMeta meta;

    std::size_t num_bits() const { return classical_bits.size(); }
    std::size_t depth() const { return timesteps.size(); }
    std::size_t num_instructions() const {
        std::size_t n = 0;
        for (const auto& t : timesteps) n += t.size();
        return n;
    }

    void validate() const;  // disjointness + full qubit coverage per timestep

    std::string to_text() const;
    static Circuit from_text(const std::string& text);
};

Circuit build_gauge_circuit(const CodeLayout& layout, const GaugeOp& gauge,
                            const InputState& input);
Circuit build_stabilizer_circuit(const CodeLayout& layout, const StabilizerOp& stab,
                                 const InputState& input);
Circuit build_cycle_circuit(const CodeLayout& layout, CycleMode mode, int cycles,
                            const InputState& input);
Circuit build_ghz_circuit(int n_qubits);

}  // namespace hh
