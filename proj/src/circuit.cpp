#include "hh/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hh {

std::vector<InputState> enumerate_input_states(std::size_t n, Basis basis) {
    if (n < 1) throw std::invalid_argument("support size must be >= 1");
    if (n > 20) throw std::invalid_argument("refusing to enumerate > 2^20 states");
    std::vector<InputState> out;
    out.reserve(std::size_t(1) << n);
    for (std::size_t k = 0; k < (std::size_t(1) << n); ++k) {
        InputState s;
        s.basis = basis;
        s.bits.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            s.bits[i] = (k >> (n - 1 - i)) & 1;  // lexicographic, first qubit leftmost
        out.push_back(std::move(s));
    }
    return out;
}

void Circuit::validate() const {
    for (std::size_t t = 0; t < timesteps.size(); ++t) {
        std::set<QubitId> seen;
        for (const auto& ins : timesteps[t])
            for (QubitId q : ins.qubits())
                if (!seen.insert(q).second)
                    throw std::logic_error("qubit used twice in timestep " + std::to_string(t));
        if (seen.size() != qubits.size())
            throw std::logic_error("timestep " + std::to_string(t) +
                                   " does not cover all active qubits");
    }
}

namespace {

// Accumulates per-timestep instructions for a qubit subset, then pads with
// explicit idles so every active qubit appears in every timestep.
class ScheduleBuilder {
  public:
    explicit ScheduleBuilder(std::vector<QubitId> active) : active_(std::move(active)) {
        std::sort(active_.begin(), active_.end());
    }

    void add(std::size_t t, Instruction ins) {
        if (steps_.size() <= t) steps_.resize(t + 1);
        steps_[t].push_back(ins);
    }

    int add_measure(std::size_t t, QubitId q, Basis b, BitKind kind, int op_id, int cycle) {
        int bit = int(labels_.size());
        add(t, Instruction::measure(q, bit, b));
        labels_.push_back({bit, kind, op_id, cycle, q});
        return bit;
    }

    std::size_t depth() const { return steps_.size(); }

    Circuit finish(CircuitMeta meta) {
        Circuit c;
        c.qubits = active_;
        c.meta = std::move(meta);
        c.timesteps.resize(steps_.size());
        for (std::size_t t = 0; t < steps_.size(); ++t) {
            auto& out = c.timesteps[t];
            out = steps_[t];
            std::set<QubitId> used;
            for (const auto& ins : out)
                for (QubitId q : ins.qubits()) used.insert(q);
            for (QubitId q : active_)
                if (!used.count(q)) out.push_back(Instruction::idle(q));
            std::sort(out.begin(), out.end(),
                      [](const Instruction& a, const Instruction& b) { return a.q0 < b.q0; });
        }
        c.classical_bits = labels_;
        c.validate();
        return c;
    }

  private:
    std::vector<QubitId> active_;
    std::vector<std::vector<Instruction>> steps_;
    std::vector<ClassicalBitLabel> labels_;
};

void check_input(const GaugeOp& g, const InputState& in) {
    Basis want = g.kind == GaugeKind::z_type ? Basis::z : Basis::x;
    if (in.basis != want)
        throw std::invalid_argument("input basis does not match gauge kind");
    if (in.bits.size() != g.data_support.size())
        throw std::invalid_argument("input bit count does not match gauge support");
}

// Emits one gauge measurement template starting at timestep t0. Returns the
// template depth. Bits are labeled with (gauge id, cycle). `stagger` shifts
// the boundary-pair data couplings apart; cycle circuits use it where a
// neighbouring bulk plaquette touches the shared data qubit in the same slot.
std::size_t emit_gauge_template(ScheduleBuilder& sb, const GaugeOp& g, std::size_t t0,
                                int cycle, bool stagger = false) {
    if (g.kind == GaugeKind::z_type) {
        QubitId a = g.measure_qubit;
        sb.add(t0, Instruction::reset(a, Basis::z));
        sb.add(t0 + 1, Instruction::cx(g.data_support[0], a));
        sb.add(t0 + 2, Instruction::cx(g.data_support[1], a));
        sb.add_measure(t0 + 3, a, Basis::z, BitKind::gauge_outcome, g.id, cycle);
        return 4;
    }
    QubitId m = g.measure_qubit;
    if (g.data_support.size() == 2) {
        // Boundary pair: relay through the first flag, direct coupling to the
        // second data qubit, Hadamard readout on the syndrome qubit.
        QubitId fa = g.flag_qubits.at(0), fb = g.flag_qubits.at(1);
        QubitId da = g.data_support[0], db = g.data_support[1];
        sb.add(t0, Instruction::reset(m, Basis::x));
        sb.add(t0, Instruction::reset(fa, Basis::z));
        sb.add(t0, Instruction::reset(fb, Basis::z));
        sb.add(t0 + 1, Instruction::cx(m, fa));
        std::size_t t_meas;
        if (!stagger) {
            sb.add(t0 + 2, Instruction::cx(fa, da));
            sb.add(t0 + 2, Instruction::cx(m, db));
            sb.add(t0 + 3, Instruction::cx(m, fa));
            sb.add(t0 + 4, Instruction::h(m));
            t_meas = t0 + 5;
        } else {
            sb.add(t0 + 2, Instruction::cx(m, db));
            sb.add(t0 + 3, Instruction::cx(fa, da));
            sb.add(t0 + 4, Instruction::cx(m, fa));
            sb.add(t0 + 5, Instruction::h(m));
            t_meas = t0 + 6;
        }
        sb.add_measure(t_meas, m, Basis::z, BitKind::gauge_outcome, g.id, cycle);
        sb.add_measure(t_meas, fa, Basis::z, BitKind::flag_outcome, g.id, cycle);
        sb.add_measure(t_meas, fb, Basis::z, BitKind::flag_outcome, g.id, cycle);
        return t_meas - t0 + 1;
    }
    // Bulk weight-4 gauge: X-basis syndrome qubit fanned out to the plaquette,
    // flag ancillas reset and read alongside.
    sb.add(t0, Instruction::reset(m, Basis::x));
    for (QubitId f : g.flag_qubits) sb.add(t0, Instruction::reset(f, Basis::z));
    for (std::size_t k = 0; k < g.data_support.size(); ++k)
        sb.add(t0 + 1 + k, Instruction::cx(m, g.data_support[k]));
    std::size_t t_meas = t0 + 1 + g.data_support.size();
    sb.add_measure(t_meas, m, Basis::x, BitKind::gauge_outcome, g.id, cycle);
    for (QubitId f : g.flag_qubits)
        sb.add_measure(t_meas, f, Basis::z, BitKind::flag_outcome, g.id, cycle);
    return t_meas - t0 + 1;
}

std::vector<QubitId> gauge_qubits(const GaugeOp& g) {
    std::vector<QubitId> qs = g.data_support;
    qs.push_back(g.measure_qubit);
    for (QubitId f : g.flag_qubits) qs.push_back(f);
    return qs;
}

}  // namespace

Circuit build_gauge_circuit(const CodeLayout& layout, const GaugeOp& gauge,
                            const InputState& input) {
    check_input(gauge, input);
    ScheduleBuilder sb(gauge_qubits(gauge));
    emit_gauge_template(sb, gauge, 0, 0);
    CircuitMeta meta;
    meta.family = "gauge";
    meta.distance = layout.distance;
    meta.input_basis = input.basis;
    meta.input_bits = input.bits;
    meta.data_qubits = gauge.data_support;
    meta.operator_ids = {gauge.id};
    return sb.finish(std::move(meta));
}

Circuit build_stabilizer_circuit(const CodeLayout& layout, const StabilizerOp& stab,
                                 const InputState& input) {
    Basis want = stab.kind == StabilizerKind::surface_z ? Basis::z : Basis::x;
    if (input.basis != want)
        throw std::invalid_argument("input basis does not match stabilizer kind");
    std::vector<QubitId> data;
    for (const auto& [q, p] : stab.pauli.support) data.push_back(q);
    if (input.bits.size() != data.size())
        throw std::invalid_argument("input bit count does not match stabilizer support");

    std::vector<QubitId> active = data;
    for (int gid : stab.factors)
        for (QubitId q : gauge_qubits(layout.gauges.at(gid)))
            if (std::find(active.begin(), active.end(), q) == active.end())
                active.push_back(q);

    ScheduleBuilder sb(active);
    for (int gid : stab.factors) emit_gauge_template(sb, layout.gauges.at(gid), 0, 0);

    CircuitMeta meta;
    meta.family = "stabilizer";
    meta.distance = layout.distance;
    meta.input_basis = input.basis;
    meta.input_bits = input.bits;
    meta.data_qubits = data;
    meta.operator_ids = stab.factors;
    return sb.finish(std::move(meta));
}

Circuit build_cycle_circuit(const CodeLayout& layout, CycleMode mode, int cycles,
                            const InputState& input) {
    if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");
    Basis want = mode == CycleMode::x_only ? Basis::x : Basis::z;
    if (input.basis != want)
        throw std::invalid_argument("unsupported input basis for cycle mode");
    const int d = layout.distance;
    if (int(input.bits.size()) != d * d)
        throw std::invalid_argument("cycle circuits need one input bit per data qubit");

    std::vector<QubitId> data = layout.qubits_with_role(QubitRole::data);
    std::vector<QubitId> active = data;
    auto use_gauge = [&](const GaugeOp& g) {
        for (QubitId q : gauge_qubits(g))
            if (std::find(active.begin(), active.end(), q) == active.end())
                active.push_back(q);
    };
    std::vector<int> z_ids = layout.z_gauge_ids();
    std::vector<int> x_ids = layout.x_gauge_ids();
    if (mode != CycleMode::x_only)
        for (int gid : z_ids) use_gauge(layout.gauges.at(gid));
    if (mode != CycleMode::z_only)
        for (int gid : x_ids) use_gauge(layout.gauges.at(gid));

    ScheduleBuilder sb(active);
    std::size_t t = 0;
    for (int c = 0; c < cycles; ++c) {
        if (mode != CycleMode::z_only) {
            // Bulk plaquette fan-outs follow the NW/NE/SW/SE slot order, which
            // is conflict-free between neighbouring plaquettes. Top boundary
            // pairs at column >= 2 would hit their left neighbour's NE slot,
            // so those run the staggered variant.
            std::size_t depth = 0;
            for (int gid : x_ids) {
                const auto& g = layout.gauges.at(gid);
                bool top = g.data_support.size() == 2 && int(g.data_support[0]) < d;
                bool stagger = top && int(g.data_support[0]) % d >= 2;
                depth = std::max(depth, emit_gauge_template(sb, g, t, c, stagger));
            }
            t += depth;
        }
        if (mode != CycleMode::x_only) {
            std::size_t depth = 0;
            for (int gid : z_ids)
                depth = std::max(depth, emit_gauge_template(sb, layout.gauges.at(gid), t, c));
            t += depth;
        }
    }
    for (QubitId q : data)
        sb.add_measure(t, q, input.basis, BitKind::data_final, -1, cycles);

    CircuitMeta meta;
    meta.family = "cycle";
    meta.distance = d;
    meta.mode = mode;
    meta.cycles = cycles;
    meta.input_basis = input.basis;
    meta.input_bits = input.bits;
    meta.data_qubits = data;
    if (mode != CycleMode::x_only)
        meta.operator_ids.insert(meta.operator_ids.end(), z_ids.begin(), z_ids.end());
    if (mode != CycleMode::z_only)
        meta.operator_ids.insert(meta.operator_ids.end(), x_ids.begin(), x_ids.end());
    meta.stabilizer_level = (mode == CycleMode::full);
    return sb.finish(std::move(meta));
}

Circuit build_ghz_circuit(int n) {
    if (n < 2) throw std::invalid_argument("GHZ needs >= 2 qubits");
    std::vector<QubitId> qs(n);
    for (int i = 0; i < n; ++i) qs[i] = QubitId(i);
    ScheduleBuilder sb(qs);
    for (int i = 0; i < n; ++i) sb.add(0, Instruction::reset(QubitId(i)));
    sb.add(1, Instruction::h(0));
    for (int i = 0; i + 1 < n; ++i)
        sb.add(2 + i, Instruction::cx(QubitId(i), QubitId(i + 1)));
    std::size_t tm = 1 + n;
    for (int i = 0; i < n; ++i)
        sb.add_measure(tm, QubitId(i), Basis::z, BitKind::data_final, -1, 0);
    CircuitMeta meta;
    meta.family = "ghz";
    meta.input_basis = Basis::z;
    meta.input_bits.assign(n, 0);
    for (int i = 0; i < n; ++i) meta.data_qubits.push_back(QubitId(i));
    return sb.finish(std::move(meta));
}

// ---------------------------------------------------------------------------
// text serialization

namespace {

std::string instr_token(const Instruction& ins) {
    std::ostringstream os;
    switch (ins.kind) {
        case OpKind::reset:
            os << (ins.basis == Basis::z ? "r(" : "rx(") << ins.q0 << ")";
            break;
        case OpKind::hadamard: os << "h(" << ins.q0 << ")"; break;
        case OpKind::pauli_x: os << "x(" << ins.q0 << ")"; break;
        case OpKind::cnot: os << "cx(" << ins.q0 << "," << ins.q1 << ")"; break;
        case OpKind::measure:
            os << (ins.basis == Basis::z ? "m(" : "mx(") << ins.q0 << "," << ins.cbit << ")";
            break;
        case OpKind::idle: os << "i(" << ins.q0 << ")"; break;
    }
    return os.str();
}

Instruction parse_token(const std::string& tok) {
    auto open = tok.find('(');
    if (open == std::string::npos || tok.back() != ')')
        throw std::runtime_error("bad circuit token: " + tok);
    std::string op = tok.substr(0, open);
    std::string args = tok.substr(open + 1, tok.size() - open - 2);
    auto comma = args.find(',');
    auto arg0 = [&] { return QubitId(std::stoul(args.substr(0, comma))); };
    if (op == "r") return Instruction::reset(QubitId(std::stoul(args)), Basis::z);
    if (op == "rx") return Instruction::reset(QubitId(std::stoul(args)), Basis::x);
    if (op == "h") return Instruction::h(QubitId(std::stoul(args)));
    if (op == "x") return Instruction::x(QubitId(std::stoul(args)));
    if (op == "i") return Instruction::idle(QubitId(std::stoul(args)));
    if (op == "cx")
        return Instruction::cx(arg0(), QubitId(std::stoul(args.substr(comma + 1))));
    if (op == "m")
        return Instruction::measure(arg0(), std::stoi(args.substr(comma + 1)), Basis::z);
    if (op == "mx")
        return Instruction::measure(arg0(), std::stoi(args.substr(comma + 1)), Basis::x);
    throw std::runtime_error("unknown circuit op: " + op);
}

const char* bit_kind_name(BitKind k) {
    switch (k) {
        case BitKind::gauge_outcome: return "gauge";
        case BitKind::flag_outcome: return "flag";
        default: return "data_final";
    }
}

BitKind bit_kind_from(const std::string& s) {
    if (s == "gauge") return BitKind::gauge_outcome;
    if (s == "flag") return BitKind::flag_outcome;
    if (s == "data_final") return BitKind::data_final;
    throw std::runtime_error("unknown bit kind: " + s);
}

}  // namespace

std::string Circuit::to_text() const {
    nlohmann::json mj;
    mj["family"] = meta.family;
    mj["distance"] = meta.distance;
    mj["mode"] = mode_name(meta.mode);
    mj["cycles"] = meta.cycles;
    mj["basis"] = std::string(1, basis_char(meta.input_basis));
    std::string bits;
    for (auto b : meta.input_bits) bits += char('0' + b);
    mj["input_bits"] = bits;
    mj["data_qubits"] = meta.data_qubits;
    mj["operator_ids"] = meta.operator_ids;
    mj["stabilizer_level"] = meta.stabilizer_level;
    mj["qubits"] = qubits;

    std::ostringstream os;
    os << "HHCIRCUIT 1\n";
    os << "META " << mj.dump() << "\n";
    for (const auto& step : timesteps) {
        os << "T";
        for (const auto& ins : step) os << " " << instr_token(ins);
        os << "\n";
    }
    for (const auto& b : classical_bits)
        os << "BIT " << b.bit_index << " " << bit_kind_name(b.kind) << " "
           << b.operator_id << " " << b.cycle << " " << b.qubit << "\n";
    return os.str();
}

Circuit Circuit::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("HHCIRCUIT", 0) != 0)
        throw std::runtime_error("not a circuit file");
    Circuit c;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("META ", 0) == 0) {
            nlohmann::json mj = nlohmann::json::parse(line.substr(5));
            c.meta.family = mj.value("family", "");
            c.meta.distance = mj.value("distance", 0);
            std::string m = mj.value("mode", "z");
            c.meta.mode = m == "z" ? CycleMode::z_only
                          : m == "x" ? CycleMode::x_only : CycleMode::full;
            c.meta.cycles = mj.value("cycles", 0);
            c.meta.input_basis = mj.value("basis", "z") == "x" ? Basis::x : Basis::z;
            for (char ch : mj.value("input_bits", std::string()))
                c.meta.input_bits.push_back(ch == '1');
            c.meta.data_qubits = mj.value("data_qubits", std::vector<QubitId>{});
            c.meta.operator_ids = mj.value("operator_ids", std::vector<int>{});
            c.meta.stabilizer_level = mj.value("stabilizer_level", false);
            c.qubits = mj.value("qubits", std::vector<QubitId>{});
        } else if (line.rfind("T", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
            std::istringstream ls(line.substr(1));
            std::vector<Instruction> step;
            std::string tok;
            while (ls >> tok) step.push_back(parse_token(tok));
            c.timesteps.push_back(std::move(step));
        } else if (line.rfind("BIT ", 0) == 0) {
            std::istringstream ls(line.substr(4));
            ClassicalBitLabel b;
            std::string kind;
            unsigned q;
            ls >> b.bit_index >> kind >> b.operator_id >> b.cycle >> q;
            b.kind = bit_kind_from(kind);
            b.qubit = QubitId(q);
            c.classical_bits.push_back(b);
        } else {
            throw std::runtime_error("unrecognized circuit line: " + line);
        }
    }
    c.validate();
    return c;
}

}  // namespace hh
