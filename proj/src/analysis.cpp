#include "hh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hh {

double xor_combine(double pa, double pb) {
    if (pa < 0 || pa > 1 || pb < 0 || pb > 1)
        throw std::invalid_argument("xor_combine needs probabilities in [0,1]");
    return pa * (1 - pb) + pb * (1 - pa);
}

namespace {

// inverse standard normal CDF (Acklam's rational approximation)
double inv_norm_cdf(double p) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("inv_norm_cdf domain");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

Interval binomial_interval(long successes, long trials, double confidence) {
    if (trials < 1 || successes < 0 || successes > trials)
        throw std::invalid_argument("binomial_interval domain");
    double z = inv_norm_cdf(0.5 + confidence / 2.0);
    double n = double(trials);
    double phat = double(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct OpSpec {
    std::string name;
    std::vector<int> gauge_ids;
    std::vector<QubitId> support;
    Basis basis;
};

std::vector<OpSpec> analyzed_operators(const CircuitMeta& meta, const CodeLayout& layout) {
    std::vector<OpSpec> ops;
    if (meta.stabilizer_level) {
        for (const auto& s : layout.stabilizers) {
            OpSpec op;
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
    return ops;
}

struct BitIndex {
    std::vector<std::vector<int>> gauge_cycle_bits;  // [gauge][cycle] -> bit
    std::vector<int> data_final;                     // by data position
    int cycles = 0;
};

BitIndex index_bits(const SyndromeDataset& ds, const CodeLayout& layout) {
    BitIndex ix;
    int max_cycle = -1;
    for (const auto& b : ds.labels)
        if (b.kind == BitKind::gauge_outcome) max_cycle = std::max(max_cycle, b.cycle);
    ix.cycles = max_cycle + 1;
    ix.gauge_cycle_bits.assign(layout.gauges.size(),
                               std::vector<int>(std::size_t(ix.cycles), -1));
    ix.data_final.assign(layout.num_qubits(), -1);
    for (const auto& b : ds.labels) {
        if (b.kind == BitKind::gauge_outcome)
            ix.gauge_cycle_bits.at(b.operator_id).at(b.cycle) = b.bit_index;
        else if (b.kind == BitKind::data_final)
            ix.data_final.at(b.qubit) = b.bit_index;
    }
    return ix;
}

std::uint8_t xor_input(const CircuitMeta& meta, const std::vector<QubitId>& support) {
    std::uint8_t v = 0;
    for (QubitId q : support) {
        auto it = std::find(meta.data_qubits.begin(), meta.data_qubits.end(), q);
        if (it == meta.data_qubits.end())
            throw std::runtime_error("malformed dataset: support outside data qubits");
        v ^= meta.input_bits.at(std::size_t(it - meta.data_qubits.begin()));
    }
    return v;
}

// single-shot operator value (XOR over the member gauge bits at a cycle)
inline std::uint8_t op_value(const std::vector<std::uint8_t>& shot,
                             const BitIndex& ix, const OpSpec& op, int cycle) {
    std::uint8_t v = 0;
    for (int gid : op.gauge_ids) {
        int bit = ix.gauge_cycle_bits[gid][cycle];
        if (bit < 0) throw std::runtime_error("malformed dataset: missing gauge bit");
        v ^= shot[bit];
    }
    return v;
}

}  // namespace

ChangeRateTable change_rates(const SyndromeDataset& ds, const CodeLayout& layout,
                             double confidence) {
    auto ops = analyzed_operators(ds.meta, layout);
    auto ix = index_bits(ds, layout);
    const long n_shots = long(ds.num_shots());
    ChangeRateTable table;

    bool have_final = std::any_of(ix.data_final.begin(), ix.data_final.end(),
                                  [](int b) { return b >= 0; });

    for (std::size_t s = 0; s < ops.size(); ++s) {
        const auto& op = ops[s];
        for (int c = 0; c < ix.cycles; ++c) {
            ChangeRateRow row;
            row.op_name = op.name;
            row.op_index = int(s);
            row.cycle = c;
            row.shots = n_shots;
            if (c == 0) {
                row.defined = op.basis == ds.meta.input_basis;
                if (row.defined) {
                    std::uint8_t predicted = xor_input(ds.meta, op.support);
                    for (const auto& shot : ds.shots)
                        row.changes += (op_value(shot, ix, op, 0) != predicted);
                }
            } else {
                row.defined = true;
                for (const auto& shot : ds.shots)
                    row.changes += (op_value(shot, ix, op, c) != op_value(shot, ix, op, c - 1));
            }
            if (row.defined && n_shots > 0) {
                row.rate = double(row.changes) / double(n_shots);
                auto ci = binomial_interval(row.changes, n_shots, confidence);
                row.ci_low = ci.low;
                row.ci_high = ci.high;
            }
            table.rows.push_back(std::move(row));
        }
        if (have_final && ix.cycles > 0) {
            ChangeRateRow row;
            row.op_name = op.name;
            row.op_index = int(s);
            row.cycle = ix.cycles;
            row.is_final = true;
            row.shots = n_shots;
            row.defined = op.basis == ds.meta.input_basis;
            if (row.defined) {
                for (const auto& shot : ds.shots) {
                    std::uint8_t prod = 0;
                    for (QubitId q : op.support) {
                        int bit = ix.data_final.at(q);
                        if (bit < 0) { row.defined = false; break; }
                        prod ^= shot[bit];
                    }
                    if (!row.defined) break;
                    row.changes += (prod != op_value(shot, ix, op, ix.cycles - 1));
                }
            }
            if (row.defined && n_shots > 0) {
                row.rate = double(row.changes) / double(n_shots);
                auto ci = binomial_interval(row.changes, n_shots, confidence);
                row.ci_low = ci.low;
                row.ci_high = ci.high;
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

DetectionEventStream detection_events(const SyndromeDataset& ds, const CodeLayout& layout) {
    auto ops = analyzed_operators(ds.meta, layout);
    auto ix = index_bits(ds, layout);
    DetectionEventStream st;
    st.cycles = ix.cycles;
    for (const auto& op : ops) {
        st.op_names.push_back(op.name);
        st.support_of_op.push_back(op.support);
    }
    const int n_idx = int(ops.size()) * ix.cycles;
    st.op_of_index.resize(n_idx);
    st.cycle_of_index.resize(n_idx);
    st.defined.resize(n_idx);
    for (std::size_t s = 0; s < ops.size(); ++s)
        for (int c = 0; c < ix.cycles; ++c) {
            int i = int(s) * ix.cycles + c;
            st.op_of_index[i] = int(s);
            st.cycle_of_index[i] = c;
            st.defined[i] = c > 0 || ops[s].basis == ds.meta.input_basis;
        }

    st.events.assign(ds.num_shots(), std::vector<std::uint8_t>(n_idx, 0));
    std::vector<std::uint8_t> predicted(ops.size(), 0);
    for (std::size_t s = 0; s < ops.size(); ++s)
        if (ops[s].basis == ds.meta.input_basis)
            predicted[s] = xor_input(ds.meta, ops[s].support);

    for (std::size_t shot = 0; shot < ds.num_shots(); ++shot) {
        const auto& row = ds.shots[shot];
        for (std::size_t s = 0; s < ops.size(); ++s) {
            std::uint8_t prev = 0;
            for (int c = 0; c < ix.cycles; ++c) {
                std::uint8_t v = op_value(row, ix, ops[s], c);
                int i = int(s) * ix.cycles + c;
                if (c == 0)
                    st.events[shot][i] = st.defined[i] ? (v != predicted[s]) : 0;
                else
                    st.events[shot][i] = (v != prev);
                prev = v;
            }
        }
    }
    return st;
}

CorrelationMatrix correlation_matrix(const DetectionEventStream& st, double eps) {
    const std::size_t n = st.op_of_index.size();
    const double shots = double(st.events.size());
    if (shots == 0) throw std::invalid_argument("empty event stream");
    CorrelationMatrix m;
    m.stream = &st;
    m.mean.assign(n, 0.0);
    m.defined.assign(n, true);
    std::vector<std::vector<double>> joint(n, std::vector<double>(n, 0.0));
    for (const auto& row : st.events) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!row[i]) continue;
            m.mean[i] += 1;
            for (std::size_t j = i + 1; j < n; ++j)
                if (row[j]) joint[i][j] += 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i) m.mean[i] /= shots;
    for (std::size_t i = 0; i < n; ++i) {
        if (!st.defined[i] || std::abs(m.mean[i] - 0.5) < eps) m.defined[i] = false;
        m.defined[i] = m.defined[i] && st.defined[i];
    }
    m.p_ij.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!m.defined[i] || !m.defined[j]) continue;
            double xij = joint[i][j] / shots;
            double denom = (1 - 2 * m.mean[i]) * (1 - 2 * m.mean[j]);
            double v = (xij - m.mean[i] * m.mean[j]) / denom;
            m.p_ij[i][j] = m.p_ij[j][i] = v;
        }
    return m;
}

EntryClass classify_entry(const DetectionEventStream& st, int i, int j) {
    int si = st.op_of_index.at(i), sj = st.op_of_index.at(j);
    int dc = std::abs(st.cycle_of_index.at(i) - st.cycle_of_index.at(j));
    bool share = false;
    for (QubitId a : st.support_of_op.at(si))
        for (QubitId b : st.support_of_op.at(sj))
            if (a == b) share = true;
    if (si == sj && dc == 1) return EntryClass::time;
    if (si != sj && dc == 0 && share) return EntryClass::space;
    if (si != sj && dc == 1 && share) return EntryClass::space_time;
    return EntryClass::other;
}

std::vector<std::vector<EntryClass>> classify_entries(const CorrelationMatrix& m) {
    const std::size_t n = m.mean.size();
    std::vector<std::vector<EntryClass>> out(n, std::vector<EntryClass>(n, EntryClass::other));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out[i][j] = classify_entry(*m.stream, int(i), int(j));
    return out;
}

}  // namespace hh
