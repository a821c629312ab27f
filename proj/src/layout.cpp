#include "hh/layout.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace hh {

namespace {

PauliOperator make_op(PauliKind p, const std::vector<QubitId>& qs) {
    PauliOperator op;
    for (QubitId q : qs) op.support[q] = p;
    return op;
}

}  // namespace

std::size_t CodeLayout::count_role(QubitRole r) const {
    std::size_t n = 0;
    for (auto x : roles) n += (x == r);
    return n;
}

std::vector<QubitId> CodeLayout::qubits_with_role(QubitRole r) const {
    std::vector<QubitId> out;
    for (QubitId q = 0; q < roles.size(); ++q)
        if (roles[q] == r) out.push_back(q);
    return out;
}

std::vector<int> CodeLayout::z_gauge_ids() const {
    std::vector<int> out;
    for (const auto& g : gauges)
        if (g.kind == GaugeKind::z_type) out.push_back(g.id);
    return out;
}

std::vector<int> CodeLayout::x_gauge_ids() const {
    std::vector<int> out;
    for (const auto& g : gauges)
        if (g.kind == GaugeKind::x_type) out.push_back(g.id);
    return out;
}

const GaugeOp& CodeLayout::gauge_by_name(const std::string& name) const {
    for (const auto& g : gauges)
        if (g.name() == name) return g;
    throw std::invalid_argument("no such gauge: " + name);
}

const StabilizerOp& CodeLayout::stabilizer_by_name(const std::string& name) const {
    for (const auto& s : stabilizers)
        if (s.name() == name) return s;
    throw std::invalid_argument("no such stabilizer: " + name);
}

CodeLayout build_layout(int d) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("heavy-hexagon distance must be odd and >= 3");

    CodeLayout L;
    L.distance = d;

    const int n_data = d * d;
    const int n_link = d * (d - 1);
    const int n_xg = (d * d - 1) / 2;  // one measure qubit per X gauge
    const int n_bflag = 2 * (d - 1);   // two flags per boundary X gauge

    L.roles.assign(n_data, QubitRole::data);
    L.roles.insert(L.roles.end(), n_link, QubitRole::flag);      // link ancillas
    L.roles.insert(L.roles.end(), n_xg, QubitRole::measure);     // X-gauge syndrome qubits
    L.roles.insert(L.roles.end(), n_bflag, QubitRole::flag);     // boundary flags

    auto data_q = [&](int r, int c) { return QubitId(r * d + c); };
    auto link_q = [&](int r, int c) { return QubitId(n_data + r * d + c); };
    const QubitId measure_base = QubitId(n_data + n_link);
    const QubitId bflag_base = measure_base + QubitId(n_xg);

    // Z gauges: every vertical link hosts a two-qubit gauge measured on its
    // link ancilla.
    std::map<std::pair<int, int>, int> z_gauge_at_link;
    for (int r = 0; r < d - 1; ++r) {
        for (int c = 0; c < d; ++c) {
            GaugeOp g;
            g.id = int(L.gauges.size());
            g.kind_index = g.id;
            g.kind = GaugeKind::z_type;
            g.data_support = {data_q(r, c), data_q(r + 1, c)};
            g.measure_qubit = link_q(r, c);
            g.pauli = make_op(PauliKind::Z, g.data_support);
            z_gauge_at_link[{r, c}] = g.id;
            L.gauges.push_back(g);
            L.adjacency.push_back({data_q(r, c), link_q(r, c)});
            L.adjacency.push_back({data_q(r + 1, c), link_q(r, c)});
        }
    }
    const int n_z_gauges = int(L.gauges.size());

    // X gauges by column strip. Strips with even c have their boundary pair
    // on the top row, odd strips on the bottom row.
    int measure_idx = 0;
    int bflag_idx = 0;
    for (int c = 0; c < d - 1; ++c) {
        std::vector<std::pair<int, bool>> rows;  // (row key, is_boundary)
        if (c % 2 == 0) {
            rows.push_back({-1, true});
            for (int r = 1; r < d - 1; r += 2) rows.push_back({r, false});
        } else {
            for (int r = 0; r < d - 1; r += 2) rows.push_back({r, false});
            rows.push_back({d - 1, true});
        }
        for (auto [r, boundary] : rows) {
            GaugeOp g;
            g.id = int(L.gauges.size());
            g.kind_index = g.id - n_z_gauges;
            g.kind = GaugeKind::x_type;
            g.measure_qubit = measure_base + QubitId(measure_idx++);
            if (boundary) {
                int row = (c % 2 == 0) ? 0 : d - 1;
                g.data_support = {data_q(row, c), data_q(row, c + 1)};
                QubitId fa = bflag_base + QubitId(bflag_idx++);
                QubitId fb = bflag_base + QubitId(bflag_idx++);
                g.flag_qubits = {fa, fb};
                L.adjacency.push_back({g.data_support[0], fa});
                L.adjacency.push_back({fa, g.measure_qubit});
                L.adjacency.push_back({g.measure_qubit, fb});
                L.adjacency.push_back({fb, g.data_support[1]});
            } else {
                g.data_support = {data_q(r, c), data_q(r, c + 1),
                                  data_q(r + 1, c), data_q(r + 1, c + 1)};
                std::sort(g.data_support.begin(), g.data_support.end());
                g.flag_qubits = {link_q(r, c), link_q(r, c + 1)};
                L.adjacency.push_back({g.measure_qubit, link_q(r, c)});
                L.adjacency.push_back({g.measure_qubit, link_q(r, c + 1)});
            }
            g.pauli = make_op(PauliKind::X, g.data_support);
            L.gauges.push_back(g);
        }
    }

    // Surface-code Z stabilizers: bulk plaquettes at r+c even are products of
    // their two vertical dominoes; boundary column pairs are single gauges.
    for (int r = 0; r < d - 1; ++r) {
        for (int c = 0; c < d - 1; ++c) {
            if ((r + c) % 2 != 0) continue;
            StabilizerOp s;
            s.id = int(L.stabilizers.size());
            s.kind = StabilizerKind::surface_z;
            s.factors = {z_gauge_at_link[{r, c}], z_gauge_at_link[{r, c + 1}]};
            s.pauli = make_op(PauliKind::Z, {data_q(r, c), data_q(r, c + 1),
                                             data_q(r + 1, c), data_q(r + 1, c + 1)});
            L.stabilizers.push_back(s);
        }
    }
    for (int r = 1; r < d - 1; r += 2) {  // left boundary
        StabilizerOp s;
        s.id = int(L.stabilizers.size());
        s.kind = StabilizerKind::surface_z;
        s.factors = {z_gauge_at_link[{r, 0}]};
        s.pauli = make_op(PauliKind::Z, {data_q(r, 0), data_q(r + 1, 0)});
        L.stabilizers.push_back(s);
    }
    for (int r = 0; r < d - 1; r += 2) {  // right boundary
        StabilizerOp s;
        s.id = int(L.stabilizers.size());
        s.kind = StabilizerKind::surface_z;
        s.factors = {z_gauge_at_link[{r, d - 1}]};
        s.pauli = make_op(PauliKind::Z, {data_q(r, d - 1), data_q(r + 1, d - 1)});
        L.stabilizers.push_back(s);
    }

    // Bacon-Shor X stabilizers: one per column strip, product of the strip's
    // X gauges, weight 2d.
    for (int c = 0; c < d - 1; ++c) {
        StabilizerOp s;
        s.id = int(L.stabilizers.size());
        s.kind = StabilizerKind::bacon_shor_x;
        std::vector<QubitId> sup;
        for (int r = 0; r < d; ++r) {
            sup.push_back(data_q(r, c));
            sup.push_back(data_q(r, c + 1));
        }
        std::sort(sup.begin(), sup.end());
        s.pauli = make_op(PauliKind::X, sup);
        for (const auto& g : L.gauges) {
            if (g.kind != GaugeKind::x_type) continue;
            bool inside = true;
            for (QubitId q : g.data_support)
                if (!std::binary_search(sup.begin(), sup.end(), q)) inside = false;
            if (inside) s.factors.push_back(g.id);
        }
        L.stabilizers.push_back(s);
    }

    // Logical Z along the top data row, logical X down the leftmost column.
    std::vector<QubitId> zrow, xcol;
    for (int c = 0; c < d; ++c) zrow.push_back(data_q(0, c));
    for (int r = 0; r < d; ++r) xcol.push_back(data_q(r, 0));
    L.logical_z = make_op(PauliKind::Z, zrow);
    L.logical_x = make_op(PauliKind::X, xcol);

    std::sort(L.adjacency.begin(), L.adjacency.end());
    return L;
}

std::vector<StabilizerOp> stabilizer_decomposition(const CodeLayout& layout) {
    return layout.stabilizers;
}

LayoutReport verify_layout(const CodeLayout& L) {
    LayoutReport rep;
    const int d = L.distance;
    auto add = [&](const std::string& name, bool pass, std::string detail = "") {
        rep.checks.push_back({name, pass, std::move(detail)});
    };

    add("counts.data", int(L.count_role(QubitRole::data)) == d * d);
    add("counts.measure", int(L.count_role(QubitRole::measure)) == (d + 1) * (d - 1) / 2);
    add("counts.flag", int(L.count_role(QubitRole::flag)) == d * (d + 1) - 2);

    std::vector<int> degree(L.num_qubits(), 0);
    for (auto [a, b] : L.adjacency) {
        ++degree[a];
        ++degree[b];
    }
    int max_deg = 0;
    for (int x : degree) max_deg = std::max(max_deg, x);
    add("degree.le3", max_deg <= 3, "max degree " + std::to_string(max_deg));

    bool stabs_commute = true;
    for (std::size_t i = 0; i < L.stabilizers.size(); ++i)
        for (std::size_t j = i + 1; j < L.stabilizers.size(); ++j)
            if (L.stabilizers[i].pauli.anticommutes(L.stabilizers[j].pauli))
                stabs_commute = false;
    add("stabilizers.commute", stabs_commute);

    bool gauge_stab = true;
    for (const auto& g : L.gauges)
        for (const auto& s : L.stabilizers)
            if (g.pauli.anticommutes(s.pauli)) gauge_stab = false;
    add("gauges.commute_with_stabilizers", gauge_stab);

    bool same_type = true;
    for (std::size_t i = 0; i < L.gauges.size(); ++i)
        for (std::size_t j = i + 1; j < L.gauges.size(); ++j)
            if (L.gauges[i].kind == L.gauges[j].kind &&
                L.gauges[i].pauli.anticommutes(L.gauges[j].pauli))
                same_type = false;
    add("gauges.same_type_commute", same_type);

    add("logicals.anticommute", L.logical_x.anticommutes(L.logical_z));
    bool log_stab = true;
    for (const auto& s : L.stabilizers)
        if (L.logical_x.anticommutes(s.pauli) || L.logical_z.anticommutes(s.pauli))
            log_stab = false;
    add("logicals.commute_with_stabilizers", log_stab);

    // Decomposition: factor supports disjoint, product reproduces the pauli.
    bool decomp_ok = true;
    std::string decomp_detail;
    for (const auto& s : L.stabilizers) {
        std::set<QubitId> seen;
        std::map<QubitId, PauliKind> prod;
        for (int gid : s.factors) {
            const auto& g = L.gauges.at(gid);
            for (const auto& [q, p] : g.pauli.support) {
                if (!seen.insert(q).second) decomp_ok = false;
                prod[q] = p;
            }
        }
        if (prod != s.pauli.support) {
            decomp_ok = false;
            decomp_detail = s.name() + " product mismatch";
        }
    }
    add("stabilizers.decomposition", decomp_ok, decomp_detail);

    // Bacon-Shor weight 2d, surface-code weight in {2, 4}.
    bool weights_ok = true;
    for (const auto& s : L.stabilizers) {
        std::size_t w = s.pauli.weight();
        if (s.kind == StabilizerKind::bacon_shor_x && w != std::size_t(2 * d))
            weights_ok = false;
        if (s.kind == StabilizerKind::surface_z && w != 2 && w != 4)
            weights_ok = false;
    }
    add("stabilizers.weights", weights_ok);

    return rep;
}

std::string CodeLayout::to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["distance"] = distance;
    j["num_qubits"] = num_qubits();
    std::vector<std::string> role_names;
    for (auto r : roles)
        role_names.push_back(r == QubitRole::data ? "data"
                             : r == QubitRole::measure ? "measure" : "flag");
    j["roles"] = role_names;
    j["adjacency"] = adjacency;
    auto op_json = [](const PauliOperator& p) {
        nlohmann::json o;
        for (const auto& [q, k] : p.support)
            o[std::to_string(q)] = std::string(1, pauli_char(k));
        return o;
    };
    for (const auto& g : gauges) {
        nlohmann::json gj;
        gj["id"] = g.id;
        gj["kind"] = g.kind == GaugeKind::z_type ? "z" : "x";
        gj["data"] = g.data_support;
        gj["measure_qubit"] = g.measure_qubit;
        gj["flags"] = g.flag_qubits;
        j["gauges"].push_back(gj);
    }
    for (const auto& s : stabilizers) {
        nlohmann::json sj;
        sj["id"] = s.id;
        sj["kind"] = s.kind == StabilizerKind::surface_z ? "surface_z" : "bacon_shor_x";
        sj["pauli"] = op_json(s.pauli);
        sj["factors"] = s.factors;
        j["stabilizers"].push_back(sj);
    }
    j["logical_x"] = op_json(logical_x);
    j["logical_z"] = op_json(logical_z);
    return j.dump(2);
}

CodeLayout CodeLayout::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CodeLayout L = build_layout(j.at("distance").get<int>());
    // The layout is fully determined by the distance; validate the document
    // agrees so round trips are honest.
    if (j.at("num_qubits").get<std::size_t>() != L.num_qubits())
        throw std::runtime_error("layout json: qubit count mismatch");
    return L;
}

}  // namespace hh
