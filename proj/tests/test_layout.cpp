#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hh/layout.hpp"

using namespace hh;

TEST_CASE("qubit counts follow the closed-form formulas") {
    struct Row {
        int d, data, measure, flag, total;
    };
    // d=3 from the text; d=5 and d=7 evaluated from d^2, (d+1)(d-1)/2, d(d+1)-2
    std::vector<Row> rows = {{3, 9, 4, 10, 23}, {5, 25, 12, 28, 65}, {7, 49, 24, 54, 127}};
    for (const auto& r : rows) {
        auto L = build_layout(r.d);
        CHECK(int(L.count_role(QubitRole::data)) == r.data);
        CHECK(int(L.count_role(QubitRole::measure)) == r.measure);
        CHECK(int(L.count_role(QubitRole::flag)) == r.flag);
        CHECK(int(L.num_qubits()) == r.total);
    }
}

TEST_CASE("invalid distances are rejected") {
    CHECK_THROWS(build_layout(2));
    CHECK_THROWS(build_layout(4));
    CHECK_THROWS(build_layout(1));
    CHECK_THROWS(build_layout(-3));
}

TEST_CASE("d=3 gauge and stabilizer structure") {
    auto L = build_layout(3);
    CHECK(L.z_gauge_ids().size() == 6);
    CHECK(L.x_gauge_ids().size() == 4);

    // the top Bacon-Shor stabilizer X0X1X3X4X6X7 factors as (X0X1)(X3X4X6X7)
    const auto& sx = L.stabilizer_by_name("SX4");
    CHECK(sx.kind == StabilizerKind::bacon_shor_x);
    std::vector<QubitId> want{0, 1, 3, 4, 6, 7};
    std::vector<QubitId> got;
    for (const auto& [q, p] : sx.pauli.support) got.push_back(q);
    CHECK(got == want);
    REQUIRE(sx.factors.size() == 2);
    std::vector<std::size_t> weights;
    for (int gid : sx.factors) weights.push_back(L.gauges[gid].data_support.size());
    std::sort(weights.begin(), weights.end());
    CHECK(weights == std::vector<std::size_t>{2, 4});

    // bulk Z stabilizer Z0Z1Z3Z4 from dominoes Z0Z3 and Z1Z4
    const auto& sz = L.stabilizers[0];
    CHECK(sz.kind == StabilizerKind::surface_z);
    std::vector<QubitId> zsup;
    for (const auto& [q, p] : sz.pauli.support) zsup.push_back(q);
    CHECK(zsup == std::vector<QubitId>{0, 1, 3, 4});
    REQUIRE(sz.factors.size() == 2);
    CHECK(L.gauges[sz.factors[0]].data_support == std::vector<QubitId>{0, 3});
    CHECK(L.gauges[sz.factors[1]].data_support == std::vector<QubitId>{1, 4});

    // boundary Z stabilizer Z2Z5 has a single gauge factor
    bool found_z2z5 = false;
    for (const auto& s : L.stabilizers) {
        if (s.kind != StabilizerKind::surface_z || s.factors.size() != 1) continue;
        const auto& g = L.gauges[s.factors[0]];
        if (g.data_support == std::vector<QubitId>{2, 5}) found_z2z5 = true;
    }
    CHECK(found_z2z5);
}

TEST_CASE("verify_layout passes for valid distances, weights scale as 2d") {
    for (int d : {3, 5, 7, 9}) {
        auto L = build_layout(d);
        auto rep = verify_layout(L);
        for (const auto& c : rep.checks) {
            INFO("d=" << d << " check " << c.name << " " << c.detail);
            CHECK(c.pass);
        }
        for (const auto& s : L.stabilizers)
            if (s.kind == StabilizerKind::bacon_shor_x)
                CHECK(s.pauli.weight() == std::size_t(2 * d));
    }
}

TEST_CASE("corrupting a gauge factor breaks the decomposition check") {
    auto L = build_layout(3);
    // retarget one domino so the product no longer matches the stabilizer
    auto& g = L.gauges[L.stabilizers[0].factors[0]];
    g.pauli.support.clear();
    g.pauli.support[g.data_support[0]] = PauliKind::Z;
    g.pauli.support[8] = PauliKind::Z;
    auto rep = verify_layout(L);
    bool decomp_ok = true;
    for (const auto& c : rep.checks)
        if (c.name == "stabilizers.decomposition") decomp_ok = c.pass;
    CHECK_FALSE(decomp_ok);
}

TEST_CASE("gauge commutation properties") {
    auto L = build_layout(5);
    // X and Z gauges sharing exactly one qubit anticommute; that is allowed
    int anti = 0;
    for (const auto& a : L.gauges)
        for (const auto& b : L.gauges)
            if (a.kind != b.kind && a.pauli.anticommutes(b.pauli)) ++anti;
    CHECK(anti > 0);
}

TEST_CASE("layout json round trip") {
    auto L = build_layout(3);
    auto text = L.to_json();
    auto L2 = CodeLayout::from_json(text);
    CHECK(L2.distance == 3);
    CHECK(L2.num_qubits() == L.num_qubits());
    CHECK(L2.to_json() == text);
}
