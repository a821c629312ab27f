#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hh/analysis.hpp"
#include "hh/pauli_engine.hpp"

using namespace hh;

namespace {

// All-zero dataset for a z-only cycle circuit, ready for targeted bit flips.
SyndromeDataset blank_dataset(const CodeLayout& L, int cycles, std::size_t shots) {
    auto circ = build_cycle_circuit(L, CycleMode::z_only, cycles, InputState::zeros(9));
    SyndromeDataset ds;
    ds.meta = circ.meta;
    ds.labels = circ.classical_bits;
    ds.shots.assign(shots, std::vector<std::uint8_t>(circ.num_bits(), 0));
    return ds;
}

int bit_of(const SyndromeDataset& ds, int gauge_id, int cycle) {
    for (const auto& b : ds.labels)
        if (b.kind == BitKind::gauge_outcome && b.operator_id == gauge_id &&
            b.cycle == cycle)
            return b.bit_index;
    return -1;
}

}  // namespace

TEST_CASE("xor_combine matches the composition formula") {
    CHECK(xor_combine(0.08, 0.08) == doctest::Approx(0.1472).epsilon(1e-15));
    CHECK(xor_combine(0.18, 0.17) == doctest::Approx(0.2888).epsilon(1e-15));
    CHECK(xor_combine(0.0, 0.37) == doctest::Approx(0.37));
    CHECK(xor_combine(0.37, 0.0) == doctest::Approx(0.37));
    CHECK(xor_combine(0.23, 0.5) == doctest::Approx(0.5));
    for (double a : {0.1, 0.43})
        for (double b : {0.0, 0.27})
            CHECK(xor_combine(a, b) == doctest::Approx(xor_combine(b, a)));
    CHECK_THROWS(xor_combine(-0.1, 0.2));
}

TEST_CASE("wilson intervals") {
    auto i0 = binomial_interval(0, 2048, 0.95);
    CHECK(i0.low == doctest::Approx(0.0));
    CHECK(i0.high == doctest::Approx(0.0018723).epsilon(1e-3));
    auto ih = binomial_interval(1024, 2048, 0.95);
    CHECK((ih.low + ih.high) / 2 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((ih.high - ih.low) / 2 == doctest::Approx(0.021655).epsilon(1e-3));
    auto i1 = binomial_interval(2048, 2048, 0.95);
    CHECK(i1.high == doctest::Approx(1.0));
    CHECK_THROWS(binomial_interval(5, 4, 0.95));
}

TEST_CASE("constant syndromes give zero intermediate rates; counting definition") {
    auto L = build_layout(3);
    auto ds = blank_dataset(L, 16, 2048);
    // flip the first-cycle Z0 outcome in 205 of 2048 shots
    int b = bit_of(ds, 0, 0);
    for (std::size_t s = 0; s < 205; ++s) ds.shots[s][b] = 1;

    auto table = change_rates(ds, L);
    const auto* first = table.find("Z0", 0);
    REQUIRE(first != nullptr);
    CHECK(first->changes == 205);
    CHECK(first->rate == doctest::Approx(205.0 / 2048.0));
    CHECK(first->ci_low <= first->rate);
    CHECK(first->ci_high >= first->rate);
    // the flip also registers as a change in cycle 1 (time-like pair)
    CHECK(table.find("Z0", 1)->changes == 205);
    for (int c = 2; c < 16; ++c) CHECK(table.find("Z0", c)->changes == 0);
    // other operators stay silent
    for (int c = 0; c < 16; ++c) CHECK(table.find("Z3", c)->changes == 0);
    // final data comparison consistent with the last cycle
    CHECK(table.find("Z0", 16)->changes == 0);
}

TEST_CASE("basis mismatches are marked undefined, never imputed") {
    auto L = build_layout(3);
    auto circ = build_cycle_circuit(L, CycleMode::full, 2, InputState::zeros(9));
    auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.02));
    auto ds = sample_shots(noisy, 64, 9);
    auto table = change_rates(ds, L);
    // X stabilizers cannot be compared against a Z preparation or Z readout
    const auto* sx_first = table.find("SX4", 0);
    REQUIRE(sx_first != nullptr);
    CHECK_FALSE(sx_first->defined);
    const auto* sx_final = table.find("SX4", 2);
    REQUIRE(sx_final != nullptr);
    CHECK_FALSE(sx_final->defined);
    CHECK(table.find("SX4", 1)->defined);
    CHECK(table.find("SZ0", 0)->defined);
    CHECK(table.find("SZ0", 2)->defined);
}

TEST_CASE("detection event means equal change rates exactly") {
    auto L = build_layout(3);
    auto circ = build_cycle_circuit(L, CycleMode::z_only, 5, InputState::zeros(9));
    auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.06));
    auto ds = sample_shots(noisy, 3000, 21);
    auto table = change_rates(ds, L);
    auto events = detection_events(ds, L);
    for (std::size_t s = 0; s < events.op_names.size(); ++s) {
        for (int c = 0; c < events.cycles; ++c) {
            long sum = 0;
            int i = int(s) * events.cycles + c;
            for (const auto& row : events.events) sum += row[i];
            const auto* r = table.find(events.op_names[s], c);
            REQUIRE(r != nullptr);
            CHECK(sum == r->changes);
        }
    }
}

TEST_CASE("single mid-stream flip yields exactly two consecutive events") {
    auto L = build_layout(3);
    auto ds = blank_dataset(L, 6, 1);
    ds.shots[0][bit_of(ds, 2, 3)] = 1;  // Z2 flipped at cycle 3 only
    auto events = detection_events(ds, L);
    long total = 0;
    for (auto e : events.events[0]) total += e;
    CHECK(total == 2);
    int s = 2;  // operator index of Z2 in z-only mode
    CHECK(events.events[0][s * 6 + 3] == 1);
    CHECK(events.events[0][s * 6 + 4] == 1);
}

TEST_CASE("correlation matrix: duplicated and independent columns") {
    DetectionEventStream st;
    st.op_names = {"A", "B", "C"};
    st.cycles = 1;
    st.op_of_index = {0, 1, 2};
    st.cycle_of_index = {0, 0, 0};
    st.defined = {true, true, true};
    st.support_of_op = {{0}, {0}, {5}};
    const int N = 10000;
    st.events.assign(N, {0, 0, 0});
    for (int s = 0; s < N / 10; ++s) {  // A and B duplicated with mean 0.1
        st.events[s][0] = 1;
        st.events[s][1] = 1;
    }
    for (int s = 0; s < N / 5; ++s) st.events[(7 * s + 13) % N][2] = 1;  // C unrelated
    auto m = correlation_matrix(st);
    CHECK(m.mean[0] == doctest::Approx(0.1));
    CHECK(m.p_ij[0][1] == doctest::Approx(0.09 / 0.64).epsilon(1e-9));
    CHECK(m.p_ij[0][1] == doctest::Approx(0.140625).epsilon(1e-9));
    CHECK(std::abs(m.p_ij[0][2]) < 0.05);  // loose: pseudo-random overlap
    CHECK(m.p_ij[0][0] == 0.0);
    CHECK(m.p_ij[1][0] == m.p_ij[0][1]);
}

TEST_CASE("means within epsilon of one half are flagged undefined") {
    DetectionEventStream st;
    st.op_names = {"A", "B"};
    st.cycles = 1;
    st.op_of_index = {0, 1};
    st.cycle_of_index = {0, 0};
    st.defined = {true, true};
    st.support_of_op = {{0}, {1}};
    st.events.assign(10, {0, 0});
    for (int s = 0; s < 5; ++s) st.events[s][0] = 1;  // mean exactly 1/2
    auto m = correlation_matrix(st);
    CHECK_FALSE(m.defined[0]);
    CHECK(m.defined[1]);
}

TEST_CASE("entry classification follows the index convention") {
    auto L = build_layout(3);
    auto circ = build_cycle_circuit(L, CycleMode::z_only, 8, InputState::zeros(9));
    auto noisy = attach_noise(circ, NoiseModel::uniform_depolarizing(0.03));
    auto ds = sample_shots(noisy, 16, 2);
    auto st = detection_events(ds, L);
    auto at = [&](const std::string& op, int c) {
        for (std::size_t i = 0; i < st.op_of_index.size(); ++i)
            if (st.op_names[st.op_of_index[i]] == op && st.cycle_of_index[i] == c)
                return int(i);
        return -1;
    };
    CHECK(classify_entry(st, at("Z0", 3), at("Z0", 4)) == EntryClass::time);
    // Z0 acts on {0,3}, Z3 on {3,6}: share data qubit 3
    CHECK(classify_entry(st, at("Z0", 3), at("Z3", 3)) == EntryClass::space);
    CHECK(classify_entry(st, at("Z0", 3), at("Z3", 4)) == EntryClass::space_time);
    CHECK(classify_entry(st, at("Z0", 1), at("Z5", 6)) == EntryClass::other);
    // Z0 and Z1 share no data qubit: same cycle is still "other"
    CHECK(classify_entry(st, at("Z0", 3), at("Z1", 3)) == EntryClass::other);
}

TEST_CASE("xor-composed gauge rates reproduce the simultaneous stabilizer rate") {
    auto L = build_layout(3);
    const std::size_t N = 150000;
    const double p = 0.04;
    NoiseModel model = NoiseModel::uniform_depolarizing(p);

    // independent single-gauge experiments
    auto gauge_rate = [&](const std::string& name, std::uint64_t seed) {
        const auto& g = L.gauge_by_name(name);
        InputState in;
        in.basis = Basis::z;
        in.bits.assign(2, 0);
        auto circ = build_gauge_circuit(L, g, in);
        auto noisy = attach_noise(circ, model);
        auto ds = sample_shots(noisy, N, seed);
        long ch = 0;
        for (const auto& s : ds.shots) ch += s[0];
        return double(ch) / double(N);
    };
    double ra = gauge_rate("Z0", 101), rb = gauge_rate("Z1", 102);

    // simultaneous measurement of both factors
    const auto& s = L.stabilizers[0];
    InputState in;
    in.basis = Basis::z;
    in.bits.assign(4, 0);
    auto circ = build_stabilizer_circuit(L, s, in);
    auto noisy = attach_noise(circ, model);
    auto ds = sample_shots(noisy, N, 103);
    std::vector<int> gbits;
    for (const auto& b : ds.labels)
        if (b.kind == BitKind::gauge_outcome) gbits.push_back(b.bit_index);
    REQUIRE(gbits.size() == 2);
    long ch = 0;
    for (const auto& shot : ds.shots) ch += (shot[gbits[0]] ^ shot[gbits[1]]);
    double r_stab = double(ch) / double(N);

    double expect = xor_combine(ra, rb);
    double sigma = std::sqrt(expect * (1 - expect) / double(N)) * 2;  // both sides noisy
    CHECK(std::abs(r_stab - expect) < 3 * sigma);
}
