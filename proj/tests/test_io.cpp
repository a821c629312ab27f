#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "hh/io.hpp"
#include "hh/pauli_engine.hpp"

using namespace hh;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

SyndromeDataset small_dataset(const CodeLayout& L, int cycles, std::size_t shots) {
    auto circ = build_cycle_circuit(L, CycleMode::z_only, cycles, InputState::zeros(9));
    static std::vector<Circuit> keep;
    keep.push_back(circ);
    auto noisy = attach_noise(keep.back(), NoiseModel::uniform_depolarizing(0.05));
    return sample_shots(noisy, shots, 77);
}

}  // namespace

TEST_CASE("device map covers the layout and round trips physical ids") {
    auto L = build_layout(3);
    auto map = DeviceMap::falcon27();
    REQUIRE(map.data.size() == 9);
    REQUIRE(map.flag.size() == 10);
    REQUIRE(map.measure.size() == 4);
    CHECK(map.physical(L, 0) == 2);    // first data qubit
    CHECK(map.physical(L, 2) == 17);   // data (0,2)
    for (QubitId q = 0; q < L.num_qubits(); ++q) {
        int phys = map.physical(L, q);
        CHECK(map.layout_qubit(L, phys) == q);
    }
    auto map2 = DeviceMap::from_json(map.to_json());
    CHECK(map2.data == map.data);
    CHECK(map2.flag == map.flag);
    CHECK(map2.measure == map.measure);
}

TEST_CASE("archive round trips losslessly in both bodies") {
    auto L = build_layout(3);
    auto ds = small_dataset(L, 3, 64);
    for (bool packed : {false, true}) {
        TempFile f(packed ? "hh_test_arch.bin" : "hh_test_arch.txt");
        write_archive(f.path, ds, packed);
        auto back = read_archive(f.path, L);
        CHECK(back.shots == ds.shots);
        CHECK(back.labels.size() == ds.labels.size());
        for (std::size_t i = 0; i < ds.labels.size(); ++i) {
            CHECK(back.labels[i].kind == ds.labels[i].kind);
            CHECK(back.labels[i].operator_id == ds.labels[i].operator_id);
            CHECK(back.labels[i].cycle == ds.labels[i].cycle);
            CHECK(back.labels[i].qubit == ds.labels[i].qubit);
        }
        CHECK(back.meta.cycles == 3);
    }
}

TEST_CASE("ingest relabels a physically-ordered archive back to canonical form") {
    auto L = build_layout(3);
    auto map = DeviceMap::falcon27();
    auto ds = small_dataset(L, 2, 50);

    // forge a device-side archive: physical qubit ids, bits in reversed order
    SyndromeDataset foreign = ds;
    foreign.source = "device";
    std::vector<std::size_t> perm(ds.num_bits());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
    foreign.labels.clear();
    for (std::size_t i = 0; i < perm.size(); ++i) {
        ClassicalBitLabel b = ds.labels[perm[i]];
        b.bit_index = int(i);
        b.qubit = QubitId(map.physical(L, b.qubit));
        foreign.labels.push_back(b);
    }
    for (std::size_t s = 0; s < ds.num_shots(); ++s)
        for (std::size_t i = 0; i < perm.size(); ++i)
            foreign.shots[s][i] = ds.shots[s][perm[i]];

    TempFile f("hh_test_foreign.txt");
    write_archive(f.path, foreign);
    auto ingested = ingest(f.path, L, map);
    CHECK(ingested.source == "ingested");
    CHECK(ingested.shots == ds.shots);

    // identical analysis outputs
    auto t1 = change_rates(ds, L);
    auto t2 = change_rates(ingested, L);
    CHECK(rates_csv(t1) == rates_csv(t2));
}

TEST_CASE("malformed archives are rejected with a line number") {
    auto L = build_layout(3);
    auto ds = small_dataset(L, 2, 4);
    auto text = export_archive(ds);
    // truncate one shot line
    auto pos = text.find('\n') + 1;
    std::string bad = text.substr(0, pos) + "01011\n" + text.substr(text.find('\n', pos) + 1);
    TempFile f("hh_test_bad.txt");
    write_file(f.path, bad);
    try {
        read_archive(f.path, L);
        FAIL("expected rejection");
    } catch (const std::exception& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("unknown physical ids are rejected at ingest") {
    auto L = build_layout(3);
    auto map = DeviceMap::falcon27();
    auto ds = small_dataset(L, 2, 4);
    SyndromeDataset foreign = ds;
    for (auto& b : foreign.labels) b.qubit = QubitId(map.physical(L, b.qubit));
    foreign.labels[0].qubit = 26;  // not part of the map
    TempFile f("hh_test_unknown.txt");
    write_archive(f.path, foreign);
    CHECK_THROWS(ingest(f.path, L, map));
}

TEST_CASE("csv emitters carry the declared schemas and are stable") {
    auto L = build_layout(3);
    auto ds = small_dataset(L, 2, 32);
    auto table = change_rates(ds, L);
    auto csv = rates_csv(table);
    CHECK(csv.rfind("operator_id,cycle,changes,shots,rate,ci_low,ci_high\n", 0) == 0);
    CHECK(csv == rates_csv(table));  // bit-stable

    auto events = detection_events(ds, L);
    auto corr = correlation_matrix(events);
    auto ccsv = correlation_csv(corr);
    CHECK(ccsv.rfind("i,j,p_ij,class\n", 0) == 0);
    CHECK(ccsv.find("time") != std::string::npos);

    auto pd = plot_data(table);
    CHECK(pd.find("Z0 0 ") != std::string::npos);
}
