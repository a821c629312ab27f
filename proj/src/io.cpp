#include "hh/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hh {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string DeviceMap::to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["name"] = name;
    j["data"] = data;
    j["flag"] = flag;
    j["measure"] = measure;
    return j.dump(2);
}

DeviceMap DeviceMap::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DeviceMap m;
    m.name = j.value("name", "");
    m.data = j.at("data").get<std::vector<int>>();
    m.flag = j.at("flag").get<std::vector<int>>();
    m.measure = j.at("measure").get<std::vector<int>>();
    std::vector<int> all;
    for (const auto* arr : {&m.data, &m.flag, &m.measure})
        all.insert(all.end(), arr->begin(), arr->end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw std::runtime_error("device map assigns one physical qubit twice");
    return m;
}

DeviceMap DeviceMap::falcon27() {
    DeviceMap m;
    m.name = "falcon-27";
    m.data = {2, 10, 17, 5, 13, 21, 9, 16, 24};
    m.flag = {3, 12, 18, 8, 14, 23, 1, 7, 19, 25};
    m.measure = {4, 11, 15, 22};
    return m;
}

int DeviceMap::physical(const CodeLayout& layout, QubitId q) const {
    QubitRole role = layout.roles.at(q);
    auto pick = [&](const std::vector<int>& arr, QubitRole r) {
        auto qs = layout.qubits_with_role(r);
        auto it = std::find(qs.begin(), qs.end(), q);
        if (it == qs.end() || std::size_t(it - qs.begin()) >= arr.size())
            throw std::runtime_error("device map does not cover layout qubit " +
                                     std::to_string(q));
        return arr.at(std::size_t(it - qs.begin()));
    };
    switch (role) {
        case QubitRole::data: return pick(data, QubitRole::data);
        case QubitRole::flag: return pick(flag, QubitRole::flag);
        default: return pick(measure, QubitRole::measure);
    }
}

QubitId DeviceMap::layout_qubit(const CodeLayout& layout, int phys) const {
    auto scan = [&](const std::vector<int>& arr, QubitRole r) -> int {
        auto it = std::find(arr.begin(), arr.end(), phys);
        if (it == arr.end()) return -1;
        auto qs = layout.qubits_with_role(r);
        std::size_t i = std::size_t(it - arr.begin());
        if (i >= qs.size()) return -1;
        return int(qs[i]);
    };
    for (auto [arr, role] : {std::pair<const std::vector<int>*, QubitRole>{&data, QubitRole::data},
                             {&flag, QubitRole::flag},
                             {&measure, QubitRole::measure}}) {
        int q = scan(*arr, role);
        if (q >= 0) return QubitId(q);
    }
    throw std::runtime_error("unknown physical qubit " + std::to_string(phys));
}

namespace {

nlohmann::json archive_header(const SyndromeDataset& ds, bool packed) {
    nlohmann::json j;
    j["format"] = "hh-shots";
    j["format_version"] = 1;
    j["body"] = packed ? "packed" : "text";
    j["family"] = ds.meta.family;
    j["distance"] = ds.meta.distance;
    j["mode"] = mode_name(ds.meta.mode);
    j["cycles"] = ds.meta.cycles;
    j["basis"] = std::string(1, basis_char(ds.meta.input_basis));
    std::string bits;
    for (auto b : ds.meta.input_bits) bits += char('0' + b);
    j["input_bits"] = bits;
    j["stabilizer_level"] = ds.meta.stabilizer_level;
    j["data_qubits"] = ds.meta.data_qubits;
    j["operator_ids"] = ds.meta.operator_ids;
    j["shots"] = ds.num_shots();
    j["bits"] = ds.num_bits();
    j["source"] = ds.source;
    j["seed"] = ds.seed;
    nlohmann::json order = nlohmann::json::array();
    for (const auto& b : ds.labels) {
        nlohmann::json e;
        e["kind"] = b.kind == BitKind::gauge_outcome ? "gauge"
                    : b.kind == BitKind::flag_outcome ? "flag" : "data_final";
        e["qubit"] = b.qubit;
        e["op"] = b.operator_id;
        e["cycle"] = b.cycle;
        order.push_back(e);
    }
    j["bit_order"] = order;
    return j;
}

std::vector<ClassicalBitLabel> labels_from_header(const nlohmann::json& j) {
    std::vector<ClassicalBitLabel> labels;
    int i = 0;
    for (const auto& e : j.at("bit_order")) {
        ClassicalBitLabel b;
        b.bit_index = i++;
        std::string k = e.at("kind").get<std::string>();
        b.kind = k == "gauge" ? BitKind::gauge_outcome
                 : k == "flag" ? BitKind::flag_outcome : BitKind::data_final;
        b.qubit = e.at("qubit").get<QubitId>();
        b.operator_id = e.value("op", -1);
        b.cycle = e.value("cycle", -1);
        labels.push_back(b);
    }
    return labels;
}

CircuitMeta meta_from_header(const nlohmann::json& j) {
    CircuitMeta m;
    m.family = j.value("family", "cycle");
    m.distance = j.value("distance", 0);
    std::string mode = j.value("mode", "z");
    m.mode = mode == "z" ? CycleMode::z_only : mode == "x" ? CycleMode::x_only
                                                           : CycleMode::full;
    m.cycles = j.value("cycles", 0);
    m.input_basis = j.value("basis", "z") == "x" ? Basis::x : Basis::z;
    for (char ch : j.value("input_bits", std::string())) m.input_bits.push_back(ch == '1');
    m.data_qubits = j.value("data_qubits", std::vector<QubitId>{});
    m.operator_ids = j.value("operator_ids", std::vector<int>{});
    m.stabilizer_level = j.value("stabilizer_level", false);
    return m;
}

}  // namespace

std::string export_archive(const SyndromeDataset& ds, bool packed) {
    nlohmann::json header = archive_header(ds, packed);
    std::ostringstream os;
    if (!packed) {
        os << header.dump() << "\n";
        for (const auto& row : ds.shots) {
            for (auto b : row) os << char('0' + b);
            os << "\n";
        }
        return os.str();
    }
    os << "HHSB1\n" << header.dump() << "\n";
    const std::size_t nbytes = (ds.num_bits() + 7) / 8;
    for (const auto& row : ds.shots) {
        std::string bytes(nbytes, '\0');
        for (std::size_t k = 0; k < row.size(); ++k)
            if (row[k]) bytes[k >> 3] |= char(1 << (k & 7));
        os << bytes;
    }
    return os.str();
}

void write_archive(const std::string& path, const SyndromeDataset& ds, bool packed) {
    write_file(path, export_archive(ds, packed));
}

namespace {

SyndromeDataset parse_archive(const std::string& text) {
    SyndromeDataset ds;
    std::size_t pos = 0;
    bool packed = false;
    if (text.rfind("HHSB1\n", 0) == 0) {
        packed = true;
        pos = 6;
    }
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) throw std::runtime_error("archive: missing header");
    nlohmann::json header = nlohmann::json::parse(text.substr(pos, eol - pos));
    if (header.value("format", "") != "hh-shots")
        throw std::runtime_error("archive: not an hh-shots file");
    ds.meta = meta_from_header(header);
    ds.labels = labels_from_header(header);
    ds.source = header.value("source", "ingested");
    ds.seed = header.value("seed", std::uint64_t(0));
    const std::size_t nbits = header.at("bits").get<std::size_t>();
    const std::size_t nshots = header.at("shots").get<std::size_t>();
    if (ds.labels.size() != nbits)
        throw std::runtime_error("archive: bit_order length disagrees with bits");
    pos = eol + 1;
    if (packed) {
        const std::size_t nbytes = (nbits + 7) / 8;
        if (text.size() - pos < nshots * nbytes)
            throw std::runtime_error("archive: truncated packed body");
        ds.shots.assign(nshots, std::vector<std::uint8_t>(nbits, 0));
        for (std::size_t s = 0; s < nshots; ++s) {
            const char* bytes = text.data() + pos + s * nbytes;
            for (std::size_t k = 0; k < nbits; ++k)
                ds.shots[s][k] = (bytes[k >> 3] >> (k & 7)) & 1;
        }
        return ds;
    }
    std::size_t line_no = 2;
    while (pos < text.size()) {
        std::size_t e = text.find('\n', pos);
        if (e == std::string::npos) e = text.size();
        std::string_view line(text.data() + pos, e - pos);
        pos = e + 1;
        if (line.empty()) {
            ++line_no;
            continue;
        }
        if (line.size() != nbits)
            throw std::runtime_error("archive line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(nbits) +
                                     " bits, got " + std::to_string(line.size()));
        std::vector<std::uint8_t> row(nbits);
        for (std::size_t k = 0; k < nbits; ++k) {
            if (line[k] != '0' && line[k] != '1')
                throw std::runtime_error("archive line " + std::to_string(line_no) +
                                         ": invalid character");
            row[k] = line[k] == '1';
        }
        ds.shots.push_back(std::move(row));
        ++line_no;
    }
    if (ds.shots.size() != nshots)
        throw std::runtime_error("archive: header says " + std::to_string(nshots) +
                                 " shots, body has " + std::to_string(ds.shots.size()));
    return ds;
}

}  // namespace

SyndromeDataset read_archive(const std::string& path, const CodeLayout& layout) {
    SyndromeDataset ds = parse_archive(read_file(path));
    if (ds.meta.distance != layout.distance)
        throw std::runtime_error("archive distance disagrees with layout");
    return ds;
}

SyndromeDataset read_archive(const std::string& path) {
    return parse_archive(read_file(path));
}

SyndromeDataset ingest(const std::string& path, const CodeLayout& layout,
                       const DeviceMap& map) {
    SyndromeDataset raw = parse_archive(read_file(path));
    if (raw.meta.distance != layout.distance)
        throw std::runtime_error("ingest: archive distance disagrees with layout");

    // Canonical circuit for this experiment gives the target labels.
    InputState input;
    input.basis = raw.meta.input_basis;
    input.bits = raw.meta.input_bits;
    Circuit canon = build_cycle_circuit(layout, raw.meta.mode, raw.meta.cycles, input);

    // Translate archive bit order (physical ids) to layout ids, then match.
    struct Key {
        int kind;
        QubitId qubit;
        int cycle;
        bool operator<(const Key& o) const {
            return std::tie(kind, qubit, cycle) < std::tie(o.kind, o.qubit, o.cycle);
        }
    };
    std::map<Key, int> archive_bit;
    for (const auto& b : raw.labels) {
        QubitId lq = map.layout_qubit(layout, int(b.qubit));
        Key key{int(b.kind), lq, b.cycle};
        if (!archive_bit.emplace(key, b.bit_index).second)
            throw std::runtime_error("ingest: duplicate archive bit for qubit " +
                                     std::to_string(b.qubit));
    }
    std::vector<int> perm(canon.classical_bits.size(), -1);
    for (const auto& b : canon.classical_bits) {
        Key key{int(b.kind), b.qubit, b.cycle};
        auto it = archive_bit.find(key);
        if (it == archive_bit.end())
            throw std::runtime_error("ingest: archive missing bit for layout qubit " +
                                     std::to_string(b.qubit) + " cycle " +
                                     std::to_string(b.cycle));
        perm[b.bit_index] = it->second;
    }

    SyndromeDataset ds;
    ds.meta = canon.meta;
    ds.labels = canon.classical_bits;
    ds.source = "ingested";
    ds.shots.assign(raw.num_shots(), std::vector<std::uint8_t>(perm.size(), 0));
    for (std::size_t s = 0; s < raw.num_shots(); ++s)
        for (std::size_t k = 0; k < perm.size(); ++k)
            ds.shots[s][k] = raw.shots[s][std::size_t(perm[k])];
    return ds;
}

std::string rates_csv(const ChangeRateTable& table) {
    std::ostringstream os;
    os << "operator_id,cycle,changes,shots,rate,ci_low,ci_high\n";
    os.precision(10);
    for (const auto& r : table.rows) {
        if (!r.defined) {
            os << r.op_name << "," << r.cycle << ",,"
               << r.shots << ",undefined,,\n";
            continue;
        }
        os << r.op_name << "," << r.cycle << "," << r.changes << "," << r.shots << ","
           << r.rate << "," << r.ci_low << "," << r.ci_high << "\n";
    }
    return os.str();
}

std::string correlation_csv(const CorrelationMatrix& m) {
    std::ostringstream os;
    os << "i,j,p_ij,class\n";
    os.precision(10);
    const std::size_t n = m.mean.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            os << i << "," << j << ",";
            if (!m.defined[i] || !m.defined[j]) os << "undefined";
            else os << m.p_ij[i][j];
            os << "," << entry_class_name(classify_entry(*m.stream, int(i), int(j)))
               << "\n";
        }
    return os.str();
}

std::string plot_data(const ChangeRateTable& table) {
    std::ostringstream os;
    os << "# operator cycle rate err_low err_high\n";
    os.precision(10);
    for (const auto& r : table.rows) {
        if (!r.defined) continue;
        os << r.op_name << " " << r.cycle << " " << r.rate << " "
           << (r.rate - r.ci_low) << " " << (r.ci_high - r.rate) << "\n";
    }
    return os.str();
}

}  // namespace hh
