#pragma once

#include <string>
#include <vector>

#include "hh/analysis.hpp"
#include "hh/dataset.hpp"
#include "hh/layout.hpp"

namespace hh {

// Mapping from layout qubits to physical device indices. Role arrays list
// physical ids in the order of ascending layout qubit id within each role.
struct DeviceMap {
    std::string name;
    std::vector<int> data, flag, measure;

    std::string to_json() const;
    static DeviceMap from_json(const std::string& text);
    static DeviceMap falcon27();  // the 27-qubit example from the device study

    // physical id for a layout qubit; throws if not covered
    int physical(const CodeLayout& layout, QubitId q) const;
    QubitId layout_qubit(const CodeLayout& layout, int physical) const;
};

// Shot archive: one JSON header line followed by one 0/1 row per shot
// (text form), or a packed binary body with the same header. Bit order in the
// body is given by header "bit_order": entries [kind, physical_or_layout id,
// cycle, gauge physical ancilla].
std::string export_archive(const SyndromeDataset& ds, bool packed = false);
void write_archive(const std::string& path, const SyndromeDataset& ds, bool packed = false);

SyndromeDataset ingest(const std::string& path, const CodeLayout& layout,
                       const DeviceMap& map);
SyndromeDataset read_archive(const std::string& path, const CodeLayout& layout);
SyndromeDataset read_archive(const std::string& path);  // layout from the header

std::string rates_csv(const ChangeRateTable& table);
std::string correlation_csv(const CorrelationMatrix& matrix);
std::string plot_data(const ChangeRateTable& table);  // x y err columns per operator

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hh
