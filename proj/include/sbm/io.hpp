// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sbm/common.hpp"

namespace sbm {

/// Columnar CSV with a one-line snake_case header; floats printed with 17
/// significant digits so values round-trip exactly.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    std::string to_string() const;

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t n_rows() const { return rows_.size(); }
    const std::vector<std::vector<double>>& rows() const { return rows_; }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

struct ParsedCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const;  // -1 when missing
};
ParsedCsv parse_csv(const std::string& text);
ParsedCsv read_csv_file(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory plus rename.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit content hash, hex encoded.
std::string fnv1a_hex(const std::string& content);

/// Reproducibility manifest: command line, config snapshot, seeds and the
/// produced files with content hashes. Serialized as JSON.
struct RunManifest {
    std::string command_line;
    std::string config_json;       // snapshot of the effective configuration
    std::uint64_t master_seed = 0;
    std::string tool_version;
    std::string started_at;   // ISO-8601 UTC
    std::string finished_at;
    std::vector<std::pair<std::string, std::string>> outputs;  // (path, hash)

    void stamp_start();
    void stamp_finish();

    void record_output(const std::filesystem::path& path, const std::string& content);
    std::string to_json() const;
    /// True when every listed file exists and hash-matches.
    bool verify_outputs(const std::filesystem::path& base_dir) const;
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Default output directory: $SBM_OUT_DIR or "./out".
std::filesystem::path default_output_dir();

}  // namespace sbm
