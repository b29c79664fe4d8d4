// SPDX-License-Identifier: Apache-2.0
#include "sbm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sbm {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw DomainError("CsvTable: need at least one column");
}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw DomainError("CsvTable: row width does not match header");
    rows_.push_back(values);
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << columns_[i];
    out << "\n";
    char buf[40];
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

int ParsedCsv::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv csv;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("parse_csv: empty input");
    std::istringstream hdr(line);
    std::string cell;
    while (std::getline(hdr, cell, ',')) csv.columns.push_back(cell);
    if (csv.columns.empty()) throw DomainError("parse_csv: empty header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
        if (values.size() != csv.columns.size())
            throw DomainError("parse_csv: ragged row");
        csv.rows.push_back(std::move(values));
    }
    return csv;
}

ParsedCsv read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NumericalError("cannot open CSV file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::filesystem::create_directories(dir);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericalError("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw NumericalError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string fnv1a_hex(const std::string& content) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

void RunManifest::stamp_start() { started_at = utc_now(); }
void RunManifest::stamp_finish() { finished_at = utc_now(); }

void RunManifest::record_output(const std::filesystem::path& path,
                                const std::string& content) {
    outputs.emplace_back(path.string(), fnv1a_hex(content));
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command_line"] = command_line;
    j["config"] = config_json.empty() ? nlohmann::json::object()
                                      : nlohmann::json::parse(config_json);
    j["master_seed"] = master_seed;
    j["tool_version"] = tool_version.empty() ? kToolVersion : tool_version;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [path, hash] : outputs)
        files.push_back({{"path", path}, {"hash_fnv1a64", hash}});
    j["outputs"] = files;
    return j.dump(2) + "\n";
}

bool RunManifest::verify_outputs(const std::filesystem::path& base_dir) const {
    for (const auto& [path, hash] : outputs) {
        const std::filesystem::path rel(path);
        const std::filesystem::path full = rel.is_absolute() ? rel : base_dir / rel;
        std::ifstream in(full, std::ios::binary);
        if (!in) return false;
        std::ostringstream buf;
        buf << in.rdbuf();
        if (fnv1a_hex(buf.str()) != hash) return false;
    }
    return true;
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("SBM_OUT_DIR")) return env;
    return "out";
}

}  // namespace sbm
