#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dsr {

inline constexpr const char* kToolVersion = "1.0.0";

/// Machine-readable run output: metadata plus named row tables. Every row
/// carries the config hash that produced it. Serialization is canonical
/// (sorted keys, shortest round-trip doubles) so identical runs produce
/// byte-identical files.
struct ResultBundle {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    std::string timestamp;  ///< empty unless explicitly stamped
    nlohmann::json config;
    std::map<std::string, nlohmann::json> tables;  ///< name -> array of row objects

    void add_row(const std::string& table, nlohmann::json row);
};

nlohmann::json bundle_to_json(const ResultBundle& b);
ResultBundle bundle_from_json(const nlohmann::json& j);

std::string serialize_bundle(const ResultBundle& b);
void write_bundle(const std::string& path, const ResultBundle& b);
ResultBundle read_bundle(const std::string& path);

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

/// One CSV line from already-formatted cells.
std::string csv_line(const std::vector<std::string>& cells);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dsr
