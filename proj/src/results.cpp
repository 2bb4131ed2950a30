#include "dsr/results.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace dsr {

void ResultBundle::add_row(const std::string& table, nlohmann::json row) {
    row["config_hash"] = config_hash;
    auto it = tables.find(table);
    if (it == tables.end()) it = tables.emplace(table, nlohmann::json::array()).first;
    it->second.push_back(std::move(row));
}

nlohmann::json bundle_to_json(const ResultBundle& b) {
    nlohmann::json j;
    j["meta"] = {{"config_hash", b.config_hash},
                 {"seed", b.seed},
                 {"version", b.version},
                 {"timestamp", b.timestamp}};
    j["config"] = b.config;
    nlohmann::json tables = nlohmann::json::object();
    for (const auto& [name, rows] : b.tables) tables[name] = rows;
    j["tables"] = tables;
    return j;
}

ResultBundle bundle_from_json(const nlohmann::json& j) {
    ResultBundle b;
    const auto& meta = j.at("meta");
    b.config_hash = meta.at("config_hash").get<std::string>();
    b.seed = meta.at("seed").get<std::uint64_t>();
    b.version = meta.at("version").get<std::string>();
    b.timestamp = meta.at("timestamp").get<std::string>();
    b.config = j.at("config");
    for (const auto& [name, rows] : j.at("tables").items()) b.tables[name] = rows;
    return b;
}

std::string serialize_bundle(const ResultBundle& b) { return bundle_to_json(b).dump(2) + "\n"; }

void write_bundle(const std::string& path, const ResultBundle& b) {
    write_text_file(path, serialize_bundle(b));
}

ResultBundle read_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bundle: " + path);
    nlohmann::json j;
    in >> j;
    return bundle_from_json(j);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace dsr
