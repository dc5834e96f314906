#include "findex/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "findex/errors.hpp"

namespace findex {

using nlohmann::json;

uint64_t fnv1a64(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t file_fnv1a64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file for checksum: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    return fnv1a64(bytes.data(), bytes.size());
}

std::string fnv_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& dir) {
    std::vector<ArtifactEntry> merged = manifest.artifacts;
    try {
        RunManifest prev = read_manifest(dir);
        for (const auto& old : prev.artifacts) {
            bool replaced = std::any_of(merged.begin(), merged.end(),
                                        [&](const ArtifactEntry& e) { return e.name == old.name; });
            if (!replaced) merged.push_back(old);
        }
    } catch (const input_error&) {
        // no previous manifest (or unreadable): start fresh
    }
    std::sort(merged.begin(), merged.end(),
              [](const ArtifactEntry& a, const ArtifactEntry& b) { return a.name < b.name; });

    json j;
    j["toolkit_version"] = manifest.toolkit_version;
    j["generator"] = manifest.generator;
    j["config_hash"] = manifest.config_hash;
    j["input_checksum"] = manifest.input_checksum;
    j["seed"] = manifest.seed;
    json arts = json::array();
    for (const auto& e : merged)
        arts.push_back({{"name", e.name}, {"checksum", e.checksum}, {"rows", e.rows}});
    j["artifacts"] = arts;

    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw input_error("cannot write manifest in " + dir);
    out << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw input_error("no manifest.json in " + dir);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("manifest.json is not valid JSON: " + std::string(e.what()));
    }
    RunManifest m;
    try {
        m.toolkit_version = j.at("toolkit_version").get<std::string>();
        m.generator = j.at("generator").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.input_checksum = j.at("input_checksum").get<std::string>();
        m.seed = j.at("seed").get<uint64_t>();
        for (const json& e : j.at("artifacts"))
            m.artifacts.push_back({e.at("name").get<std::string>(),
                                   e.at("checksum").get<std::string>(),
                                   e.at("rows").get<size_t>()});
    } catch (const json::exception& e) {
        throw input_error("manifest.json missing fields: " + std::string(e.what()));
    }
    return m;
}

}  // namespace findex
