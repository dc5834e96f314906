#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace findex {

// FNV-1a 64-bit; integrity aid for manifests, not a cryptographic hash.
uint64_t fnv1a64(const void* data, size_t len);
uint64_t file_fnv1a64(const std::string& path);
std::string fnv_hex(uint64_t h);  // 16 lowercase hex digits

struct ArtifactEntry {
    std::string name;      // file name relative to the run directory
    std::string checksum;  // "fnv1a64:<hex>"
    size_t rows = 0;       // data rows (excluding header) for tables, else 0
    bool operator==(const ArtifactEntry&) const = default;
};

// Deliberately carries no timings or timestamps: a rerun with the same seed
// and input must reproduce manifest.json byte for byte. Wall-clock timings go
// to run_report.txt, which is not listed here.
struct RunManifest {
    std::string toolkit_version;
    std::string generator;
    std::string config_hash;     // "fnv1a64:<hex>" of the canonical config
    std::string input_checksum;  // "fnv1a64:<hex>" of the input file bytes
    uint64_t seed = 0;
    std::vector<ArtifactEntry> artifacts;  // sorted by name
    bool operator==(const RunManifest&) const = default;
};

// Writes <dir>/manifest.json, merging over an existing manifest: entries with
// the same name are replaced, new ones added, then the list is re-sorted.
void write_manifest(const RunManifest& manifest, const std::string& dir);

RunManifest read_manifest(const std::string& dir);

}  // namespace findex
