#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "findex/dates.hpp"
#include "findex/panel.hpp"

namespace findex {

// Half-open analysis window [start, end) on the aligned calendar.
struct PeriodDef {
    std::string name;
    Date start, end;
    bool operator==(const PeriodDef&) const = default;
};

// Everything a pipeline run needs; JSON round-trips exactly
// (parse(serialize(c)) == c).
struct RunConfig {
    std::string input_path;
    CsvFormat input_format = CsvFormat::wide;
    std::string out_dir = "out";
    uint64_t seed = 1;

    std::vector<PeriodDef> periods;
    bool allow_overlap = false;

    int window_T = 25;
    int window_step = 25;
    int mp_bins = 20;

    std::vector<double> thetas;

    double q_min = -10.0, q_max = 10.0, q_step = 0.5;
    bool include_q0 = false;
    int detrend_order = 1;
    int scale_min = 0, scale_max = 0;  // 0 = automatic ladder
    int scale_count = 20;
    int iaaft_max_iter = 1000;

    int bmfm_n_max = 12;
    double bmfm_grid_step = 0.0125;
    bool bmfm_refine = false;

    bool operator==(const RunConfig&) const = default;
};

// Crisis-window presets and the toolkit's documented defaults.
RunConfig default_config();

RunConfig parse_config(const std::string& path);

// Canonical serialization (sorted keys, 2-space indent); config_hash is the
// FNV-1a 64 of these bytes.
std::string serialize_config(const RunConfig& cfg);
void write_config(const RunConfig& cfg, const std::string& path);
uint64_t config_hash(const RunConfig& cfg);

// q grid implied by [q_min, q_max] and q_step; 0 dropped unless include_q0.
std::vector<double> q_grid_of(const RunConfig& cfg);

// Checks ranges, periods (non-empty, start < end, overlap policy) and throws
// input_error with a precise message.
void validate(const RunConfig& cfg);

}  // namespace findex
