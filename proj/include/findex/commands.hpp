#pragma once

#include <cstdint>
#include <string>

#include "findex/config.hpp"

namespace findex {

// Pipeline subcommands. Each loads the raw panel named in `cfg`, re-derives
// the aligned view it needs, writes its CSV artifacts under cfg.out_dir and
// merges them into <out_dir>/manifest.json. All of them also refresh the
// config.json echo. Errors surface as input_error / numeric_error; the CLI
// maps those to exit codes 1 / 2.
//
// `period_filter` (rmt/network/mfdfa) restricts the run to one period name;
// the pseudo-period "full" means the whole aligned calendar and is always
// available. Empty = full plus every configured period.

void cmd_ingest(const RunConfig& cfg);
void cmd_rmt(const RunConfig& cfg, const std::string& period_filter = "");
void cmd_network(const RunConfig& cfg, const std::string& period_filter = "");
void cmd_mfdfa(const RunConfig& cfg, const std::string& period_filter = "");

// Generates the bundled synthetic panel into <out_dir>/demo_panel.csv and
// runs the whole pipeline on it with default settings.
void cmd_demo(const std::string& out_dir, uint64_t seed);

// Re-reads <out_dir>/manifest.json, re-hashes every listed artifact and
// prints one line per file; throws input_error if anything is missing or
// its checksum drifted.
void cmd_report(const std::string& out_dir);

}  // namespace findex
