#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "findex/commands.hpp"
#include "findex/config.hpp"
#include "findex/errors.hpp"
#include "findex/version.hpp"

namespace {

struct Common {
    std::string config_path;
    std::string out_dir;
    std::string period;
    uint64_t seed = 0;
    bool seed_set = false;
    bool out_set = false;
};

findex::RunConfig load(const Common& c) {
    findex::RunConfig cfg = findex::parse_config(c.config_path);
    if (c.out_set) cfg.out_dir = c.out_dir;
    if (c.seed_set) cfg.seed = c.seed;
    findex::validate(cfg);
    return cfg;
}

void add_common(CLI::App* cmd, Common& c, bool with_period) {
    cmd->add_option("--config", c.config_path, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out_dir, "override the configured output directory")
        ->each([&c](const std::string&) { c.out_set = true; });
    cmd->add_option("--seed", c.seed, "override the configured seed")
        ->each([&c](const std::string&) { c.seed_set = true; });
    if (with_period)
        cmd->add_option("--period", c.period,
                        "restrict to one period name ('full' = whole calendar)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"financial index toolkit: correlation spectra, threshold networks, "
                 "multifractal analysis"};
    app.set_version_flag("--version", std::string(findex::kVersion));
    app.require_subcommand(1);

    Common c;
    CLI::App* ingest = app.add_subcommand("ingest", "align a raw price panel and write it out");
    add_common(ingest, c, false);
    CLI::App* rmt = app.add_subcommand(
        "rmt", "sliding-window eigenvalue traces and random-matrix comparison");
    add_common(rmt, c, true);
    CLI::App* network =
        app.add_subcommand("network", "threshold-graph sweep and minimum spanning trees");
    add_common(network, c, true);
    CLI::App* mfdfa = app.add_subcommand(
        "mfdfa", "multifractal fluctuation analysis with shuffled/surrogate baselines");
    add_common(mfdfa, c, true);

    std::string demo_out = "demo_out";
    uint64_t demo_seed = 1;
    CLI::App* demo =
        app.add_subcommand("demo", "generate the synthetic panel and run the whole pipeline");
    demo->add_option("--out", demo_out, "output directory");
    demo->add_option("--seed", demo_seed, "generator seed");

    std::string report_out = "out";
    CLI::App* report = app.add_subcommand("report", "verify the manifest of a finished run");
    report->add_option("--out", report_out, "run directory to verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) findex::cmd_ingest(load(c));
        if (rmt->parsed()) findex::cmd_rmt(load(c), c.period);
        if (network->parsed()) findex::cmd_network(load(c), c.period);
        if (mfdfa->parsed()) findex::cmd_mfdfa(load(c), c.period);
        if (demo->parsed()) findex::cmd_demo(demo_out, demo_seed);
        if (report->parsed()) findex::cmd_report(report_out);
    } catch (const findex::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const findex::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
