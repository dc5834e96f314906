#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#ifdef FINDEX_CLI_PATH
#include <sys/wait.h>
#endif

#include "findex/commands.hpp"
#include "findex/config.hpp"
#include "findex/csv.hpp"
#include "findex/errors.hpp"
#include "findex/manifest.hpp"
#include "findex/mfdfa.hpp"
#include "findex/rng.hpp"
#include "helpers.hpp"

using namespace findex;
namespace fs = std::filesystem;

namespace {

// Five correlated random-walk indices over 620 calendar days, with one date
// closed for 40% of the panel (must be dropped) and one closed for 20%
// (must be carried forward).
void make_panel(const std::string& path) {
    const std::vector<std::string> labels{"alpha", "bravo", "charlie", "delta", "echo"};
    const Date start = Date::parse("2015-01-01");
    const size_t days = 620;

    Rng rng(77);
    std::vector<std::vector<double>> prices(labels.size(), std::vector<double>(days));
    for (size_t i = 0; i < labels.size(); ++i)
        prices[i][0] = 80.0 + 10.0 * static_cast<double>(i);
    for (size_t t = 1; t < days; ++t) {
        double common = rng.gaussian();
        for (size_t i = 0; i < labels.size(); ++i) {
            double ret = 0.01 * (0.6 * common + 0.8 * rng.gaussian());
            prices[i][t] = prices[i][t - 1] * (1.0 + ret);
        }
    }

    std::vector<CsvRow> rows;
    CsvRow header{"date"};
    for (const auto& l : labels) header.push_back(l);
    rows.push_back(header);
    for (size_t t = 0; t < days; ++t) {
        CsvRow row{(start + static_cast<int>(t)).to_string()};
        for (size_t i = 0; i < labels.size(); ++i) {
            bool closed = (t == 100 && i < 2) || (t == 200 && i == 2);
            row.push_back(closed ? "" : format_double(prices[i][t]));
        }
        rows.push_back(row);
    }
    write_csv(path, rows);
}

RunConfig make_config(const std::string& input, const std::string& out_dir) {
    RunConfig c;
    c.input_path = input;
    c.input_format = CsvFormat::wide;
    c.out_dir = out_dir;
    c.seed = 5;
    c.periods = {
        {"early", Date::parse("2015-03-01"), Date::parse("2015-12-31")},
        {"late", Date::parse("2016-01-01"), Date::parse("2016-08-01")},
    };
    c.thetas = {0.0, 0.25, 0.5, 0.75};
    c.q_min = -4.0;
    c.q_max = 4.0;
    c.q_step = 1.0;
    c.bmfm_n_max = 8;
    c.bmfm_grid_step = 0.05;
    validate(c);
    return c;
}

struct CoutCapture {
    std::ostringstream buf;
    std::streambuf* old;
    CoutCapture() : old(std::cout.rdbuf(buf.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(old); }
    std::string text() const { return buf.str(); }
};

std::vector<CsvRow> read_table(const std::string& path) {
    REQUIRE(fs::exists(path));
    return read_csv(path);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("the pipeline writes verifiable, rerun-stable artifacts") {
    testutil::TempDir tmp("cli_pipeline");
    std::string input = tmp.file("prices.csv");
    std::string out = tmp.file("run");
    make_panel(input);
    RunConfig cfg = make_config(input, out);

    // --- ingest ---
    {
        CoutCapture cap;
        cmd_ingest(cfg);
        CHECK(cap.text().find("5 indices, 619 dates") != std::string::npos);
    }
    for (const char* name : {"panel.csv", "panel.mask.csv", "removed_dates.csv",
                             "fill_counts.csv", "config.json", "manifest.json",
                             "run_report.txt"})
        CHECK(fs::exists(fs::path(out) / name));

    std::vector<CsvRow> removed = read_table(out + "/removed_dates.csv");
    REQUIRE(removed.size() == 2);
    CHECK(removed[1][0] == "2015-04-11");  // day 100, 2/5 closed
    CHECK(removed[1][1] == "0.4");

    std::vector<CsvRow> fills = read_table(out + "/fill_counts.csv");
    REQUIRE(fills.size() == 6);
    std::map<std::string, std::string> fill_of;
    for (size_t r = 1; r < fills.size(); ++r) fill_of[fills[r][0]] = fills[r][1];
    CHECK(fill_of["charlie"] == "1");
    CHECK(fill_of["alpha"] == "0");

    RunManifest m1 = read_manifest(out);
    CHECK(m1.seed == 5);
    for (const ArtifactEntry& e : m1.artifacts) {
        CHECK(e.checksum ==
              "fnv1a64:" + fnv_hex(file_fnv1a64((fs::path(out) / e.name).string())));
        if (e.name == "panel.csv") CHECK(e.rows == 619);
    }

    // rerunning the same command must not move a byte of the manifest
    std::string manifest_once = testutil::read_text(out + "/manifest.json");
    {
        CoutCapture cap;
        cmd_ingest(cfg);
    }
    CHECK(testutil::read_text(out + "/manifest.json") == manifest_once);

    // --- rmt (full period only) ---
    {
        CoutCapture cap;
        cmd_rmt(cfg, "full");
        CHECK(cap.text().find("rmt[full]") != std::string::npos);
    }
    std::vector<CsvRow> trace = read_table(out + "/trace_full.csv");
    REQUIRE(trace.size() == 25);  // (618-25)/25 + 1 windows + header
    std::vector<CsvRow> sx = read_table(out + "/trace_full_sx.csv");
    REQUIRE(sx.size() == 1 + 24 * 5);
    std::map<std::string, double> x_sum;
    for (size_t r = 1; r < sx.size(); ++r) x_sum[sx[r][0]] += parse_double(sx[r][3]);
    for (size_t r = 1; r < trace.size(); ++r)
        CHECK(parse_double(trace[r][8]) ==
              doctest::Approx(x_sum[trace[r][0]]).epsilon(1e-9));

    std::vector<CsvRow> spectrum = read_table(out + "/spectrum_full.csv");
    REQUIRE(spectrum.size() == 6);
    double lambda_sum = 0.0;
    for (size_t r = 1; r < spectrum.size(); ++r) {
        lambda_sum += parse_double(spectrum[r][1]);
        if (r > 1)
            CHECK(parse_double(spectrum[r][1]) >= parse_double(spectrum[r - 1][1]) - 1e-12);
    }
    CHECK(lambda_sum == doctest::Approx(5.0).epsilon(1e-9));

    CHECK(read_table(out + "/corr_pairs_full.csv").size() == 11);
    CHECK(read_table(out + "/mp_empirical_full.csv").size() == 21);
    CHECK(read_table(out + "/mp_theory_full.csv").size() == 401);

    // --- network (all periods) ---
    {
        CoutCapture cap;
        cmd_network(cfg);
    }
    std::vector<CsvRow> metrics = read_table(out + "/network_metrics.csv");
    REQUIRE(metrics.size() == 1 + 3 * 4);  // (full, early, late) x 4 thetas
    for (size_t r = 2; r < metrics.size(); ++r) {
        if (metrics[r][0] != metrics[r - 1][0]) continue;  // new period block
        CHECK(parse_double(metrics[r][1]) > parse_double(metrics[r - 1][1]));
        CHECK(parse_double(metrics[r][2]) <= parse_double(metrics[r - 1][2]) + 1e-12);
        CHECK(parse_double(metrics[r][4]) >= parse_double(metrics[r - 1][4]));
        CHECK(parse_double(metrics[r][6]) <= parse_double(metrics[r - 1][6]));
    }
    for (const char* name :
         {"edges_full_theta0.csv", "edges_full_theta0.75.csv", "edges_early_theta0.25.csv",
          "edges_late_theta0.5.csv", "mst_early.csv", "mst_late.csv"})
        CHECK(fs::exists(fs::path(out) / name));
    std::vector<CsvRow> mst = read_table(out + "/mst_full.csv");
    REQUIRE(mst.size() == 5);  // n-1 edges
    for (size_t r = 1; r < mst.size(); ++r) {
        CHECK(mst[r][0] < mst[r][1]);
        double w = parse_double(mst[r][2]);
        CHECK(w > 0.0);
        CHECK(w <= 2.0);
    }

    // --- mfdfa (full period only) ---
    {
        CoutCapture cap;
        cmd_mfdfa(cfg, "full");
        CHECK(cap.text().find("mfdfa[full]: 5 indices") != std::string::npos);
    }
    std::vector<CsvRow> summary = read_table(out + "/mfdfa_summary.csv");
    REQUIRE(summary.size() == 1 + 5 * 3);
    CHECK(summary[0] == CsvRow{"period", "label", "variant", "H", "delta_h", "monotone_ok",
                               "mean_volatility", "bmfm_a", "bmfm_distance", "bmfm_mirror_a",
                               "bmfm_mirror_distance", "bmfm_mirror_tie"});
    for (size_t r = 1; r < summary.size(); ++r) {
        const CsvRow& row = summary[r];
        CHECK(row[0] == "full");
        double H = parse_double(row[3]);
        CHECK(H > 0.0);
        CHECK(H < 1.5);
        bool original = row[2] == "original";
        for (size_t col = 6; col < 12; ++col)
            CHECK(row[col].empty() == !original);
        if (original) {
            double a = parse_double(row[7]);
            CHECK(a > 0.0);
            CHECK(a < 1.0);
        }
    }

    std::vector<CsvRow> curves = read_table(out + "/hq_curves.csv");
    CHECK(curves.size() == 1 + 5 * 3 * 8);  // 8 q values in the test grid

    size_t n_scales = scale_ladder(16, 618 / 4, 20).size();
    std::vector<CsvRow> fluct = read_table(out + "/fluctuation.csv");
    CHECK(fluct.size() == 1 + 5 * 8 * n_scales);

    std::vector<CsvRow> vol = read_table(out + "/mean_volatility.csv");
    CHECK(vol.size() == 25);  // 24 disjoint windows + header

    // --- report: everything verifies, then tampering is caught ---
    {
        CoutCapture cap;
        CHECK_NOTHROW(cmd_report(out));
        CHECK(cap.text().find("artifacts verified") != std::string::npos);
        CHECK(cap.text().find("MISMATCH") == std::string::npos);
    }

    {
        std::ofstream f(out + "/fill_counts.csv", std::ios::app);
        f << "tamper\n";
    }
    {
        CoutCapture cap;
        CHECK_THROWS_WITH_AS(cmd_report(out), doctest::Contains("missing or modified"),
                             input_error);
        CHECK(cap.text().find("MISMATCH") != std::string::npos);
    }
    fs::remove(out + "/fill_counts.csv");
    {
        CoutCapture cap;
        CHECK_THROWS_AS(cmd_report(out), input_error);
        CHECK(cap.text().find("MISSING") != std::string::npos);
    }
}

TEST_CASE("period selection failures are input errors") {
    testutil::TempDir tmp("cli_periods");
    std::string input = tmp.file("prices.csv");
    make_panel(input);
    RunConfig cfg = make_config(input, tmp.file("run"));

    CHECK_THROWS_WITH_AS(cmd_rmt(cfg, "nope"), doctest::Contains("unknown period"),
                         input_error);

    RunConfig tiny = cfg;
    tiny.periods.push_back(
        {"tiny", Date::parse("2016-08-02"), Date::parse("2016-08-04")});
    validate(tiny);
    CHECK_THROWS_WITH_AS(cmd_rmt(tiny, "tiny"),
                         doctest::Contains("covers 2 aligned dates"), input_error);
}

#ifdef FINDEX_CLI_PATH
TEST_CASE("process exit codes distinguish input from numeric failures") {
    testutil::TempDir tmp("cli_exit");
    std::string input = tmp.file("prices.csv");
    make_panel(input);
    RunConfig cfg = make_config(input, tmp.file("run"));
    std::string cfg_path = tmp.file("run.json");
    write_config(cfg, cfg_path);

    // a panel with one constant-price column: returns are undefined
    std::string flat_input = tmp.file("flat.csv");
    {
        std::vector<CsvRow> rows{{"date", "a", "b", "c"}};
        Date start = Date::parse("2020-01-01");
        Rng rng(3);
        double pa = 50.0, pb = 70.0;
        for (int t = 0; t < 40; ++t) {
            pa *= 1.0 + 0.01 * rng.gaussian();
            pb *= 1.0 + 0.01 * rng.gaussian();
            rows.push_back({(start + t).to_string(), format_double(pa),
                            format_double(pb), "100"});
        }
        write_csv(flat_input, rows);
    }
    RunConfig flat_cfg = default_config();
    flat_cfg.input_path = flat_input;
    flat_cfg.out_dir = tmp.file("flat_run");
    std::string flat_cfg_path = tmp.file("flat.json");
    write_config(flat_cfg, flat_cfg_path);

    auto run = [](const std::string& args) {
        std::string cmd = std::string(FINDEX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };

    CHECK(run("--version") == 0);
    CHECK(run("frobnicate") == 1);                                  // unknown subcommand
    CHECK(run("ingest --config " + tmp.file("absent.json")) == 1);  // failed validation
    CHECK(run("rmt --config " + cfg_path + " --period nope") == 1);
    CHECK(run("ingest --config " + cfg_path) == 0);
    CHECK(run("rmt --config " + flat_cfg_path) == 2);  // constant series -> numeric
}
#endif

}  // TEST_SUITE
