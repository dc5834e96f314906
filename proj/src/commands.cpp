#include "findex/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "findex/csv.hpp"
#include "findex/demo.hpp"
#include "findex/errors.hpp"
#include "findex/graphnet.hpp"
#include "findex/manifest.hpp"
#include "findex/mfdfa.hpp"
#include "findex/panel.hpp"
#include "findex/spectra.hpp"
#include "findex/version.hpp"

namespace fs = std::filesystem;

namespace findex {

namespace {

// Records every artifact a command writes so the manifest entry set and the
// files on disk cannot drift apart.
class Sink {
  public:
    explicit Sink(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    const std::string& dir() const { return dir_; }
    std::string path_of(const std::string& name) const { return (fs::path(dir_) / name).string(); }

    // Writes header+data rows and records the entry.
    void write_table(const std::string& name, const std::vector<CsvRow>& rows) {
        write_csv(path_of(name), rows);
        add_existing(name, rows.empty() ? 0 : rows.size() - 1);
    }

    // Records a file some other writer already produced.
    void add_existing(const std::string& name, size_t data_rows) {
        ArtifactEntry e;
        e.name = name;
        e.checksum = "fnv1a64:" + fnv_hex(file_fnv1a64(path_of(name)));
        e.rows = data_rows;
        entries_.push_back(e);
    }

    const std::vector<ArtifactEntry>& entries() const { return entries_; }

  private:
    std::string dir_;
    std::vector<ArtifactEntry> entries_;
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Wall-clock log, deliberately outside the manifest so reruns stay
// byte-identical where it matters.
void log_timing(const std::string& out_dir, const std::string& command, double seconds) {
    std::ofstream out(fs::path(out_dir) / "run_report.txt", std::ios::app);
    char line[128];
    std::snprintf(line, sizeof line, "%s: %.2f s\n", command.c_str(), seconds);
    out << line;
}

struct Inputs {
    PricePanel panel;
    AlignReport report;
    std::vector<std::string> warnings;
};

Inputs load_inputs(const RunConfig& cfg) {
    Inputs in;
    std::vector<RawSeries> series = load_raw(cfg.input_path, cfg.input_format, &in.warnings);
    for (const auto& w : in.warnings) std::cerr << "warning: " << w << '\n';
    in.panel = align(series, 0.30, &in.report);
    return in;
}

// Periods a command iterates: the whole calendar first, then the configured
// windows; `filter` narrows to one by name.
std::vector<PeriodDef> run_periods(const RunConfig& cfg, const PricePanel& panel,
                                   const std::string& filter) {
    std::vector<PeriodDef> all;
    all.push_back({"full", panel.dates.front(), panel.dates.back() + 1});
    all.insert(all.end(), cfg.periods.begin(), cfg.periods.end());
    if (filter.empty()) return all;
    for (const auto& p : all)
        if (p.name == filter) return {p};
    throw input_error("unknown period '" + filter + "'");
}

PricePanel slice_panel(const PricePanel& panel, const PeriodDef& period) {
    const auto lo = std::lower_bound(panel.dates.begin(), panel.dates.end(), period.start);
    const auto hi = std::lower_bound(panel.dates.begin(), panel.dates.end(), period.end);
    const size_t t0 = static_cast<size_t>(lo - panel.dates.begin());
    const size_t t1 = static_cast<size_t>(hi - panel.dates.begin());
    if (t1 - t0 < 3)
        throw input_error("period '" + period.name + "' covers " + std::to_string(t1 - t0) +
                          " aligned dates; need at least 3");
    PricePanel out;
    out.labels = panel.labels;
    out.dates.assign(panel.dates.begin() + static_cast<long>(t0),
                     panel.dates.begin() + static_cast<long>(t1));
    const size_t n = panel.labels.size();
    const size_t d = t1 - t0;
    out.prices = Matrix(n, d);
    out.fill_mask.assign(n * d, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < d; ++t) {
            out.prices(i, t) = panel.prices(i, t0 + t);
            out.fill_mask[i * d + t] = panel.fill_mask[i * panel.dates.size() + t0 + t];
        }
    return out;
}

void finish(const RunConfig& cfg, Sink& sink) {
    write_config(cfg, sink.path_of("config.json"));
    sink.add_existing("config.json", 0);

    RunManifest m;
    m.toolkit_version = kVersion;
    m.generator = kGeneratorId;
    m.config_hash = "fnv1a64:" + fnv_hex(config_hash(cfg));
    m.input_checksum = "fnv1a64:" + fnv_hex(file_fnv1a64(cfg.input_path));
    m.seed = cfg.seed;
    m.artifacts = sink.entries();
    write_manifest(m, sink.dir());
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

void cmd_ingest(const RunConfig& cfg) {
    Timer timer;
    Inputs in = load_inputs(cfg);
    Sink sink(cfg.out_dir);

    write_panel(in.panel, sink.path_of("panel.csv"));
    sink.add_existing("panel.csv", in.panel.dates.size());
    sink.add_existing("panel.mask.csv", in.panel.dates.size());

    std::vector<CsvRow> removed{{"date", "closed_fraction"}};
    for (const auto& [date, frac] : in.report.removed_dates)
        removed.push_back({date.to_string(), fmt(frac)});
    sink.write_table("removed_dates.csv", removed);

    size_t filled = 0;
    std::vector<CsvRow> fills{{"label", "filled_cells"}};
    for (size_t i = 0; i < in.panel.labels.size(); ++i) {
        fills.push_back({in.panel.labels[i], std::to_string(in.report.fill_counts[i])});
        filled += in.report.fill_counts[i];
    }
    sink.write_table("fill_counts.csv", fills);

    finish(cfg, sink);
    log_timing(cfg.out_dir, "ingest", timer.seconds());
    std::cout << "ingest: " << in.panel.labels.size() << " indices, " << in.panel.dates.size()
              << " dates (removed " << in.report.removed_dates.size() << " dates, filled "
              << filled << " cells) -> " << cfg.out_dir << '\n';
}

void cmd_rmt(const RunConfig& cfg, const std::string& period_filter) {
    Timer timer;
    Inputs in = load_inputs(cfg);
    Sink sink(cfg.out_dir);

    for (const PeriodDef& period : run_periods(cfg, in.panel, period_filter)) {
        ReturnPanel rp = to_returns(slice_panel(in.panel, period));
        const size_t n = rp.n();

        SlidingResult sliding = sliding_spectra(rp, cfg.window_T, cfg.window_step);
        for (const auto& s : sliding.skipped)
            std::cerr << "warning: period " << period.name << ": skipped " << s << '\n';

        std::vector<CsvRow> trace{{"window", "start", "end", "lambda1", "lambda2", "lambda3",
                                   "lambda_min", "ipr_top", "ci"}};
        std::vector<CsvRow> sx{{"window", "label", "S", "X"}};
        for (const WindowTrace& tr : sliding.traces) {
            trace.push_back({std::to_string(tr.window_index), tr.start_date.to_string(),
                             tr.end_date.to_string(), fmt(tr.l1), fmt(tr.l2), fmt(tr.l3),
                             fmt(tr.l_min), fmt(tr.ipr_last), fmt(tr.ci)});
            for (size_t m = 0; m < n; ++m)
                sx.push_back({std::to_string(tr.window_index), rp.labels[m], fmt(tr.S[m]),
                              fmt(tr.X[m])});
        }
        sink.write_table("trace_" + period.name + ".csv", trace);
        sink.write_table("trace_" + period.name + "_sx.csv", sx);

        CorrMatrix corr = correlation(rp);
        Spectrum spec = eigendecompose(corr);

        std::vector<CsvRow> spectrum;
        CsvRow header{"k", "lambda", "ipr"};
        for (const auto& label : rp.labels) header.push_back(label);
        spectrum.push_back(header);
        for (size_t k = 0; k < n; ++k) {
            CsvRow row{std::to_string(k + 1), fmt(spec.eigenvalues[k]), fmt(spec.ipr[k])};
            for (size_t m = 0; m < n; ++m) row.push_back(fmt(spec.eigenvectors(m, k)));
            spectrum.push_back(row);
        }
        sink.write_table("spectrum_" + period.name + ".csv", spectrum);

        double mean_abs_c = 0.0;
        std::vector<CsvRow> pairs{{"a", "b", "c"}};
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                pairs.push_back({rp.labels[i], rp.labels[j], fmt(corr.C(i, j))});
                mean_abs_c += std::abs(corr.C(i, j));
            }
        mean_abs_c /= static_cast<double>(n * (n - 1) / 2);
        sink.write_table("corr_pairs_" + period.name + ".csv", pairs);

        MpLaw law = mp_bounds(n, rp.len());
        MpComparison cmp =
            mp_compare(spec.eigenvalues, law, static_cast<size_t>(cfg.mp_bins));
        std::vector<CsvRow> emp{{"bin_lo", "bin_hi", "density"}};
        for (size_t b = 0; b + 1 < cmp.bin_edges.size(); ++b)
            emp.push_back({fmt(cmp.bin_edges[b]), fmt(cmp.bin_edges[b + 1]),
                           fmt(cmp.empirical_density[b])});
        sink.write_table("mp_empirical_" + period.name + ".csv", emp);
        std::vector<CsvRow> theory{{"lambda", "density"}};
        for (size_t i = 0; i < cmp.grid.size(); ++i)
            theory.push_back({fmt(cmp.grid[i]), fmt(cmp.theoretical_density[i])});
        sink.write_table("mp_theory_" + period.name + ".csv", theory);

        std::cout << "rmt[" << period.name << "]: " << sliding.traces.size() << " windows, "
                  << "lambda_max = " << fmt(spec.eigenvalues[n - 1]) << " (bound "
                  << fmt(law.lambda_max) << "), mean |C| = " << fmt(mean_abs_c) << '\n';
    }

    finish(cfg, sink);
    log_timing(cfg.out_dir, "rmt", timer.seconds());
}

void cmd_network(const RunConfig& cfg, const std::string& period_filter) {
    Timer timer;
    Inputs in = load_inputs(cfg);
    Sink sink(cfg.out_dir);

    struct PeriodCorr {
        std::string name;
        CorrMatrix corr;
    };
    std::vector<PeriodCorr> corrs;
    for (const PeriodDef& period : run_periods(cfg, in.panel, period_filter)) {
        ReturnPanel rp = to_returns(slice_panel(in.panel, period));
        corrs.push_back({period.name, correlation(rp)});
    }

    std::vector<std::pair<std::string, const CorrMatrix*>> sweep_input;
    for (const auto& pc : corrs) sweep_input.emplace_back(pc.name, &pc.corr);
    std::vector<SweepRow> sweep = theta_sweep(sweep_input, cfg.thetas);

    std::vector<CsvRow> metrics{{"period", "theta", "mean_degree", "clustering", "components",
                                 "max_component", "max_clique"}};
    for (const SweepRow& row : sweep)
        metrics.push_back({row.period, fmt(row.theta), fmt(row.metrics.mean_degree),
                           fmt(row.metrics.global_clustering),
                           std::to_string(row.metrics.components.count),
                           std::to_string(row.metrics.components.max_size),
                           std::to_string(row.metrics.clique.size)});
    sink.write_table("network_metrics.csv", metrics);

    for (const auto& pc : corrs) {
        const size_t n = pc.corr.labels.size();
        for (double theta : cfg.thetas) {
            ThresholdGraph g = build_graph(pc.corr, theta);
            std::vector<CsvRow> edges{{"source", "target", "weight"}};
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i + 1; j < n; ++j)
                    if (g.edge(i, j))
                        edges.push_back(
                            {g.labels[i], g.labels[j], fmt(pc.corr.C(i, j))});
            sink.write_table("edges_" + pc.name + "_theta" + fmt(theta) + ".csv", edges);
        }

        Mst tree = mst_prim(distance_matrix(pc.corr), pc.corr.labels);
        std::vector<CsvRow> mst{{"source", "target", "weight"}};
        for (const MstEdge& e : tree.edges)
            mst.push_back({tree.labels[e.a], tree.labels[e.b], fmt(e.weight)});
        sink.write_table("mst_" + pc.name + ".csv", mst);

        std::cout << "network[" << pc.name << "]: " << cfg.thetas.size()
                  << " thresholds, MST weight = " << fmt(tree.total_weight) << '\n';
    }

    finish(cfg, sink);
    log_timing(cfg.out_dir, "network", timer.seconds());
}

void cmd_mfdfa(const RunConfig& cfg, const std::string& period_filter) {
    Timer timer;
    Inputs in = load_inputs(cfg);
    Sink sink(cfg.out_dir);

    std::vector<CsvRow> summary{{"period", "label", "variant", "H", "delta_h", "monotone_ok",
                                 "mean_volatility", "bmfm_a", "bmfm_distance", "bmfm_mirror_a",
                                 "bmfm_mirror_distance", "bmfm_mirror_tie"}};
    std::vector<CsvRow> curves{{"period", "label", "variant", "q", "h", "r2", "unreliable"}};
    std::vector<CsvRow> fluct{{"period", "label", "variant", "s", "q", "F"}};

    for (const PeriodDef& period : run_periods(cfg, in.panel, period_filter)) {
        ReturnPanel rp = to_returns(slice_panel(in.panel, period));

        MfdfaConfig mcfg;
        mcfg.q_values = q_grid_of(cfg);
        mcfg.detrend_order = cfg.detrend_order;
        mcfg.iaaft_max_iter = cfg.iaaft_max_iter;
        mcfg.scales = (cfg.scale_min > 0 && cfg.scale_max > 0)
                          ? scale_ladder(cfg.scale_min, cfg.scale_max,
                                         static_cast<size_t>(cfg.scale_count))
                          : default_scales(rp.len(), cfg.detrend_order,
                                           static_cast<size_t>(cfg.scale_count));

        double h_sum = 0.0, dh_sum = 0.0;
        for (size_t i = 0; i < rp.n(); ++i) {
            const std::string& label = rp.labels[i];
            std::vector<double> g = rp.g_row(i);
            std::string tag = label + "|" + period.name;
            mcfg.seed = cfg.seed ^ fnv1a64(tag.data(), tag.size());

            MfReport rep = mf_report(g, mcfg);
            if (!rep.surrogate_converged)
                std::cerr << "warning: surrogate for " << label << " (" << period.name
                          << ") hit the iteration cap\n";
            BmfmFit fit = bmfm_fit(rep.original, cfg.bmfm_n_max, cfg.bmfm_grid_step,
                                   cfg.bmfm_refine);

            std::string mean_vol;
            if (static_cast<size_t>(cfg.window_T) <= rp.len()) {
                VolatilitySeries vol = volatility(rp, label, cfg.window_T, 0);
                double sum = 0.0;
                for (const auto& [date, v] : vol.values) sum += v;
                if (!vol.values.empty())
                    mean_vol = fmt(sum / static_cast<double>(vol.values.size()));
            }

            const struct {
                const char* name;
                const HqCurve* curve;
            } variants[] = {{"original", &rep.original},
                            {"shuffled", &rep.shuffled},
                            {"surrogate", &rep.surrogate}};
            for (const auto& [vname, curve] : variants) {
                bool original = curve == &rep.original;
                summary.push_back({period.name, label, vname, fmt(curve->H),
                                   fmt(curve->delta_h), curve->monotone_ok ? "1" : "0",
                                   original ? mean_vol : "",
                                   original ? fmt(fit.a) : "",
                                   original ? fmt(fit.distance) : "",
                                   original ? fmt(fit.mirror_a) : "",
                                   original ? fmt(fit.mirror_distance) : "",
                                   original ? (fit.mirror_tie ? "1" : "0") : ""});
                for (size_t k = 0; k < curve->q_values.size(); ++k)
                    curves.push_back({period.name, label, vname, fmt(curve->q_values[k]),
                                      fmt(curve->h[k]), fmt(curve->r2[k]),
                                      curve->unreliable[k] ? "1" : "0"});
            }

            FluctuationTable table =
                fluctuation(g, mcfg.scales, mcfg.q_values, mcfg.detrend_order);
            for (size_t qi = 0; qi < table.q_values.size(); ++qi)
                for (size_t si = 0; si < table.scales.size(); ++si)
                    fluct.push_back({period.name, label, "original",
                                     std::to_string(table.scales[si]),
                                     fmt(table.q_values[qi]), fmt(table.F[qi][si])});

            h_sum += rep.original.H;
            dh_sum += rep.original.delta_h;
        }
        std::cout << "mfdfa[" << period.name << "]: " << rp.n() << " indices, mean H = "
                  << fmt(h_sum / static_cast<double>(rp.n())) << ", mean delta_h = "
                  << fmt(dh_sum / static_cast<double>(rp.n())) << '\n';
    }

    sink.write_table("mfdfa_summary.csv", summary);
    sink.write_table("hq_curves.csv", curves);
    sink.write_table("fluctuation.csv", fluct);

    {
        ReturnPanel rp_full = to_returns(in.panel);
        VolatilitySeries mv = mean_volatility(rp_full, cfg.window_T, cfg.window_step);
        std::vector<CsvRow> rows{{"end_date", "v"}};
        for (const auto& [date, v] : mv.values) rows.push_back({date.to_string(), fmt(v)});
        sink.write_table("mean_volatility.csv", rows);
    }

    finish(cfg, sink);
    log_timing(cfg.out_dir, "mfdfa", timer.seconds());
}

void cmd_demo(const std::string& out_dir, uint64_t seed) {
    Timer timer;
    fs::create_directories(out_dir);
    std::string panel_path = (fs::path(out_dir) / "demo_panel.csv").string();
    generate_demo_panel(panel_path, seed);

    RunConfig cfg = default_config();
    cfg.input_path = panel_path;
    cfg.input_format = CsvFormat::wide;
    cfg.out_dir = out_dir;
    cfg.seed = seed;
    validate(cfg);

    cmd_ingest(cfg);
    cmd_rmt(cfg);
    cmd_network(cfg);
    cmd_mfdfa(cfg);
    log_timing(out_dir, "demo", timer.seconds());
    cmd_report(out_dir);
    std::cout << "demo: artifacts in " << out_dir << '\n';
}

void cmd_report(const std::string& out_dir) {
    RunManifest m = read_manifest(out_dir);
    std::cout << "run " << m.toolkit_version << " (" << m.generator << "), seed " << m.seed
              << "\nconfig " << m.config_hash << "\ninput  " << m.input_checksum << '\n';
    size_t bad = 0;
    for (const ArtifactEntry& e : m.artifacts) {
        fs::path p = fs::path(out_dir) / e.name;
        std::string status;
        if (!fs::exists(p)) {
            status = "MISSING";
        } else {
            std::string sum = "fnv1a64:" + fnv_hex(file_fnv1a64(p.string()));
            status = sum == e.checksum ? "ok" : "MISMATCH";
        }
        if (status != "ok") ++bad;
        std::cout << std::left;
        std::cout << status << '\t' << e.name << '\t' << e.checksum << "\trows=" << e.rows
                  << '\n';
    }
    if (bad > 0)
        throw input_error("report: " + std::to_string(bad) + " artifact(s) missing or modified");
    std::cout << "report: " << m.artifacts.size() << " artifacts verified\n";
}

}  // namespace findex
