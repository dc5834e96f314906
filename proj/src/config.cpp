#include "findex/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "findex/errors.hpp"
#include "findex/manifest.hpp"

namespace findex {

using nlohmann::json;

RunConfig default_config() {
    RunConfig cfg;
    cfg.periods = {
        {"before", Date::parse("2006-06-07"), Date::parse("2007-11-30")},
        {"during", Date::parse("2007-12-01"), Date::parse("2009-06-30")},
    };
    for (int k = 0; k <= 9; ++k) cfg.thetas.push_back(k / 10.0);  // k/10.0 serializes clean
    return cfg;
}

namespace {

json to_json(const RunConfig& c) {
    json j;
    j["input"] = {{"path", c.input_path},
                  {"format", c.input_format == CsvFormat::wide ? "wide" : "long"}};
    j["out_dir"] = c.out_dir;
    j["seed"] = c.seed;
    json periods = json::array();
    for (const auto& p : c.periods)
        periods.push_back({{"name", p.name},
                           {"start", p.start.to_string()},
                           {"end", p.end.to_string()}});
    j["periods"] = periods;
    j["allow_overlap"] = c.allow_overlap;
    j["window"] = {{"T", c.window_T}, {"step", c.window_step}};
    j["mp_bins"] = c.mp_bins;
    j["thetas"] = c.thetas;
    j["mfdfa"] = {{"q_min", c.q_min},
                  {"q_max", c.q_max},
                  {"q_step", c.q_step},
                  {"include_q0", c.include_q0},
                  {"detrend_order", c.detrend_order},
                  {"scale_min", c.scale_min},
                  {"scale_max", c.scale_max},
                  {"scale_count", c.scale_count},
                  {"iaaft_max_iter", c.iaaft_max_iter}};
    j["bmfm"] = {{"n_max", c.bmfm_n_max},
                 {"grid_step", c.bmfm_grid_step},
                 {"refine", c.bmfm_refine}};
    return j;
}

template <typename T>
T pick(const json& j, const char* key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw input_error(std::string("config field '") + key + "': " + e.what());
    }
}

RunConfig from_json(const json& j) {
    RunConfig d = default_config();
    RunConfig c;
    if (j.contains("input")) {
        const json& in = j.at("input");
        c.input_path = pick<std::string>(in, "path", "");
        std::string fmt = pick<std::string>(in, "format", "wide");
        if (fmt == "wide")
            c.input_format = CsvFormat::wide;
        else if (fmt == "long")
            c.input_format = CsvFormat::lng;
        else
            throw input_error("config input.format must be 'wide' or 'long'");
    }
    c.out_dir = pick<std::string>(j, "out_dir", d.out_dir);
    c.seed = pick<uint64_t>(j, "seed", d.seed);
    if (j.contains("periods")) {
        for (const json& p : j.at("periods")) {
            PeriodDef def;
            def.name = pick<std::string>(p, "name", "");
            if (def.name.empty()) throw input_error("config period without a name");
            def.start = Date::parse(pick<std::string>(p, "start", ""));
            def.end = Date::parse(pick<std::string>(p, "end", ""));
            c.periods.push_back(def);
        }
    } else {
        c.periods = d.periods;
    }
    c.allow_overlap = pick<bool>(j, "allow_overlap", d.allow_overlap);
    if (j.contains("window")) {
        c.window_T = pick<int>(j.at("window"), "T", d.window_T);
        c.window_step = pick<int>(j.at("window"), "step", d.window_step);
    }
    c.mp_bins = pick<int>(j, "mp_bins", d.mp_bins);
    c.thetas = pick<std::vector<double>>(j, "thetas", d.thetas);
    if (j.contains("mfdfa")) {
        const json& m = j.at("mfdfa");
        c.q_min = pick<double>(m, "q_min", d.q_min);
        c.q_max = pick<double>(m, "q_max", d.q_max);
        c.q_step = pick<double>(m, "q_step", d.q_step);
        c.include_q0 = pick<bool>(m, "include_q0", d.include_q0);
        c.detrend_order = pick<int>(m, "detrend_order", d.detrend_order);
        c.scale_min = pick<int>(m, "scale_min", d.scale_min);
        c.scale_max = pick<int>(m, "scale_max", d.scale_max);
        c.scale_count = pick<int>(m, "scale_count", d.scale_count);
        c.iaaft_max_iter = pick<int>(m, "iaaft_max_iter", d.iaaft_max_iter);
    }
    if (j.contains("bmfm")) {
        const json& b = j.at("bmfm");
        c.bmfm_n_max = pick<int>(b, "n_max", d.bmfm_n_max);
        c.bmfm_grid_step = pick<double>(b, "grid_step", d.bmfm_grid_step);
        c.bmfm_refine = pick<bool>(b, "refine", d.bmfm_refine);
    }
    return c;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("config is not valid JSON: " + std::string(e.what()));
    }
    RunConfig cfg = from_json(j);
    validate(cfg);
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    return to_json(cfg).dump(2) + "\n";
}

void write_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write config: " + path);
    out << serialize_config(cfg);
}

uint64_t config_hash(const RunConfig& cfg) {
    std::string s = serialize_config(cfg);
    return fnv1a64(s.data(), s.size());
}

std::vector<double> q_grid_of(const RunConfig& cfg) {
    if (!(cfg.q_step > 0.0)) throw input_error("q_step must be positive");
    if (cfg.q_min > cfg.q_max) throw input_error("q_min must be <= q_max");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        double q = cfg.q_min + cfg.q_step * k;
        if (q > cfg.q_max + 1e-12) break;
        if (std::abs(q) < 1e-12) {
            if (cfg.include_q0) grid.push_back(0.0);
            continue;
        }
        grid.push_back(q);
    }
    if (grid.empty()) throw input_error("empty q grid");
    return grid;
}

void validate(const RunConfig& cfg) {
    if (cfg.input_path.empty()) throw input_error("config: input.path is required");
    if (cfg.out_dir.empty()) throw input_error("config: out_dir is required");
    if (cfg.window_T < 2) throw input_error("config: window.T must be >= 2");
    if (cfg.window_step < 1) throw input_error("config: window.step must be >= 1");
    if (cfg.mp_bins < 1) throw input_error("config: mp_bins must be >= 1");
    if (cfg.detrend_order < 1 || cfg.detrend_order > 3)
        throw input_error("config: mfdfa.detrend_order must be 1..3");
    if (cfg.scale_count < 4) throw input_error("config: mfdfa.scale_count must be >= 4");
    if (cfg.scale_min < 0 || cfg.scale_max < 0 ||
        (cfg.scale_max != 0 && cfg.scale_max < cfg.scale_min))
        throw input_error("config: bad mfdfa scale range");
    if (cfg.iaaft_max_iter < 1) throw input_error("config: mfdfa.iaaft_max_iter must be >= 1");
    if (cfg.bmfm_n_max < 4 || cfg.bmfm_n_max > 20)
        throw input_error("config: bmfm.n_max must be in 4..20");
    if (!(cfg.bmfm_grid_step > 0.0 && cfg.bmfm_grid_step < 0.5))
        throw input_error("config: bmfm.grid_step must be in (0, 0.5)");
    q_grid_of(cfg);  // validates the q range

    if (cfg.periods.empty()) throw input_error("config: at least one period is required");
    for (const auto& p : cfg.periods) {
        if (!(p.start < p.end))
            throw input_error("config: period '" + p.name + "' has start >= end");
        if (p.name == "full") throw input_error("config: period name 'full' is reserved");
    }
    for (size_t i = 0; i < cfg.periods.size(); ++i)
        for (size_t j = i + 1; j < cfg.periods.size(); ++j) {
            const auto &a = cfg.periods[i], &b = cfg.periods[j];
            if (a.name == b.name)
                throw input_error("config: duplicate period name '" + a.name + "'");
            bool overlap = a.start < b.end && b.start < a.end;
            if (overlap && !cfg.allow_overlap)
                throw input_error("config: periods '" + a.name + "' and '" + b.name +
                                  "' overlap (set allow_overlap to permit)");
        }
}

}  // namespace findex
