#include "findex/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "findex/csv.hpp"
#include "findex/errors.hpp"

namespace findex {

namespace {

void sort_and_check(RawSeries& s) {
    std::sort(s.observations.begin(), s.observations.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < s.observations.size(); ++i)
        if (s.observations[i].first == s.observations[i - 1].first)
            throw input_error("duplicate (label, date) pair: " + s.label + " " +
                              s.observations[i].first.to_string());
}

// Valid close = parses as a number and is > 0; otherwise dropped + warned.
bool try_close(const std::string& field, const std::string& label, const Date& date,
               double& out, std::vector<std::string>* warnings) {
    try {
        out = parse_double(field);
    } catch (const input_error&) {
        if (warnings)
            warnings->push_back("dropped " + label + " " + date.to_string() +
                                ": non-numeric close '" + field + "'");
        return false;
    }
    if (!(out > 0.0) || !std::isfinite(out)) {
        if (warnings)
            warnings->push_back("dropped " + label + " " + date.to_string() +
                                ": non-positive close '" + field + "'");
        return false;
    }
    return true;
}

}  // namespace

std::vector<RawSeries> load_raw(const std::string& path, CsvFormat format,
                                std::vector<std::string>* warnings) {
    auto rows = read_csv(path);
    if (rows.size() < 2) throw input_error("no data rows in " + path);
    std::vector<RawSeries> series;

    if (format == CsvFormat::wide) {
        const CsvRow& header = rows[0];
        if (header.size() < 2 || header[0] != "date")
            throw input_error("wide CSV must start with a 'date,<label>...' header: " + path);
        std::set<std::string> seen;
        for (size_t c = 1; c < header.size(); ++c) {
            if (header[c].empty() || !seen.insert(header[c]).second)
                throw input_error("empty or duplicate label in header: '" + header[c] + "'");
            series.push_back({header[c], {}});
        }
        for (size_t rI = 1; rI < rows.size(); ++rI) {
            const CsvRow& row = rows[rI];
            if (row.size() != header.size())
                throw input_error(path + ": row " + std::to_string(rI + 1) + " has " +
                                  std::to_string(row.size()) + " fields, header has " +
                                  std::to_string(header.size()));
            Date date = Date::parse(row[0]);
            for (size_t c = 1; c < row.size(); ++c) {
                if (row[c].empty()) continue;  // market closed
                double close;
                if (try_close(row[c], header[c], date, close, warnings))
                    series[c - 1].observations.emplace_back(date, close);
            }
        }
    } else {
        const CsvRow& header = rows[0];
        if (header.size() != 3 || header[0] != "date" || header[1] != "label" ||
            header[2] != "close")
            throw input_error("long CSV must have header 'date,label,close': " + path);
        std::map<std::string, size_t> index;
        for (size_t rI = 1; rI < rows.size(); ++rI) {
            const CsvRow& row = rows[rI];
            if (row.size() != 3)
                throw input_error(path + ": row " + std::to_string(rI + 1) +
                                  " does not have 3 fields");
            Date date = Date::parse(row[0]);
            const std::string& label = row[1];
            if (label.empty()) throw input_error(path + ": empty label");
            auto [it, fresh] = index.try_emplace(label, series.size());
            if (fresh) series.push_back({label, {}});
            if (row[2].empty()) continue;
            double close;
            if (try_close(row[2], label, date, close, warnings))
                series[it->second].observations.emplace_back(date, close);
        }
    }

    std::erase_if(series, [&](const RawSeries& s) {
        if (!s.observations.empty()) return false;
        if (warnings) warnings->push_back("series " + s.label + " has no valid rows");
        return true;
    });
    if (series.empty()) throw input_error("no parsable series in " + path);
    for (auto& s : series) sort_and_check(s);
    return series;
}

PricePanel align(const std::vector<RawSeries>& series, double closed_fraction_max,
                 AlignReport* report) {
    if (series.size() < 2) throw input_error("align needs at least 2 series");
    const size_t n = series.size();

    std::set<Date> calendar;
    std::vector<std::map<Date, double>> by_date(n);
    for (size_t i = 0; i < n; ++i)
        for (const auto& [d, close] : series[i].observations) {
            calendar.insert(d);
            by_date[i].emplace(d, close);
        }
    if (calendar.empty()) throw input_error("union calendar is empty");

    // 30% rule on the union calendar: a date is dropped when strictly more than
    // closed_fraction_max of the markets have no observation on it.
    std::vector<Date> kept;
    for (const Date& d : calendar) {
        size_t closed = 0;
        for (size_t i = 0; i < n; ++i)
            if (!by_date[i].count(d)) ++closed;
        double frac = static_cast<double>(closed) / static_cast<double>(n);
        if (frac > closed_fraction_max) {
            if (report) report->removed_dates.emplace_back(d, frac);
        } else {
            kept.push_back(d);
        }
    }
    if (kept.empty()) throw input_error("every date failed the closed-fraction rule");

    for (size_t i = 0; i < n; ++i) {
        bool any = std::any_of(kept.begin(), kept.end(),
                               [&](const Date& d) { return by_date[i].count(d) > 0; });
        if (!any)
            throw input_error("index " + series[i].label +
                              " has zero observations after alignment");
    }

    PricePanel panel;
    panel.labels.reserve(n);
    for (const auto& s : series) panel.labels.push_back(s.label);
    panel.dates = kept;
    panel.prices = Matrix(n, kept.size());
    panel.fill_mask.assign(n * kept.size(), 0);
    if (report) report->fill_counts.assign(n, 0);

    // Carry the last *retained* close, so removed-date observations never leak
    // into the panel.
    std::vector<double> current(n, std::numeric_limits<double>::quiet_NaN());
    for (size_t t = 0; t < kept.size(); ++t) {
        for (size_t i = 0; i < n; ++i) {
            auto it = by_date[i].find(kept[t]);
            if (it != by_date[i].end()) {
                if (!(it->second > 0.0) || !std::isfinite(it->second))
                    throw input_error("non-positive close in series " + series[i].label +
                                      " at " + kept[t].to_string());
                current[i] = it->second;
            } else {
                if (std::isnan(current[i]))
                    throw input_error("index " + series[i].label + " has no prior close to carry at " +
                                      kept[t].to_string());
                panel.fill_mask[i * kept.size() + t] = 1;
                if (report) ++report->fill_counts[i];
            }
            panel.prices(i, t) = current[i];
        }
    }
    return panel;
}

ReturnPanel to_returns(const PricePanel& panel) {
    const size_t n = panel.labels.size();
    const size_t d = panel.dates.size();
    if (d < 3) throw input_error("need at least 3 dates to form returns");
    const size_t len = d - 1;

    ReturnPanel ret;
    ret.labels = panel.labels;
    ret.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    ret.R = Matrix(n, len);
    ret.r = Matrix(n, len);
    ret.g = Matrix(n, len);
    ret.mu.resize(n);
    ret.sigma.resize(n);

    for (size_t i = 0; i < n; ++i) {
        for (size_t t = 0; t < len; ++t)
            ret.R(i, t) = std::log(panel.prices(i, t + 1)) - std::log(panel.prices(i, t));
        double mu = 0.0;
        for (size_t t = 0; t < len; ++t) mu += ret.R(i, t);
        mu /= static_cast<double>(len);
        double var = 0.0;
        for (size_t t = 0; t < len; ++t) {
            double dlt = ret.R(i, t) - mu;
            var += dlt * dlt;
        }
        var /= static_cast<double>(len);  // population convention
        if (!(var > 0.0))
            throw numeric_error("constant-price series: " + panel.labels[i]);
        double sigma = std::sqrt(var);
        ret.mu[i] = mu;
        ret.sigma[i] = sigma;
        for (size_t t = 0; t < len; ++t) {
            ret.r(i, t) = (ret.R(i, t) - mu) / sigma;
            ret.g(i, t) = ret.R(i, t) / sigma;
        }
    }
    return ret;
}

std::vector<double> ReturnPanel::g_row(size_t i) const {
    std::vector<double> row(len());
    for (size_t t = 0; t < len(); ++t) row[t] = g(i, t);
    return row;
}

namespace {

VolatilitySeries volatility_of_row(const ReturnPanel& returns, size_t i, int T, int step) {
    VolatilitySeries out;
    out.index_label = returns.labels[i];
    out.window_T = T;
    const size_t len = returns.len();
    for (size_t start = 0; start + static_cast<size_t>(T) <= len;
         start += static_cast<size_t>(step)) {
        double sum = 0.0;
        for (size_t t = start; t < start + static_cast<size_t>(T); ++t)
            sum += std::abs(returns.R(i, t));
        out.values.emplace_back(returns.dates[start + T - 1], sum / (T - 1));
    }
    return out;
}

void check_vol_args(const ReturnPanel& returns, int T, int& step) {
    if (T < 2) throw input_error("volatility window T must be >= 2");
    if (step == 0) step = T;
    if (step < 1) throw input_error("volatility step must be >= 1");
    if (static_cast<size_t>(T) > returns.len())
        throw input_error("volatility window T exceeds series length");
}

}  // namespace

VolatilitySeries volatility(const ReturnPanel& returns, const std::string& index_label,
                            int T, int step) {
    check_vol_args(returns, T, step);
    auto it = std::find(returns.labels.begin(), returns.labels.end(), index_label);
    if (it == returns.labels.end()) throw input_error("unknown index label: " + index_label);
    return volatility_of_row(returns, static_cast<size_t>(it - returns.labels.begin()), T,
                             step);
}

VolatilitySeries mean_volatility(const ReturnPanel& returns, int T, int step) {
    check_vol_args(returns, T, step);
    VolatilitySeries out;
    out.window_T = T;
    for (size_t i = 0; i < returns.n(); ++i) {
        VolatilitySeries one = volatility_of_row(returns, i, T, step);
        if (i == 0) {
            out.values = one.values;
        } else {
            for (size_t w = 0; w < out.values.size(); ++w)
                out.values[w].second += one.values[w].second;
        }
    }
    for (auto& [date, v] : out.values) v /= static_cast<double>(returns.n());
    return out;
}

void write_panel(const PricePanel& panel, const std::string& path) {
    const size_t n = panel.labels.size();
    const size_t d = panel.dates.size();
    std::vector<CsvRow> rows, mask;
    CsvRow header{"date"};
    for (const auto& l : panel.labels) header.push_back(l);
    rows.push_back(header);
    mask.push_back(header);
    for (size_t t = 0; t < d; ++t) {
        CsvRow row{panel.dates[t].to_string()}, mrow{panel.dates[t].to_string()};
        for (size_t i = 0; i < n; ++i) {
            row.push_back(format_double(panel.prices(i, t)));
            mrow.push_back(panel.filled(i, t) ? "1" : "0");
        }
        rows.push_back(std::move(row));
        mask.push_back(std::move(mrow));
    }
    write_csv(path, rows);
    std::string stem = path;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
        stem.resize(stem.size() - 4);
    write_csv(stem + ".mask.csv", mask);
}

}  // namespace findex
