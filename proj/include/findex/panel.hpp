#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "findex/dates.hpp"
#include "findex/matrix.hpp"

namespace findex {

// One market's raw closing-price history. Dates strictly increasing,
// closes > 0 (enforced at load).
struct RawSeries {
    std::string label;
    std::vector<std::pair<Date, double>> observations;
};

enum class CsvFormat { wide, lng };

// Calendar-aligned price matrix: N labels x D dates, no missing cells.
// fill_mask marks cells imputed by last-close carry-forward.
struct PricePanel {
    std::vector<std::string> labels;
    std::vector<Date> dates;
    Matrix prices;                   // N x D
    std::vector<uint8_t> fill_mask;  // N x D, row-major

    bool filled(size_t i, size_t t) const { return fill_mask[i * dates.size() + t] != 0; }
};

// What `align` did: which dates were dropped and how many cells were imputed.
struct AlignReport {
    std::vector<std::pair<Date, double>> removed_dates;  // (date, closed fraction)
    std::vector<size_t> fill_counts;                     // per label, aligned order
};

// Log returns of an aligned panel plus the two normalizations used
// downstream: r has per-row mean 0 / variance 1 (population convention),
// g = R / sigma keeps the row mean.
struct ReturnPanel {
    std::vector<std::string> labels;
    std::vector<Date> dates;  // length L; dates[t] is the later day of return t
    Matrix R;                 // N x L log returns
    std::vector<double> mu;   // per-row mean of R
    std::vector<double> sigma;
    Matrix r;  // (R - mu) / sigma
    Matrix g;  // R / sigma

    size_t n() const { return labels.size(); }
    size_t len() const { return dates.size(); }
    std::vector<double> g_row(size_t i) const;
};

struct VolatilitySeries {
    std::string index_label;  // empty for the cross-index mean
    int window_T = 0;
    std::vector<std::pair<Date, double>> values;  // (window end date, v)
};

// Parses a price CSV. Wide: header `date,<label>...`, empty cell = closed.
// Long: header `date,label,close`. Rows with non-numeric or non-positive
// closes are dropped from that series and reported in `warnings`.
std::vector<RawSeries> load_raw(const std::string& path, CsvFormat format,
                                std::vector<std::string>* warnings = nullptr);

// Aligns series onto the union calendar of observed dates. A date where the
// fraction of closed markets exceeds `closed_fraction_max` (strictly) is
// removed; on kept dates, missing cells carry the index's most recent
// *retained* close forward. Dates before an index's first observation count
// as closed for it.
PricePanel align(const std::vector<RawSeries>& series, double closed_fraction_max = 0.30,
                 AlignReport* report = nullptr);

// Log returns per row, plus normalized variants. Throws numeric_error on a
// constant-price row (sigma = 0).
ReturnPanel to_returns(const PricePanel& panel);

// v = (sum of |R| over a T-day window) / (T-1); windows advance by `step`
// (0 means step = T, i.e. disjoint blocks).
VolatilitySeries volatility(const ReturnPanel& returns, const std::string& index_label,
                            int T = 25, int step = 0);

// Per-window average of `volatility` across all indices.
VolatilitySeries mean_volatility(const ReturnPanel& returns, int T = 25, int step = 0);

// Writes the aligned panel as wide CSV plus a sibling `<stem>.mask.csv` of
// 0/1 imputation flags.
void write_panel(const PricePanel& panel, const std::string& path);

}  // namespace findex
