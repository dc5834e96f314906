#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace findex {

// Cumulative sum of the mean-centered series; last element is 0 by
// construction (within rounding).
std::vector<double> profile(const std::vector<double>& g);

// Per-segment mean squared residual after a degree-m polynomial fit, for the
// N_s forward segments followed by the N_s reverse segments (2*N_s values).
// Requires m+2 <= s <= len/4.
std::vector<double> segment_variances(const std::vector<double>& Y, int s, int m);

// F_q(s) per scale and q. For q < 0 (and the logarithmic q = 0 mean) a
// zero-variance segment would blow the mean up, so such segments are excluded
// and counted; a q-row is flagged unreliable when more than 1% of its segment
// evaluations were excluded. For q > 0 zero variances simply contribute 0.
struct FluctuationTable {
    std::vector<int> scales;
    std::vector<double> q_values;
    std::vector<std::vector<double>> F;     // [q][scale]
    std::vector<size_t> excluded;           // per q, total excluded segments
    std::vector<size_t> evaluated;          // per q, total segments seen
    std::vector<uint8_t> unreliable;        // per q
};

// h(q) plus fit quality. `monotonicity_violation` is the largest increase of
// h over any q pair (h should be non-increasing in q); `monotone_ok` allows
// 0.02 of estimation noise.
struct HqCurve {
    std::vector<double> q_values;
    std::vector<double> h;
    std::vector<double> r2;
    double H = 0.0;        // h(2); NaN when 2 is not on the grid
    double delta_h = 0.0;  // h(q_min) - h(q_max)
    std::vector<uint8_t> unreliable;  // propagated from the table
    double monotonicity_violation = 0.0;
    bool monotone_ok = true;
};

struct SurrogateSpec {
    uint64_t seed = 0;
    int iaaft_max_iter = 1000;
};

struct IaaftResult {
    std::vector<double> series;
    int iterations = 0;
    bool converged = false;
};

struct MfdfaConfig {
    std::vector<double> q_values;  // default: -10..10 step 0.5, no 0
    std::vector<int> scales;       // empty = default ladder for the input length
    int detrend_order = 1;         // m, 1..3
    uint64_t seed = 0;             // drives shuffle + surrogate
    int iaaft_max_iter = 1000;
};

// -10..10 in steps of 0.5 with 0 removed.
std::vector<double> default_q_grid();

// ~`count` logarithmically spaced integers in [lo, hi], deduped.
std::vector<int> scale_ladder(int lo, int hi, size_t count);

// scale_ladder over [max(m+2,16), len/4].
std::vector<int> default_scales(size_t len, int m, size_t count = 20);

FluctuationTable fluctuation(const std::vector<double>& g, const std::vector<int>& scales,
                             const std::vector<double>& q_values, int m);

// Least-squares slope of log F_q(s) vs log s over scales in [s_lo, s_hi]
// (0,0 = every scale). Requires at least 4 scales in range.
HqCurve fit_hq(const FluctuationTable& table, int s_lo = 0, int s_hi = 0);

// Convenience: profile -> variances -> fluctuation -> fit.
HqCurve mfdfa(const std::vector<double>& g, const MfdfaConfig& cfg);

// Exact multiset-preserving Fisher-Yates permutation.
std::vector<double> shuffle_series(const std::vector<double>& g, uint64_t seed);

// Iterated amplitude-adjusted Fourier transform surrogate: alternates
// amplitude-spectrum replacement with rank remapping onto the sorted original
// values; stops when the rank permutation stops changing. The final step is
// the rank remap, so the output's value multiset is exactly the input's.
IaaftResult iaaft(const std::vector<double>& g, const SurrogateSpec& spec);

// Binomial cascade series x_k = a^n(k-1) * (1-a)^(n_max - n(k-1)) with n the
// binary popcount; length 2^n_max, sums to 1.
std::vector<double> bmfm_generate(double a, int n_max);

// Closed-form cascade exponents h(q) = 1/q - ln(a^q + (1-a)^q)/(q ln 2).
double bmfm_analytic_h(double q, double a);

struct BmfmFit {
    double a = 0.0;
    double distance = 0.0;         // RMS distance between h(q) curves
    double mirror_a = 0.0;         // 1 - a
    double mirror_distance = 0.0;
    bool mirror_tie = false;       // distances equal within 1% relative
};

// Grid search over a in (0,1) \ {0.5} (default step 0.0125) minimizing the
// RMS h(q) distance between `target` and the MF-DFA estimate of a generated
// cascade; optional golden-section refinement around the best grid point.
BmfmFit bmfm_fit(const HqCurve& target, int n_max = 12, double grid_step = 0.0125,
                 bool refine = false);

// Same-config original / shuffled / IAAFT-surrogate triple on one series.
struct MfReport {
    HqCurve original, shuffled, surrogate;
    bool surrogate_converged = true;
};

MfReport mf_report(const std::vector<double>& g, const MfdfaConfig& cfg);

}  // namespace findex
