#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "findex/dates.hpp"
#include "findex/matrix.hpp"
#include "findex/panel.hpp"

namespace findex {

// Equal-time cross-correlation matrix of normalized returns over one window.
// Unit diagonal exactly; entries clamped to [-1, 1].
struct CorrMatrix {
    std::vector<std::string> labels;
    Matrix C;
    Date window_start, window_end;  // dates of first/last return in the window
    int T_days = 0;                 // number of returns in the window
};

// Full eigensystem of a CorrMatrix plus the inverse participation ratio of
// every eigenvector. Eigenvalues ascending; column k of `vectors` pairs with
// values[k].
struct Spectrum {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
    std::vector<double> ipr;
    size_t rotations = 0;
    double offdiag_residual = 0.0;
};

// Random-matrix eigenvalue support for aspect ratio Q = L/N:
// bounds (1 ± 1/sqrt(Q))^2.
struct MpLaw {
    double Q = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

// Per-window summary of the sliding spectral analysis. `largest` holds the
// top three eigenvalues descending; S[m] is the mean absolute correlation of
// index m with everyone else; X[m] weights S[m] by the squared top-eigenvector
// component; ci = sum of X.
struct WindowTrace {
    int window_index = 0;  // 1-based
    Date start_date, end_date;
    double l1 = 0, l2 = 0, l3 = 0;
    double l_min = 0;
    double ipr_last = 0;  // IPR of the top eigenvector
    double ci = 0;
    std::vector<double> S, X;
};

struct SlidingResult {
    std::vector<WindowTrace> traces;
    std::vector<std::string> skipped;  // windows skipped due to constant series
};

// Eigenvalue histogram against the theoretical density curve.
struct MpComparison {
    std::vector<double> bin_edges;          // bins+1 edges, equal width
    std::vector<double> empirical_density;  // per bin, count/(total*width)
    std::vector<double> grid;               // curve sample points
    std::vector<double> theoretical_density;
    size_t below = 0, inside = 0, above = 0;  // vs [lambda_min, lambda_max]
};

// C over returns [t0, t1) with per-window re-normalization (mean/sigma from
// inside the window), so the diagonal is exactly 1 regardless of the panel's
// global normalization. Full range when t1 = 0. Throws numeric_error on a
// constant series inside the window.
CorrMatrix correlation(const ReturnPanel& returns, size_t t0 = 0, size_t t1 = 0);

MpLaw mp_bounds(size_t n, size_t len);

// Density (Q/2pi)*sqrt((l_max-l)(l-l_min))/l strictly inside the support,
// 0 outside and at the edges.
std::vector<double> mp_density(const MpLaw& law, const std::vector<double>& lambda_grid);

// Jacobi eigendecomposition plus IPR; see matrix.hpp for conventions.
Spectrum eigendecompose(const CorrMatrix& corr);

// I^k = sum of fourth powers of eigenvector k's components.
std::vector<double> ipr_of(const Matrix& eigenvectors);

// Disjoint (or stepped) windows over the return panel; one trace per window.
// Windows containing a constant series are skipped and reported.
SlidingResult sliding_spectra(const ReturnPanel& returns, int T = 25, int step = 25);

// Histogram of pooled eigenvalues on equal-width bins spanning their range,
// with the theoretical curve sampled on `curve_points` points across the
// union of the histogram range and the support.
MpComparison mp_compare(const std::vector<double>& eigenvalues, const MpLaw& law,
                        size_t bins, size_t curve_points = 400);

}  // namespace findex
