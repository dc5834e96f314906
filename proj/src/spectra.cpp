#include "findex/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "findex/errors.hpp"

namespace findex {

CorrMatrix correlation(const ReturnPanel& returns, size_t t0, size_t t1) {
    if (t1 == 0) t1 = returns.len();
    if (t0 >= t1 || t1 > returns.len())
        throw input_error("correlation window out of range");
    const size_t w = t1 - t0;
    if (w < 2) throw input_error("correlation window must span at least 2 returns");
    const size_t n = returns.n();

    // Window-local normalization: population moments inside [t0, t1).
    Matrix z(n, w);
    for (size_t i = 0; i < n; ++i) {
        double mu = 0.0, lo = returns.R(i, t0), hi = returns.R(i, t0);
        for (size_t t = 0; t < w; ++t) {
            double v = returns.R(i, t0 + t);
            mu += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        mu /= static_cast<double>(w);
        double var = 0.0;
        for (size_t t = 0; t < w; ++t) {
            double d = returns.R(i, t0 + t) - mu;
            var += d * d;
        }
        var /= static_cast<double>(w);
        // lo == hi catches constants whose mean subtraction leaves rounding
        // dust; the var guard catches underflow of genuinely tiny spreads
        if (lo == hi || !(var > 0.0))
            throw numeric_error("constant series within window: " + returns.labels[i]);
        double sigma = std::sqrt(var);
        for (size_t t = 0; t < w; ++t) z(i, t) = (returns.R(i, t0 + t) - mu) / sigma;
    }

    CorrMatrix corr;
    corr.labels = returns.labels;
    corr.window_start = returns.dates[t0];
    corr.window_end = returns.dates[t1 - 1];
    corr.T_days = static_cast<int>(w);
    corr.C = Matrix(n, n);
    for (size_t i = 0; i < n; ++i) {
        corr.C(i, i) = 1.0;
        for (size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (size_t t = 0; t < w; ++t) s += z(i, t) * z(j, t);
            double c = s / static_cast<double>(w);
            c = std::clamp(c, -1.0, 1.0);
            corr.C(i, j) = corr.C(j, i) = c;
        }
    }
    return corr;
}

MpLaw mp_bounds(size_t n, size_t len) {
    if (n < 2 || len < n) throw input_error("mp_bounds requires L >= N >= 2");
    MpLaw law;
    law.Q = static_cast<double>(len) / static_cast<double>(n);
    double root = 1.0 / std::sqrt(law.Q);
    law.lambda_min = (1.0 - root) * (1.0 - root);
    law.lambda_max = (1.0 + root) * (1.0 + root);
    return law;
}

std::vector<double> mp_density(const MpLaw& law, const std::vector<double>& lambda_grid) {
    std::vector<double> out(lambda_grid.size(), 0.0);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        double lam = lambda_grid[i];
        if (lam <= law.lambda_min || lam >= law.lambda_max || lam <= 0.0) continue;
        out[i] = law.Q / two_pi *
                 std::sqrt((law.lambda_max - lam) * (lam - law.lambda_min)) / lam;
    }
    return out;
}

std::vector<double> ipr_of(const Matrix& eigenvectors) {
    const size_t n = eigenvectors.rows();
    std::vector<double> ipr(eigenvectors.cols(), 0.0);
    for (size_t k = 0; k < eigenvectors.cols(); ++k) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double u = eigenvectors(i, k);
            s += u * u * u * u;
        }
        ipr[k] = s;
    }
    return ipr;
}

Spectrum eigendecompose(const CorrMatrix& corr) {
    EigenSystem es = jacobi_eigen(corr.C);
    Spectrum sp;
    sp.eigenvalues = std::move(es.values);
    sp.eigenvectors = std::move(es.vectors);
    sp.rotations = es.rotations;
    sp.offdiag_residual = es.offdiag_max;
    sp.ipr = ipr_of(sp.eigenvectors);
    return sp;
}

SlidingResult sliding_spectra(const ReturnPanel& returns, int T, int step) {
    if (T < 2) throw input_error("window T must be >= 2");
    if (step < 1) throw input_error("window step must be >= 1");
    if (static_cast<size_t>(T) > returns.len())
        throw input_error("window T exceeds series length");
    const size_t n = returns.n();

    SlidingResult result;
    int index = 0;
    for (size_t start = 0; start + static_cast<size_t>(T) <= returns.len();
         start += static_cast<size_t>(step)) {
        ++index;
        CorrMatrix corr;
        try {
            corr = correlation(returns, start, start + static_cast<size_t>(T));
        } catch (const numeric_error& e) {
            result.skipped.push_back("window " + std::to_string(index) + ": " + e.what());
            continue;
        }
        Spectrum sp = eigendecompose(corr);

        WindowTrace tr;
        tr.window_index = index;
        tr.start_date = corr.window_start;
        tr.end_date = corr.window_end;
        tr.l1 = sp.eigenvalues[n - 1];
        tr.l2 = n >= 2 ? sp.eigenvalues[n - 2] : 0.0;
        tr.l3 = n >= 3 ? sp.eigenvalues[n - 3] : 0.0;
        tr.l_min = sp.eigenvalues[0];
        tr.ipr_last = sp.ipr[n - 1];

        tr.S.resize(n);
        tr.X.resize(n);
        tr.ci = 0.0;
        for (size_t m = 0; m < n; ++m) {
            double s = 0.0;
            for (size_t k = 0; k < n; ++k)
                if (k != m) s += std::abs(corr.C(m, k));
            tr.S[m] = s / static_cast<double>(n - 1);
            double top = sp.eigenvectors(m, n - 1);
            tr.X[m] = top * top * tr.S[m];
            tr.ci += tr.X[m];
        }
        result.traces.push_back(std::move(tr));
    }
    return result;
}

MpComparison mp_compare(const std::vector<double>& eigenvalues, const MpLaw& law,
                        size_t bins, size_t curve_points) {
    if (eigenvalues.empty()) throw input_error("mp_compare: no eigenvalues");
    if (bins < 1) throw input_error("mp_compare: bins must be >= 1");

    double lo = *std::min_element(eigenvalues.begin(), eigenvalues.end());
    double hi = *std::max_element(eigenvalues.begin(), eigenvalues.end());
    if (hi - lo < 1e-12) {  // degenerate spread: widen so the histogram is well formed
        lo -= 0.5;
        hi += 0.5;
    }

    MpComparison cmp;
    const double width = (hi - lo) / static_cast<double>(bins);
    cmp.bin_edges.resize(bins + 1);
    for (size_t b = 0; b <= bins; ++b)
        cmp.bin_edges[b] = lo + width * static_cast<double>(b);
    cmp.bin_edges.back() = hi;

    std::vector<size_t> counts(bins, 0);
    for (double lam : eigenvalues) {
        size_t b = static_cast<size_t>((lam - lo) / width);
        if (b >= bins) b = bins - 1;  // right edge belongs to the last bin
        ++counts[b];
        if (lam < law.lambda_min)
            ++cmp.below;
        else if (lam > law.lambda_max)
            ++cmp.above;
        else
            ++cmp.inside;
    }
    cmp.empirical_density.resize(bins);
    for (size_t b = 0; b < bins; ++b)
        cmp.empirical_density[b] =
            static_cast<double>(counts[b]) / (static_cast<double>(eigenvalues.size()) * width);

    double glo = std::min(lo, law.lambda_min);
    double ghi = std::max(hi, law.lambda_max);
    cmp.grid.resize(curve_points);
    for (size_t i = 0; i < curve_points; ++i)
        cmp.grid[i] = glo + (ghi - glo) * static_cast<double>(i) /
                                static_cast<double>(curve_points - 1);
    cmp.theoretical_density = mp_density(law, cmp.grid);
    return cmp;
}

}  // namespace findex
