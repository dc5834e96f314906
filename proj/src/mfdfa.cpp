#include "findex/mfdfa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "findex/errors.hpp"
#include "findex/fft.hpp"
#include "findex/rng.hpp"

namespace findex {

std::vector<double> profile(const std::vector<double>& g) {
    if (g.size() < 16) throw input_error("profile: series shorter than 16");
    double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    std::vector<double> y(g.size());
    double acc = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        acc += g[i] - mean;
        y[i] = acc;
    }
    return y;
}

namespace {

// Least-squares polynomial detrend shared by all segments of one scale.
// The abscissa 0..s-1 is mapped to [-1,1]; the Gram matrix of that basis is
// segment-independent, so it is factored once (Cholesky) per scale.
class Detrender {
  public:
    Detrender(int s, int m) : s_(s), m_(m), t_(s), chol_((m + 1) * (m + 1)) {
        for (int i = 0; i < s; ++i)
            t_[i] = s == 1 ? 0.0 : 2.0 * i / (s - 1.0) - 1.0;
        // Gram entries G_jk = sum_i t^(j+k)
        std::vector<double> moments(2 * m + 1, 0.0);
        for (int i = 0; i < s; ++i) {
            double p = 1.0;
            for (int d = 0; d <= 2 * m; ++d) {
                moments[d] += p;
                p *= t_[i];
            }
        }
        const int k = m + 1;
        std::vector<double> gram(k * k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) gram[a * k + b] = moments[a + b];
        // Cholesky (gram is SPD for s >= m+1 distinct points)
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b <= a; ++b) {
                double sum = gram[a * k + b];
                for (int c = 0; c < b; ++c) sum -= chol_[a * k + c] * chol_[b * k + c];
                if (a == b) {
                    if (sum <= 0.0) throw numeric_error("detrend basis degenerate");
                    chol_[a * k + a] = std::sqrt(sum);
                } else {
                    chol_[a * k + b] = sum / chol_[b * k + b];
                }
            }
        }
    }

    // Mean squared residual of y (length s) about its best degree-m fit.
    double residual_variance(const double* y) const {
        const int k = m_ + 1;
        double rhs[4] = {0, 0, 0, 0};
        for (int i = 0; i < s_; ++i) {
            double p = 1.0;
            for (int d = 0; d < k; ++d) {
                rhs[d] += p * y[i];
                p *= t_[i];
            }
        }
        double coef[4];
        for (int a = 0; a < k; ++a) {  // forward substitution
            double sum = rhs[a];
            for (int c = 0; c < a; ++c) sum -= chol_[a * k + c] * coef[c];
            coef[a] = sum / chol_[a * k + a];
        }
        for (int a = k - 1; a >= 0; --a) {  // back substitution
            double sum = coef[a];
            for (int c = a + 1; c < k; ++c) sum -= chol_[c * k + a] * coef[c];
            coef[a] = sum / chol_[a * k + a];
        }
        double ss = 0.0;
        for (int i = 0; i < s_; ++i) {
            double fit = 0.0, p = 1.0;
            for (int d = 0; d < k; ++d) {
                fit += coef[d] * p;
                p *= t_[i];
            }
            double r = y[i] - fit;
            ss += r * r;
        }
        return ss / static_cast<double>(s_);
    }

  private:
    int s_, m_;
    std::vector<double> t_;
    std::vector<double> chol_;
};

void check_scale(size_t len, int s, int m) {
    if (m < 1 || m > 3) throw input_error("detrend order must be 1..3");
    if (s < m + 2) throw input_error("scale " + std::to_string(s) + " below m+2");
    if (static_cast<size_t>(s) > len / 4)
        throw input_error("scale " + std::to_string(s) + " above length/4");
}

}  // namespace

std::vector<double> segment_variances(const std::vector<double>& Y, int s, int m) {
    check_scale(Y.size(), s, m);
    const size_t ns = Y.size() / static_cast<size_t>(s);
    Detrender det(s, m);
    std::vector<double> out;
    out.reserve(2 * ns);
    for (size_t v = 0; v < ns; ++v)  // forward segments
        out.push_back(det.residual_variance(Y.data() + v * s));
    for (size_t v = 0; v < ns; ++v)  // reverse segments, anchored at the tail
        out.push_back(det.residual_variance(Y.data() + Y.size() - (v + 1) * s));
    return out;
}

std::vector<double> default_q_grid() {
    std::vector<double> q;
    for (int k = -20; k <= 20; ++k) {
        if (k == 0) continue;
        q.push_back(0.5 * k);
    }
    return q;
}

std::vector<int> scale_ladder(int lo, int hi, size_t count) {
    if (lo < 3 || hi < lo) throw input_error("scale_ladder: need 3 <= lo <= hi");
    if (count == 0) throw input_error("scale_ladder: count must be positive");
    std::vector<int> scales;
    for (size_t k = 0; k < count; ++k) {
        double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        double v = std::exp(std::log(static_cast<double>(lo)) * (1.0 - f) +
                            std::log(static_cast<double>(hi)) * f);
        int s = static_cast<int>(std::lround(v));
        s = std::clamp(s, lo, hi);
        if (scales.empty() || scales.back() != s) scales.push_back(s);
    }
    return scales;
}

std::vector<int> default_scales(size_t len, int m, size_t count) {
    const int lo = std::max(m + 2, 16);
    const int hi = static_cast<int>(len / 4);
    if (hi < lo) throw input_error("series too short for MF-DFA scale ladder");
    return scale_ladder(lo, hi, count);
}

namespace {

double log_sum_exp(const std::vector<double>& a) {
    double mx = *std::max_element(a.begin(), a.end());
    double s = 0.0;
    for (double v : a) s += std::exp(v - mx);
    return mx + std::log(s);
}

}  // namespace

FluctuationTable fluctuation(const std::vector<double>& g, const std::vector<int>& scales,
                             const std::vector<double>& q_values, int m) {
    if (scales.empty()) throw input_error("fluctuation: no scales");
    if (q_values.empty()) throw input_error("fluctuation: no q values");
    std::vector<double> Y = profile(g);

    FluctuationTable table;
    table.scales = scales;
    table.q_values = q_values;
    table.F.assign(q_values.size(), std::vector<double>(scales.size(), 0.0));
    table.excluded.assign(q_values.size(), 0);
    table.evaluated.assign(q_values.size(), 0);
    table.unreliable.assign(q_values.size(), 0);

    for (size_t si = 0; si < scales.size(); ++si) {
        std::vector<double> var = segment_variances(Y, scales[si], m);
        std::vector<double> lnv;
        lnv.reserve(var.size());
        size_t zeros = 0;
        for (double v : var) {
            if (v > 0.0)
                lnv.push_back(std::log(v));
            else
                ++zeros;
        }
        const double total = static_cast<double>(var.size());

        for (size_t qi = 0; qi < q_values.size(); ++qi) {
            double q = q_values[qi];
            table.evaluated[qi] += var.size();
            double f;
            if (lnv.empty()) {
                // all segments perfectly detrended: no fluctuation at this scale
                table.excluded[qi] += zeros;
                f = 0.0;
            } else if (q == 0.0) {
                // logarithmic mean; zero-variance segments carry -inf and are excluded
                table.excluded[qi] += zeros;
                double s = std::accumulate(lnv.begin(), lnv.end(), 0.0);
                f = std::exp(s / (2.0 * static_cast<double>(lnv.size())));
            } else if (q > 0.0) {
                // zeros contribute 0 to the mean; keep the full denominator
                std::vector<double> terms(lnv.size());
                for (size_t i = 0; i < lnv.size(); ++i) terms[i] = 0.5 * q * lnv[i];
                f = std::exp((log_sum_exp(terms) - std::log(total)) / q);
            } else {
                // q < 0: zero variances would blow up; exclude and count them
                table.excluded[qi] += zeros;
                std::vector<double> terms(lnv.size());
                for (size_t i = 0; i < lnv.size(); ++i) terms[i] = 0.5 * q * lnv[i];
                f = std::exp(
                    (log_sum_exp(terms) - std::log(static_cast<double>(lnv.size()))) / q);
            }
            table.F[qi][si] = f;
        }
    }

    for (size_t qi = 0; qi < q_values.size(); ++qi)
        if (table.excluded[qi] * 100 > table.evaluated[qi]) table.unreliable[qi] = 1;
    return table;
}

HqCurve fit_hq(const FluctuationTable& table, int s_lo, int s_hi) {
    std::vector<size_t> pick;
    for (size_t si = 0; si < table.scales.size(); ++si) {
        int s = table.scales[si];
        if ((s_lo == 0 || s >= s_lo) && (s_hi == 0 || s <= s_hi)) pick.push_back(si);
    }
    if (pick.size() < 4) throw input_error("fit_hq: need at least 4 scales in fit range");

    std::vector<double> x(pick.size());
    for (size_t i = 0; i < pick.size(); ++i)
        x[i] = std::log(static_cast<double>(table.scales[pick[i]]));
    double xbar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double sxx = 0.0;
    for (double v : x) sxx += (v - xbar) * (v - xbar);
    if (sxx <= 0.0) throw input_error("fit_hq: degenerate scale set");

    HqCurve curve;
    curve.q_values = table.q_values;
    curve.h.resize(table.q_values.size());
    curve.r2.resize(table.q_values.size());
    curve.unreliable = table.unreliable;

    for (size_t qi = 0; qi < table.q_values.size(); ++qi) {
        std::vector<double> y(pick.size());
        for (size_t i = 0; i < pick.size(); ++i) {
            double f = table.F[qi][pick[i]];
            if (!(f > 0.0) || !std::isfinite(f))
                throw numeric_error("fit_hq: non-positive fluctuation value (input too regular)");
            y[i] = std::log(f);
        }
        double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
        double sxy = 0.0, syy = 0.0;
        for (size_t i = 0; i < y.size(); ++i) {
            sxy += (x[i] - xbar) * (y[i] - ybar);
            syy += (y[i] - ybar) * (y[i] - ybar);
        }
        double slope = sxy / sxx;
        curve.h[qi] = slope;
        if (syy <= 1e-30) {
            curve.r2[qi] = 1.0;  // constant y: the slope-0 fit is exact
        } else {
            double ssres = syy - sxy * sxy / sxx;
            curve.r2[qi] = 1.0 - ssres / syy;
        }
    }

    // H = h(2) when the grid carries q = 2.
    curve.H = std::numeric_limits<double>::quiet_NaN();
    for (size_t qi = 0; qi < curve.q_values.size(); ++qi)
        if (curve.q_values[qi] == 2.0) curve.H = curve.h[qi];

    size_t arg_min = 0, arg_max = 0;
    for (size_t qi = 1; qi < curve.q_values.size(); ++qi) {
        if (curve.q_values[qi] < curve.q_values[arg_min]) arg_min = qi;
        if (curve.q_values[qi] > curve.q_values[arg_max]) arg_max = qi;
    }
    curve.delta_h = curve.h[arg_min] - curve.h[arg_max];

    // h should fall (weakly) as q rises; report the worst increase.
    std::vector<size_t> order(curve.q_values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return curve.q_values[a] < curve.q_values[b];
    });
    double running_min = std::numeric_limits<double>::infinity();
    double violation = 0.0;
    for (size_t idx : order) {
        if (curve.h[idx] > running_min) violation = std::max(violation, curve.h[idx] - running_min);
        running_min = std::min(running_min, curve.h[idx]);
    }
    curve.monotonicity_violation = violation;
    curve.monotone_ok = violation <= 0.02;
    return curve;
}

HqCurve mfdfa(const std::vector<double>& g, const MfdfaConfig& cfg) {
    std::vector<double> q = cfg.q_values.empty() ? default_q_grid() : cfg.q_values;
    std::vector<int> scales =
        cfg.scales.empty() ? default_scales(g.size(), cfg.detrend_order) : cfg.scales;
    return fit_hq(fluctuation(g, scales, q, cfg.detrend_order));
}

std::vector<double> shuffle_series(const std::vector<double>& g, uint64_t seed) {
    std::vector<double> out(g);
    Rng rng(seed);
    rng.shuffle(out);
    return out;
}

namespace {

// rank[i] = position of element i when sorting by (value, index).
std::vector<size_t> ranks_of(const std::vector<double>& z) {
    std::vector<size_t> idx(z.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (z[a] != z[b]) return z[a] < z[b];
        return a < b;
    });
    std::vector<size_t> rank(z.size());
    for (size_t pos = 0; pos < idx.size(); ++pos) rank[idx[pos]] = pos;
    return rank;
}

}  // namespace

IaaftResult iaaft(const std::vector<double>& g, const SurrogateSpec& spec) {
    if (g.size() < 32) throw input_error("iaaft: series shorter than 32");
    if (spec.iaaft_max_iter < 1) throw input_error("iaaft: max_iter must be >= 1");

    std::vector<double> sorted_vals(g);
    std::sort(sorted_vals.begin(), sorted_vals.end());
    std::vector<std::complex<double>> target = rfft(g);
    std::vector<double> amp(target.size());
    for (size_t k = 0; k < target.size(); ++k) amp[k] = std::abs(target[k]);

    IaaftResult res;
    std::vector<double> y = shuffle_series(g, spec.seed);
    std::vector<size_t> prev_rank;

    for (int iter = 1; iter <= spec.iaaft_max_iter; ++iter) {
        // (i) impose the target amplitude spectrum, keeping current phases
        std::vector<std::complex<double>> spec_y = rfft(y);
        for (size_t k = 0; k < spec_y.size(); ++k) {
            double mag = std::abs(spec_y[k]);
            spec_y[k] = mag > 0.0 ? spec_y[k] * (amp[k] / mag)
                                  : std::complex<double>(amp[k], 0.0);
        }
        std::vector<double> z = irfft(spec_y, g.size());

        // (ii) impose the exact value distribution by rank remapping
        std::vector<size_t> rank = ranks_of(z);
        for (size_t i = 0; i < y.size(); ++i) y[i] = sorted_vals[rank[i]];

        res.iterations = iter;
        if (!prev_rank.empty() && rank == prev_rank) {
            res.converged = true;
            break;
        }
        prev_rank = std::move(rank);
    }
    res.series = std::move(y);
    return res;
}

std::vector<double> bmfm_generate(double a, int n_max) {
    if (!(a > 0.0 && a < 1.0)) throw input_error("bmfm_generate: a must be in (0,1)");
    if (n_max < 4 || n_max > 30) throw input_error("bmfm_generate: n_max must be in 4..30");
    std::vector<double> pow_a(n_max + 1, 1.0), pow_b(n_max + 1, 1.0);
    for (int i = 1; i <= n_max; ++i) {
        pow_a[i] = pow_a[i - 1] * a;
        pow_b[i] = pow_b[i - 1] * (1.0 - a);
    }
    size_t len = size_t{1} << n_max;
    std::vector<double> x(len);
    for (size_t k = 0; k < len; ++k) {
        int n = std::popcount(k);
        x[k] = pow_a[n] * pow_b[n_max - n];
    }
    return x;
}

double bmfm_analytic_h(double q, double a) {
    if (q == 0.0) throw input_error("bmfm_analytic_h: q must be nonzero");
    if (!(a > 0.0 && a < 1.0)) throw input_error("bmfm_analytic_h: a must be in (0,1)");
    constexpr double ln2 = 0.69314718055994530941723212145818;
    return 1.0 / q - std::log(std::pow(a, q) + std::pow(1.0 - a, q)) / (q * ln2);
}

namespace {

double curve_distance(const HqCurve& a, const HqCurve& b) {
    double ss = 0.0;
    for (size_t i = 0; i < a.h.size(); ++i) {
        double d = a.h[i] - b.h[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(a.h.size()));
}

}  // namespace

BmfmFit bmfm_fit(const HqCurve& target, int n_max, double grid_step, bool refine) {
    if (!(grid_step > 0.0 && grid_step < 0.5)) throw input_error("bmfm_fit: bad grid step");
    if (target.h.empty()) throw input_error("bmfm_fit: empty target curve");

    MfdfaConfig cand_cfg;
    cand_cfg.q_values = target.q_values;
    cand_cfg.detrend_order = 1;

    std::map<long, HqCurve> cache;
    auto estimate = [&](double a) -> const HqCurve& {
        long key = std::lround(a * 1e9);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, mfdfa(bmfm_generate(a, n_max), cand_cfg)).first;
        return it->second;
    };

    BmfmFit fit;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> grid;
    for (long k = 1; grid_step * static_cast<double>(k) < 1.0 - 1e-12; ++k) {
        double a = grid_step * static_cast<double>(k);
        if (std::abs(a - 0.5) < 1e-12) continue;
        grid.push_back(a);
    }
    if (grid.empty()) throw input_error("bmfm_fit: empty grid");
    for (double a : grid) {
        double d = curve_distance(target, estimate(a));
        if (d < best) {
            best = d;
            fit.a = a;
            fit.distance = d;
        }
    }

    if (refine) {
        // Golden-section inside one grid step either side, clipped to (0,1)
        // and kept on one side of 0.5.
        double lo = std::max(fit.a - grid_step, 1e-6);
        double hi = std::min(fit.a + grid_step, 1.0 - 1e-6);
        if (fit.a < 0.5) hi = std::min(hi, 0.5 - 1e-6);
        if (fit.a > 0.5) lo = std::max(lo, 0.5 + 1e-6);
        constexpr double inv_phi = 0.61803398874989484820458683436564;
        double c = hi - (hi - lo) * inv_phi;
        double d = lo + (hi - lo) * inv_phi;
        double fc = curve_distance(target, estimate(c));
        double fd = curve_distance(target, estimate(d));
        for (int it = 0; it < 30 && hi - lo > 1e-5; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - (hi - lo) * inv_phi;
                fc = curve_distance(target, estimate(c));
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + (hi - lo) * inv_phi;
                fd = curve_distance(target, estimate(d));
            }
        }
        double a_ref = fc < fd ? c : d;
        double d_ref = std::min(fc, fd);
        if (d_ref < fit.distance) {
            fit.a = a_ref;
            fit.distance = d_ref;
        }
    }

    fit.mirror_a = 1.0 - fit.a;
    fit.mirror_distance = curve_distance(target, estimate(fit.mirror_a));
    double scale = std::max({fit.distance, fit.mirror_distance, 1e-12});
    fit.mirror_tie = std::abs(fit.distance - fit.mirror_distance) <= 0.01 * scale;
    return fit;
}

MfReport mf_report(const std::vector<double>& g, const MfdfaConfig& cfg) {
    if (g.size() < 256) throw input_error("mf_report: series shorter than 256");
    MfdfaConfig shared = cfg;
    if (shared.q_values.empty()) shared.q_values = default_q_grid();
    if (shared.scales.empty()) shared.scales = default_scales(g.size(), shared.detrend_order);

    MfReport rep;
    rep.original = mfdfa(g, shared);
    rep.shuffled = mfdfa(shuffle_series(g, shared.seed), shared);
    SurrogateSpec spec;
    spec.seed = shared.seed ^ 0x9e3779b97f4a7c15ull;  // decorrelate from the shuffle stream
    spec.iaaft_max_iter = shared.iaaft_max_iter;
    IaaftResult sur = iaaft(g, spec);
    rep.surrogate_converged = sur.converged;
    rep.surrogate = mfdfa(sur.series, shared);
    return rep;
}

}  // namespace findex
