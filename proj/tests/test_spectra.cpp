#include <doctest.h>

#include <cmath>
#include <numeric>

#include "findex/errors.hpp"
#include "findex/spectra.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace findex;

TEST_SUITE("spectra") {

TEST_CASE("correlation matches a pairwise oracle and meets its invariants") {
    Matrix R = testutil::gaussian_returns(6, 120, 101);
    ReturnPanel rp = testutil::panel_from_returns(R);
    CorrMatrix corr = correlation(rp);
    CHECK(corr.T_days == 120);
    CHECK(corr.window_start == rp.dates.front());
    CHECK(corr.window_end == rp.dates.back());
    for (size_t i = 0; i < 6; ++i) {
        CHECK(corr.C(i, i) == 1.0);  // exact
        for (size_t j = 0; j < 6; ++j) {
            CHECK(corr.C(i, j) == corr.C(j, i));
            CHECK(corr.C(i, j) >= -1.0);
            CHECK(corr.C(i, j) <= 1.0);
            if (i != j) {
                std::vector<double> x(120), y(120);
                for (size_t t = 0; t < 120; ++t) {
                    x[t] = R(i, t);
                    y[t] = R(j, t);
                }
                CHECK(corr.C(i, j) ==
                      doctest::Approx(oracle::corr_pair(x, y)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("correlation windows re-normalize locally") {
    // Global normalization of the panel is irrelevant: a sub-window uses its
    // own moments, so scaling a series must not change the matrix.
    Matrix R = testutil::gaussian_returns(3, 80, 102);
    Matrix S = R;
    for (size_t t = 0; t < 80; ++t) S(1, t) *= 37.0;
    CorrMatrix a = correlation(testutil::panel_from_returns(R), 10, 40);
    CorrMatrix b = correlation(testutil::panel_from_returns(S), 10, 40);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j)
            CHECK(a.C(i, j) == doctest::Approx(b.C(i, j)).epsilon(1e-14));

    CHECK_THROWS_AS(correlation(testutil::panel_from_returns(R), 40, 10), input_error);
    CHECK_THROWS_AS(correlation(testutil::panel_from_returns(R), 0, 81), input_error);
}

TEST_CASE("correlation flags constant series in-window") {
    Matrix R = testutil::gaussian_returns(2, 50, 103);
    for (size_t t = 10; t < 20; ++t) R(0, t) = 0.42;
    ReturnPanel rp = testutil::panel_from_returns(R);
    CHECK_THROWS_AS(correlation(rp, 10, 20), numeric_error);
    CHECK_NOTHROW(correlation(rp, 0, 50));
}

TEST_CASE("mp bounds: closed form and argument checks") {
    MpLaw law = mp_bounds(20, 387);
    CHECK(law.Q == doctest::Approx(19.35));
    double root = 1.0 / std::sqrt(19.35);
    CHECK(law.lambda_min == doctest::Approx((1 - root) * (1 - root)).epsilon(1e-15));
    CHECK(law.lambda_max == doctest::Approx((1 + root) * (1 + root)).epsilon(1e-15));
    CHECK_THROWS_AS(mp_bounds(1, 100), input_error);
    CHECK_THROWS_AS(mp_bounds(20, 19), input_error);
}

TEST_CASE("mp density: support, edges, unit mass") {
    MpLaw law = mp_bounds(20, 387);
    std::vector<double> probes{-1.0, 0.0, law.lambda_min, law.lambda_max, 3.0};
    auto d = mp_density(law, probes);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 0.0);  // open support: zero at the edges
    CHECK(d[3] == 0.0);
    CHECK(d[4] == 0.0);

    double mass = oracle::simpson(
        [&](double lam) { return mp_density(law, {lam})[0]; }, law.lambda_min,
        law.lambda_max, 20000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));

    // also at a very different aspect ratio
    MpLaw law2 = mp_bounds(100, 150);
    double mass2 = oracle::simpson(
        [&](double lam) { return mp_density(law2, {lam})[0]; }, law2.lambda_min,
        law2.lambda_max, 20000);
    CHECK(mass2 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("spectrum invariants on a real correlation matrix") {
    Matrix R = testutil::gaussian_returns(12, 200, 104);
    CorrMatrix corr = correlation(testutil::panel_from_returns(R));
    Spectrum sp = eigendecompose(corr);
    REQUIRE(sp.eigenvalues.size() == 12);
    double tr = std::accumulate(sp.eigenvalues.begin(), sp.eigenvalues.end(), 0.0);
    CHECK(tr == doctest::Approx(12.0).epsilon(1e-10));
    for (size_t k = 0; k < 12; ++k) {
        CHECK(sp.ipr[k] >= 1.0 / 12.0 - 1e-12);
        CHECK(sp.ipr[k] <= 1.0 + 1e-12);
    }
    // IPR of a known vector: uniform vector u_i = 1/sqrt(N) -> IPR = 1/N
    Matrix uniform(4, 1, 0.5);
    CHECK(ipr_of(uniform)[0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("sliding windows: count, ordering, ci identity") {
    Matrix R = testutil::gaussian_returns(5, 130, 105);
    ReturnPanel rp = testutil::panel_from_returns(R);
    SlidingResult res = sliding_spectra(rp, 25, 25);
    CHECK(res.traces.size() == 5);  // floor(130/25)
    CHECK(res.skipped.empty());
    for (size_t w = 0; w < res.traces.size(); ++w) {
        const WindowTrace& tr = res.traces[w];
        CHECK(tr.window_index == static_cast<int>(w + 1));
        CHECK(tr.l1 >= tr.l2);
        CHECK(tr.l2 >= tr.l3);
        CHECK(tr.l3 >= tr.l_min);
        double sum_x = std::accumulate(tr.X.begin(), tr.X.end(), 0.0);
        CHECK(tr.ci == doctest::Approx(sum_x).epsilon(1e-14));
        for (size_t m = 0; m < 5; ++m) {
            CHECK(tr.S[m] >= 0.0);
            CHECK(tr.S[m] <= 1.0);
            CHECK(tr.X[m] <= tr.S[m] + 1e-15);  // squared component <= 1
        }
        // window dates: start of window w is return 25*w
        CHECK(tr.start_date == rp.dates[25 * w]);
        CHECK(tr.end_date == rp.dates[25 * w + 24]);
    }

    SlidingResult stepped = sliding_spectra(rp, 25, 5);
    CHECK(stepped.traces.size() == 22);  // (130-25)/5 + 1
}

TEST_CASE("sliding windows skip constant stretches but keep going") {
    Matrix R = testutil::gaussian_returns(3, 75, 106);
    for (size_t t = 25; t < 50; ++t) R(1, t) = 7.0;  // second window constant
    SlidingResult res = sliding_spectra(testutil::panel_from_returns(R), 25, 25);
    CHECK(res.traces.size() == 2);
    REQUIRE(res.skipped.size() == 1);
    CHECK(res.traces[0].window_index == 1);
    CHECK(res.traces[1].window_index == 3);
    CHECK(res.skipped[0].find("window 2") != std::string::npos);
}

TEST_CASE("mp_compare: histogram is a density, counts partition") {
    Matrix R = testutil::gaussian_returns(20, 387, 107);
    Spectrum sp = eigendecompose(correlation(testutil::panel_from_returns(R)));
    MpLaw law = mp_bounds(20, 387);
    MpComparison cmp = mp_compare(sp.eigenvalues, law, 10);
    REQUIRE(cmp.bin_edges.size() == 11);
    double width = cmp.bin_edges[1] - cmp.bin_edges[0];
    for (size_t b = 1; b + 1 < cmp.bin_edges.size(); ++b)
        CHECK(cmp.bin_edges[b + 1] - cmp.bin_edges[b] == doctest::Approx(width).epsilon(1e-9));
    double mass = 0.0;
    for (double d : cmp.empirical_density) mass += d * width;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cmp.below + cmp.inside + cmp.above == 20);
    CHECK(cmp.grid.size() == 400);
    CHECK(cmp.theoretical_density.size() == 400);

    // extreme right edge value lands in the last bin, not beyond it
    std::vector<double> fake{1.0, 2.0, 3.0};
    MpComparison c2 = mp_compare(fake, law, 4);
    double m2 = 0.0;
    for (double d : c2.empirical_density) m2 += d * (c2.bin_edges[1] - c2.bin_edges[0]);
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mp_compare: degenerate single-value input widens its range") {
    MpLaw law = mp_bounds(4, 40);
    std::vector<double> same{1.0, 1.0, 1.0, 1.0};
    MpComparison cmp = mp_compare(same, law, 5);
    CHECK(cmp.bin_edges.front() < cmp.bin_edges.back());
    double width = cmp.bin_edges[1] - cmp.bin_edges[0];
    double mass = 0.0;
    for (double d : cmp.empirical_density) mass += d * width;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

}  // TEST_SUITE
