#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "findex/errors.hpp"
#include "findex/graphnet.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace findex;

namespace {

ThresholdGraph graph_from_masks(const std::vector<uint64_t>& nb) {
    ThresholdGraph g;
    for (size_t i = 0; i < nb.size(); ++i) g.labels.push_back("v" + std::to_string(i));
    const size_t n = nb.size();
    g.adjacency.assign(n * n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (nb[i] >> j & 1) g.adjacency[i * n + j] = 1;
    return g;
}

CorrMatrix corr_stub(const Matrix& C) {
    CorrMatrix corr;
    for (size_t i = 0; i < C.rows(); ++i) corr.labels.push_back("v" + std::to_string(i));
    corr.C = C;
    return corr;
}

// Pedestrian local clustering, averaged with the degree<2 => 0 convention.
double local_clustering_ref(const std::vector<uint64_t>& nb) {
    const size_t n = nb.size();
    double sum = 0.0;
    for (size_t v = 0; v < n; ++v) {
        auto neigh = oracle::mask_to_vertices(nb[v]);
        if (neigh.size() < 2) continue;
        size_t links = 0;
        for (size_t x = 0; x < neigh.size(); ++x)
            for (size_t y = x + 1; y < neigh.size(); ++y)
                if (nb[neigh[x]] >> neigh[y] & 1) ++links;
        sum += static_cast<double>(links) /
               (static_cast<double>(neigh.size()) * static_cast<double>(neigh.size() - 1) / 2.0);
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

TEST_SUITE("graphnet") {

TEST_CASE("metrics agree with exhaustive oracles on random graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        size_t n = 2 + rng.below(14);  // 2..15
        double p = 0.15 + 0.7 * rng.uniform();
        auto nb = testutil::random_graph(n, p, rng);
        ThresholdGraph g = graph_from_masks(nb);
        GraphMetrics m = graph_metrics(g);

        size_t twice_edges = 0;
        for (uint64_t mask : nb) twice_edges += static_cast<size_t>(std::popcount(mask));
        CHECK(m.mean_degree ==
              doctest::Approx(static_cast<double>(twice_edges) / static_cast<double>(n))
                  .epsilon(1e-14));

        CHECK(m.global_clustering == doctest::Approx(oracle::clustering(nb)).epsilon(1e-12));
        CHECK(m.mean_local_clustering ==
              doctest::Approx(local_clustering_ref(nb)).epsilon(1e-12));

        auto ref_comps = oracle::components(nb);
        CHECK(m.components.components == ref_comps);
        CHECK(m.components.count == ref_comps.size());
        size_t total = 0, biggest = 0;
        for (const auto& c : ref_comps) {
            total += c.size();
            biggest = std::max(biggest, c.size());
        }
        CHECK(total == n);
        CHECK(m.components.max_size == biggest);

        auto ref_clique = oracle::max_clique(nb);
        CHECK(m.clique.size == ref_clique.size());
        CHECK(m.clique.witness == ref_clique);
        for (size_t x = 0; x < m.clique.witness.size(); ++x)
            for (size_t y = x + 1; y < m.clique.witness.size(); ++y)
                CHECK(g.edge(m.clique.witness[x], m.clique.witness[y]));
        CHECK(m.clique.size <= m.components.max_size);
    }
}

TEST_CASE("complete and empty thresholds hit closed forms") {
    Matrix R = testutil::gaussian_returns(8, 90, 301);
    CorrMatrix corr = correlation(testutil::panel_from_returns(R));

    GraphMetrics full = graph_metrics(build_graph(corr, -1.0));
    CHECK(full.mean_degree == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(full.global_clustering == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(full.mean_local_clustering == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(full.components.count == 1);
    CHECK(full.components.max_size == 8);
    CHECK(full.clique.size == 8);
    std::vector<size_t> everyone{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(full.clique.witness == everyone);

    GraphMetrics empty = graph_metrics(build_graph(corr, 1.5));
    CHECK(empty.mean_degree == 0.0);
    CHECK(empty.global_clustering == 0.0);
    CHECK(empty.components.count == 8);
    CHECK(empty.components.max_size == 1);
    CHECK(empty.clique.size == 1);
    CHECK(empty.clique.witness == std::vector<size_t>{0});
}

TEST_CASE("threshold is inclusive") {
    Matrix C(2, 2, 0.5);
    C(0, 0) = C(1, 1) = 1.0;
    CorrMatrix corr = corr_stub(C);
    CHECK(build_graph(corr, 0.5).edge(0, 1));
    CHECK_FALSE(build_graph(corr, std::nextafter(0.5, 1.0)).edge(0, 1));
    CHECK_FALSE(build_graph(corr, 0.5).edge(0, 0));  // no self loops at any theta
}

TEST_CASE("tightening theta only removes structure") {
    for (uint64_t seed : {401u, 402u, 403u}) {
        Matrix R = testutil::gaussian_returns(10, 60, seed);
        CorrMatrix corr = correlation(testutil::panel_from_returns(R));
        std::vector<double> thetas{-1.0, -0.5, 0.0, 0.15, 0.3, 0.5, 0.8, 1.01};
        std::vector<SweepRow> rows =
            theta_sweep({{"p", &corr}}, thetas);
        REQUIRE(rows.size() == thetas.size());
        for (size_t k = 1; k < rows.size(); ++k) {
            const GraphMetrics& a = rows[k - 1].metrics;
            const GraphMetrics& b = rows[k].metrics;
            CHECK(b.mean_degree <= a.mean_degree + 1e-14);
            CHECK(b.clique.size <= a.clique.size);
            CHECK(b.components.max_size <= a.components.max_size);
            CHECK(b.components.count >= a.components.count);
        }
    }
}

TEST_CASE("sweep rows come out period-major with recomputable metrics") {
    Matrix R1 = testutil::gaussian_returns(6, 50, 404);
    Matrix R2 = testutil::gaussian_returns(6, 50, 405);
    CorrMatrix c1 = correlation(testutil::panel_from_returns(R1));
    CorrMatrix c2 = correlation(testutil::panel_from_returns(R2));
    std::vector<double> thetas{0.0, 0.3, 0.6};
    auto rows = theta_sweep({{"before", &c1}, {"during", &c2}}, thetas);
    REQUIRE(rows.size() == 6);
    for (size_t k = 0; k < 6; ++k) {
        CHECK(rows[k].period == (k < 3 ? "before" : "during"));
        CHECK(rows[k].theta == thetas[k % 3]);
        GraphMetrics again =
            graph_metrics(build_graph(k < 3 ? c1 : c2, rows[k].theta));
        CHECK(rows[k].metrics.mean_degree == again.mean_degree);
        CHECK(rows[k].metrics.clique.size == again.clique.size);
    }
}

TEST_CASE("distance transform hits its anchors") {
    Matrix C(3, 3, 0.0);
    for (size_t i = 0; i < 3; ++i) C(i, i) = 1.0;
    C(0, 1) = C(1, 0) = 0.5;
    C(0, 2) = C(2, 0) = -1.0;
    Matrix d = distance_matrix(corr_stub(C));
    CHECK(d(0, 0) == 0.0);
    CHECK(d(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d(0, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d(1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(d(2, 1) == d(1, 2));
}

TEST_CASE("prim's tree matches kruskal's weight and spans") {
    Rng rng(406);
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = trial % 2 == 0 ? 12 : 20;
        Matrix dist(n, n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                dist(i, j) = dist(j, i) = 1e-3 + 2.0 * rng.uniform();
        std::vector<std::string> labels;
        for (size_t i = 0; i < n; ++i) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "m%02zu", i);
            labels.emplace_back(buf);
        }
        Mst mst = mst_prim(dist, labels);
        REQUIRE(mst.edges.size() == n - 1);
        CHECK(mst.total_weight ==
              doctest::Approx(oracle::kruskal_weight(dist)).epsilon(1e-13));

        // spanning + acyclic via union-find, endpoint order, stable sort order
        std::vector<size_t> parent(n);
        std::iota(parent.begin(), parent.end(), size_t{0});
        auto find = [&](size_t v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (size_t k = 0; k < mst.edges.size(); ++k) {
            const MstEdge& e = mst.edges[k];
            CHECK(labels[e.a] < labels[e.b]);
            CHECK(e.weight == dist(e.a, e.b));
            size_t ra = find(e.a), rb = find(e.b);
            CHECK(ra != rb);  // acyclic
            parent[ra] = rb;
            if (k > 0) {
                const MstEdge& prev = mst.edges[k - 1];
                bool ordered = labels[prev.a] < labels[e.a] ||
                               (labels[prev.a] == labels[e.a] && labels[prev.b] < labels[e.b]);
                CHECK(ordered);
            }
        }
        size_t root = find(0);
        for (size_t v = 1; v < n; ++v) CHECK(find(v) == root);  // spanning
    }
}

TEST_CASE("equal-weight ties resolve to the smallest label pairs") {
    // Complete graph, all weights equal: the tree must be the star around the
    // lexicographically smallest label, whatever the vertex order.
    Matrix dist(4, 4, 1.0);
    for (size_t i = 0; i < 4; ++i) dist(i, i) = 0.0;
    Mst star = mst_prim(dist, {"d", "b", "a", "c"});
    REQUIRE(star.edges.size() == 3);
    for (const MstEdge& e : star.edges) CHECK(star.labels[e.a] == "a");
    CHECK(star.total_weight == doctest::Approx(3.0).epsilon(1e-15));

    // Two tight pairs bridged by equal-weight candidates: the bridge must be
    // the smallest label pair among the four options.
    Matrix d2(4, 4, 2.0);
    for (size_t i = 0; i < 4; ++i) d2(i, i) = 0.0;
    d2(0, 1) = d2(1, 0) = 1.0;
    d2(2, 3) = d2(3, 2) = 1.0;
    Mst bridged = mst_prim(d2, {"a", "b", "c", "d"});
    REQUIRE(bridged.edges.size() == 3);
    CHECK(bridged.edges[0].a == 0);
    CHECK(bridged.edges[0].b == 1);
    CHECK(bridged.edges[1].a == 0);
    CHECK(bridged.edges[1].b == 2);  // bridge a-c, not a-d / b-c / b-d
    CHECK(bridged.edges[2].a == 2);
    CHECK(bridged.edges[2].b == 3);
    CHECK(bridged.total_weight == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("mst input validation") {
    Matrix dist(3, 3, 1.0);
    CHECK_THROWS_AS(mst_prim(dist, {"a", "b"}), input_error);
    CHECK_THROWS_AS(mst_prim(Matrix(1, 1), {"a"}), input_error);
    Matrix bad(2, 2, 0.0);
    bad(0, 1) = bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(mst_prim(bad, {"a", "b"}), numeric_error);
}

}  // TEST_SUITE
