#include "findex/graphnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>

#include "findex/errors.hpp"

namespace findex {

ThresholdGraph build_graph(const CorrMatrix& corr, double theta) {
    const size_t n = corr.labels.size();
    ThresholdGraph g;
    g.labels = corr.labels;
    g.theta = theta;
    g.adjacency.assign(n * n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (corr.C(i, j) >= theta) g.adjacency[i * n + j] = g.adjacency[j * n + i] = 1;
    return g;
}

namespace {

std::vector<size_t> degrees(const ThresholdGraph& g) {
    const size_t n = g.n();
    std::vector<size_t> deg(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (g.edge(i, j)) ++deg[i];
    return deg;
}

}  // namespace

double mean_degree(const ThresholdGraph& g) {
    if (g.n() == 0) return 0.0;
    auto deg = degrees(g);
    double sum = 0.0;
    for (size_t d : deg) sum += static_cast<double>(d);
    return sum / static_cast<double>(g.n());
}

double global_clustering(const ThresholdGraph& g) {
    const size_t n = g.n();
    size_t triangles = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            if (!g.edge(i, j)) continue;
            for (size_t k = j + 1; k < n; ++k)
                if (g.edge(i, k) && g.edge(j, k)) ++triangles;
        }
    auto deg = degrees(g);
    size_t triples = 0;
    for (size_t d : deg) triples += d * (d - (d > 0 ? 1 : 0)) / 2;
    if (triples == 0) return 0.0;
    return 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

double mean_local_clustering(const ThresholdGraph& g) {
    const size_t n = g.n();
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (size_t v = 0; v < n; ++v) {
        std::vector<size_t> nb;
        for (size_t j = 0; j < n; ++j)
            if (g.edge(v, j)) nb.push_back(j);
        if (nb.size() < 2) continue;  // convention: counts as 0
        size_t links = 0;
        for (size_t x = 0; x < nb.size(); ++x)
            for (size_t y = x + 1; y < nb.size(); ++y)
                if (g.edge(nb[x], nb[y])) ++links;
        sum += 2.0 * static_cast<double>(links) /
               (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }
    return sum / static_cast<double>(n);
}

ComponentInfo components(const ThresholdGraph& g) {
    const size_t n = g.n();
    ComponentInfo info;
    std::vector<uint8_t> seen(n, 0);
    for (size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<size_t> comp;
        std::queue<size_t> frontier;
        frontier.push(start);
        seen[start] = 1;
        while (!frontier.empty()) {
            size_t v = frontier.front();
            frontier.pop();
            comp.push_back(v);
            for (size_t j = 0; j < n; ++j)
                if (g.edge(v, j) && !seen[j]) {
                    seen[j] = 1;
                    frontier.push(j);
                }
        }
        std::sort(comp.begin(), comp.end());
        info.max_size = std::max(info.max_size, comp.size());
        info.components.push_back(std::move(comp));
    }
    info.count = info.components.size();
    return info;
}

namespace {

// Branch and bound over vertex bitmasks; u with the most candidates kept as
// pivot so only P \ N(u) spawns branches.
struct CliqueSearch {
    const std::vector<uint64_t>& nb;
    size_t best = 0;

    size_t pivot(uint64_t p) const {
        size_t u = 0, cover = 0;
        bool first = true;
        for (uint64_t m = p; m; m &= m - 1) {
            size_t v = static_cast<size_t>(std::countr_zero(m));
            size_t c = static_cast<size_t>(std::popcount(p & nb[v]));
            if (first || c > cover) {
                u = v;
                cover = c;
                first = false;
            }
        }
        return u;
    }

    void expand(uint64_t p, size_t cur) {
        if (p == 0) {
            best = std::max(best, cur);
            return;
        }
        if (cur + static_cast<size_t>(std::popcount(p)) <= best) return;
        uint64_t branches = p & ~nb[pivot(p)];
        for (uint64_t m = branches; m; m &= m - 1) {
            size_t v = static_cast<size_t>(std::countr_zero(m));
            expand(p & nb[v], cur + 1);
            p &= ~(uint64_t{1} << v);
        }
        best = std::max(best, cur);
    }

    // Decision variant: does `p` contain a clique of size >= need?
    bool at_least(uint64_t p, size_t need) {
        if (need == 0) return true;
        if (static_cast<size_t>(std::popcount(p)) < need) return false;
        uint64_t branches = p & ~nb[pivot(p)];
        for (uint64_t m = branches; m; m &= m - 1) {
            size_t v = static_cast<size_t>(std::countr_zero(m));
            if (at_least(p & nb[v], need - 1)) return true;
            p &= ~(uint64_t{1} << v);
        }
        return false;
    }
};

}  // namespace

CliqueResult max_clique(const ThresholdGraph& g) {
    const size_t n = g.n();
    if (n > 64) throw input_error("max_clique: exact search supports at most 64 vertices");
    CliqueResult res;
    if (n == 0) return res;

    std::vector<uint64_t> nb(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (g.edge(i, j)) nb[i] |= uint64_t{1} << j;

    CliqueSearch search{nb};
    uint64_t all = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
    search.expand(all, 0);
    res.size = search.best;

    // Lexicographically smallest witness: grow greedily, keeping only
    // candidates above the chosen vertex so the set stays sorted.
    uint64_t cand = all;
    size_t need = res.size;
    size_t from = 0;
    while (need > 0) {
        for (size_t v = from; v < n; ++v) {
            if (!(cand & (uint64_t{1} << v))) continue;
            uint64_t above = v + 1 >= 64 ? 0 : ~uint64_t{0} << (v + 1);
            uint64_t rest = cand & nb[v] & above;
            if (search.at_least(rest, need - 1)) {
                res.witness.push_back(v);
                cand = rest;
                from = v + 1;
                --need;
                break;
            }
        }
    }
    return res;
}

GraphMetrics graph_metrics(const ThresholdGraph& g) {
    GraphMetrics m;
    m.mean_degree = mean_degree(g);
    m.global_clustering = global_clustering(g);
    m.mean_local_clustering = mean_local_clustering(g);
    m.components = components(g);
    m.clique = max_clique(g);
    return m;
}

Matrix distance_matrix(const CorrMatrix& corr) {
    const size_t n = corr.labels.size();
    Matrix d(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double c = std::clamp(corr.C(i, j), -1.0, 1.0);
            d(i, j) = std::sqrt(2.0 * (1.0 - c));
        }
    return d;
}

namespace {

// Edge name pair in label space, smaller label first.
std::pair<const std::string*, const std::string*> label_pair(
    const std::vector<std::string>& labels, size_t x, size_t y) {
    const std::string *a = &labels[x], *b = &labels[y];
    if (*b < *a) std::swap(a, b);
    return {a, b};
}

bool pair_less(const std::pair<const std::string*, const std::string*>& p,
               const std::pair<const std::string*, const std::string*>& q) {
    if (*p.first != *q.first) return *p.first < *q.first;
    return *p.second < *q.second;
}

}  // namespace

Mst mst_prim(const Matrix& dist, const std::vector<std::string>& labels) {
    const size_t n = labels.size();
    if (dist.rows() != n || dist.cols() != n)
        throw input_error("mst_prim: distance matrix does not match labels");
    if (n < 2) throw input_error("mst_prim: need at least 2 vertices");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!std::isfinite(dist(i, j))) throw numeric_error("mst_prim: non-finite weight");

    std::vector<uint8_t> in_tree(n, 0);
    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<size_t> parent(n, 0);
    key[0] = 0.0;

    for (size_t round = 0; round < n; ++round) {
        size_t u = n;
        for (size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (u == n || key[v] < key[u]) {
                u = v;
            } else if (key[v] == key[u] && v != u) {
                // Equal keys: prefer the lexicographically smaller edge pair.
                if (round > 0 && pair_less(label_pair(labels, parent[v], v),
                                           label_pair(labels, parent[u], u)))
                    u = v;
            }
        }
        in_tree[u] = 1;
        for (size_t v = 0; v < n; ++v) {
            if (in_tree[v] || v == u) continue;
            double w = dist(u, v);
            if (w < key[v] ||
                (w == key[v] && pair_less(label_pair(labels, u, v),
                                          label_pair(labels, parent[v], v))))
                {
                    key[v] = w;
                    parent[v] = u;
                }
        }
    }

    Mst mst;
    mst.labels = labels;
    for (size_t v = 1; v < n; ++v) {
        MstEdge e;
        e.a = parent[v];
        e.b = v;
        if (labels[e.b] < labels[e.a]) std::swap(e.a, e.b);
        e.weight = dist(e.a, e.b);
        mst.total_weight += e.weight;
        mst.edges.push_back(e);
    }
    std::sort(mst.edges.begin(), mst.edges.end(), [&](const MstEdge& x, const MstEdge& y) {
        if (labels[x.a] != labels[y.a]) return labels[x.a] < labels[y.a];
        return labels[x.b] < labels[y.b];
    });
    return mst;
}

std::vector<SweepRow> theta_sweep(
    const std::vector<std::pair<std::string, const CorrMatrix*>>& periods,
    const std::vector<double>& thetas) {
    std::vector<SweepRow> rows;
    for (const auto& [name, corr] : periods)
        for (double theta : thetas) {
            SweepRow row;
            row.period = name;
            row.theta = theta;
            row.metrics = graph_metrics(build_graph(*corr, theta));
            rows.push_back(std::move(row));
        }
    return rows;
}

}  // namespace findex
