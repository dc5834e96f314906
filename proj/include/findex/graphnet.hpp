#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "findex/spectra.hpp"

namespace findex {

// Undirected simple graph over index labels: edge (i,j) iff i != j and
// C_ij >= theta.
struct ThresholdGraph {
    std::vector<std::string> labels;
    double theta = 0.0;
    std::vector<uint8_t> adjacency;  // n x n row-major, false diagonal

    size_t n() const { return labels.size(); }
    bool edge(size_t i, size_t j) const { return adjacency[i * n() + j] != 0; }
};

struct ComponentInfo {
    std::vector<std::vector<size_t>> components;  // each sorted; ordered by first vertex
    size_t count = 0;
    size_t max_size = 0;
};

struct CliqueResult {
    size_t size = 0;
    std::vector<size_t> witness;  // lexicographically smallest maximum clique
};

// Everything the per-theta sweep table reports.
struct GraphMetrics {
    double mean_degree = 0.0;
    double global_clustering = 0.0;     // transitivity: 3*triangles/triples
    double mean_local_clustering = 0.0; // per-vertex average, 0 for degree < 2
    ComponentInfo components;
    CliqueResult clique;
};

struct MstEdge {
    size_t a = 0, b = 0;  // a < b by label order
    double weight = 0.0;
};

struct Mst {
    std::vector<std::string> labels;
    std::vector<MstEdge> edges;  // n-1 edges, sorted by (a, b)
    double total_weight = 0.0;
};

struct SweepRow {
    std::string period;
    double theta = 0.0;
    GraphMetrics metrics;
};

ThresholdGraph build_graph(const CorrMatrix& corr, double theta);

double mean_degree(const ThresholdGraph& g);

// 3*triangles / connected triples; 0 when there are no triples.
double global_clustering(const ThresholdGraph& g);

// Watts-Strogatz style per-vertex average; vertices of degree < 2 count as 0.
double mean_local_clustering(const ThresholdGraph& g);

ComponentInfo components(const ThresholdGraph& g);

// Exact maximum clique (branch and bound with pivot); requires n <= 64.
// Witness is the lexicographically smallest maximum clique under vertex order.
CliqueResult max_clique(const ThresholdGraph& g);

GraphMetrics graph_metrics(const ThresholdGraph& g);

// d_ij = sqrt(2*(1 - C_ij)), zero diagonal.
Matrix distance_matrix(const CorrMatrix& corr);

// Prim on the complete metric graph. Equal-weight ties pick the edge with the
// lexicographically smaller (min label, max label) pair, so output is
// deterministic.
Mst mst_prim(const Matrix& dist, const std::vector<std::string>& labels);

std::vector<SweepRow> theta_sweep(
    const std::vector<std::pair<std::string, const CorrMatrix*>>& periods,
    const std::vector<double>& thetas);

}  // namespace findex
