#pragma once

#include "hopnet/cell_grid.hpp"
#include "hopnet/geometry.hpp"
#include "hopnet/point_process.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hopnet {

struct Edge {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double weight = 0.0;
};

/// Construction parameters carried along with a graph; unset values are NaN.
struct GraphMeta {
    static constexpr double unset = std::numeric_limits<double>::quiet_NaN();
    std::string kind;
    double zeta = unset;
    double beta = unset;
    double radius = unset;
    double ell = unset;
    double c_min = unset;
};

/// Vertices with positions and energies plus an undirected weighted edge list
/// with i < j, sorted, without duplicates.
struct WeightedGraph {
    int dim = 2;
    std::vector<Point> positions;
    std::vector<double> energies;
    std::vector<Edge> edges;
    /// Index of each vertex in the configuration it was built from.
    std::vector<std::size_t> source_index;
    GraphMeta meta;

    std::size_t vertex_count() const { return positions.size(); }
    /// Sorts edges by (i, j).
    void canonicalize();
};

/// Compressed adjacency lists of an undirected graph.
struct Adjacency {
    std::vector<std::size_t> offset;
    std::vector<std::uint32_t> target;
    std::vector<double> weight;

    std::size_t degree(std::size_t v) const { return offset[v + 1] - offset[v]; }
};

Adjacency make_adjacency(const WeightedGraph& g);

/// |Ex| + |Ey| + |Ex - Ey|.
double energy_term(double ex, double ey);

/// exp(-|x - y| / distance_scale - beta (|Ex| + |Ey| + |Ex - Ey|)).
/// Throws DomainError when x == y.
double conductance(const Point& x, const Point& y, double ex, double ey, double beta, int dim,
                   double distance_scale = 1.0);

/// Graph with an edge {x, y} whenever |x - y| + beta * energy_term <= zeta.
WeightedGraph build_threshold_graph(const MarkedConfiguration& conf, double zeta, double beta,
                                    PairSearch search = PairSearch::cell_list);

/// Boolean model: unit-weight edges between points with 0 < |x - y| <= 2r.
WeightedGraph build_boolean_graph(std::span<const Point> points, int dim, double r,
                                  PairSearch search = PairSearch::cell_list);

/// Finite-volume Miller-Abrahams network on the stripe: nodes are the points
/// of S_l, edges join pairs meeting Lambda_l with conductance >= c_min
/// (c_min = 0 keeps every such pair). Throws PreconditionError when S_l^-,
/// Lambda_l or S_l^+ holds no point.
WeightedGraph build_ma_network(const MarkedConfiguration& conf, double beta,
                               const StripeGeometry& geometry, double c_min,
                               PairSearch search = PairSearch::cell_list);

/// Resistor network of a general graph on the stripe: vertices in S_l and the
/// edges with both ends in S_l and at least one in Lambda_l. With
/// unit_weights every retained edge gets conductance one.
WeightedGraph stripe_network(const WeightedGraph& graph, const StripeGeometry& geometry,
                             bool unit_weights);

/// Cutoff for build_ma_network such that the total dropped conductance stays
/// below rel * (smallest full degree weight of a box node).
struct CutoffChoice {
    double c_min = 0.0;
    double zeta_cut = std::numeric_limits<double>::infinity();
    double dropped_weight = 0.0;
    double min_degree = 0.0;
};
CutoffChoice default_cutoff(const MarkedConfiguration& conf, double beta,
                            const StripeGeometry& geometry, double rel = 1e-6);

/// True iff G[zeta, beta] on the points with |E| <= zeta / beta, mapped by
/// x -> x / zeta, has the same vertices and edges as G[1, 1] on the rescaled
/// configuration.
bool rescale_isomorphism_check(const MarkedConfiguration& conf, double zeta, double beta);
/// Same comparison against an explicitly supplied rescaled configuration.
bool rescale_isomorphism_check(const MarkedConfiguration& conf, double zeta, double beta,
                               const MarkedConfiguration& rescaled);

/// Edge pairs (i, j) of a graph, sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_pairs(const WeightedGraph& g);

}  // namespace hopnet
