#pragma once

#include "hopnet/geometry.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/parallel.hpp"
#include "hopnet/percolation.hpp"
#include "hopnet/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hopnet {

/// Maximal number of vertex-disjoint LR crossings together with a vertex
/// cut of the same size separating S_l^- from S_l^+.
struct CrossingFlow {
    std::size_t count = 0;
    std::vector<std::uint32_t> cut;
};

/// Unit vertex capacities, Dinic max flow.
CrossingFlow max_crossing_flow(const WeightedGraph& graph, const StripeGeometry& geometry);
std::size_t max_vertex_disjoint_crossings(const WeightedGraph& graph,
                                          const StripeGeometry& geometry);

/// Exhaustive reference for graphs with at most 14 vertices; SizeError above.
std::size_t brute_force_crossings(const WeightedGraph& graph, const StripeGeometry& geometry);

/// N^2 / (2N + n_box) and N^2 / (3 n_box); both 0 when N = 0.
struct CrossingBound {
    double tight = 0.0;
    double weak = 0.0;
};
CrossingBound crossing_lower_bound(std::size_t n, std::size_t n_box);

struct DensityRow {
    double L = 0.0;
    double mean = 0.0;
    double se = 0.0;
    std::size_t replicas = 0;
    /// Fraction of replicas with at least one crossing.
    double crossing_fraction = 0.0;
};
struct DensityScan {
    std::vector<DensityRow> rows;
    std::vector<std::string> warnings;
};
/// Monte-Carlo mean of N_L / L^{d-1} for G[zeta, beta] under PPP[rho, law].
DensityScan crossing_density_scan(const PppModel& model, const std::vector<double>& L_list,
                                  std::size_t replicas, RngSeed seed,
                                  Execution ex = Execution::parallel);

}  // namespace hopnet
