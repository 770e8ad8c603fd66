#pragma once

#include "hopnet/energy_law.hpp"
#include "hopnet/geometry.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/parallel.hpp"
#include "hopnet/point_process.hpp"
#include "hopnet/rng.hpp"
#include "hopnet/stats.hpp"

#include <limits>
#include <span>
#include <vector>

namespace hopnet {

struct PotentialSolution {
    /// 1 on S_l^-, 0 on S_l^+, harmonic on box nodes connected to the
    /// boundary, 0 on the remaining box nodes.
    std::vector<double> potential;
    std::vector<Region> region;
    /// max over solved nodes of |Kirchhoff residual| / incident conductance.
    double residual = 0.0;
    std::size_t iterations = 0;
};

struct SolverOptions {
    double tol = 1e-10;
    /// 0 selects 20 n + 1000.
    std::size_t max_iterations = 0;
};

/// Jacobi-preconditioned conjugate gradients on the box nodes after
/// eliminating the boundary. Throws PreconditionError without box nodes and
/// SolverError when the iteration cap is hit.
PotentialSolution solve_potential(const WeightedGraph& network, const StripeGeometry& geometry,
                                  const SolverOptions& opts = {});

/// Current leaving S_l^- into the box.
double conductivity_boundary_flux(const WeightedGraph& network, const PotentialSolution& sol);

/// Sum over edges of c (V(x) - V(y))^2.
double dissipated_energy(const WeightedGraph& network, const PotentialSolution& sol);

struct HyperplaneFlux {
    double value = 0.0;
    std::size_t spanning_edges = 0;
    bool disconnected() const { return spanning_edges == 0; }
};
/// Current through {x1 = gamma} from the side x1 <= gamma to x1 > gamma.
HyperplaneFlux hyperplane_flux(const WeightedGraph& network, const PotentialSolution& sol,
                               double gamma);

/// D(u) = sum over edges of c (u(y) - u(x))^2. Throws DomainError unless u is
/// 1 on S_l^-, 0 on S_l^+ and within [0, 1].
double dirichlet_energy(const WeightedGraph& network, const StripeGeometry& geometry,
                        std::span<const double> u);

/// sigma_l of a network; 0 when it has no box node.
double network_conductivity(const WeightedGraph& network, const StripeGeometry& geometry,
                            const SolverOptions& opts = {});

struct ConductivityResult {
    double sigma = 0.0;
    /// l^{2-d} sigma_l.
    double rescaled = 0.0;
    double c_min = 0.0;
    double zeta_cut = std::numeric_limits<double>::infinity();
    /// Conductance dropped by the cutoff; the untruncated sigma_l lies in
    /// [sigma, sigma + dropped_weight].
    double dropped_weight = 0.0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t iterations = 0;
};

struct ConductivityOptions {
    /// NaN selects default_cutoff.
    double c_min = std::numeric_limits<double>::quiet_NaN();
    SolverOptions solver{};
};

/// l^{2-d} sigma_l of the Miller-Abrahams network on the stripe.
ConductivityResult rescaled_conductivity(const MarkedConfiguration& conf, double beta,
                                         const StripeGeometry& geometry,
                                         const ConductivityOptions& opts = {});

struct ThinnedBound {
    /// e^{-zeta} zeta^{2-d} L^{2-d} sigma_L(G[1,1](omega_{zeta,beta}), 1).
    double bound = 0.0;
    /// e^{-zeta} (zeta L)^{2-d} N_L^2 / (3 |V n Lambda_L|).
    double crossing_bound = 0.0;
    double L = 0.0;
    double sigma_L = 0.0;
    std::size_t crossings = 0;
    std::size_t box_vertices = 0;
};
ThinnedBound thinned_lower_bound(const MarkedConfiguration& conf, double zeta, double beta,
                                 const StripeGeometry& geometry, const SolverOptions& opts = {});

struct MottScanPlan {
    std::vector<double> betas;
    double rho = 1.0;
    EnergyLaw law = EnergyLaw::signed_power(1.0, 0.0);
    int dim = 2;
    /// Critical intensity used for the box size rule and the predicted slope.
    double lambda_star = 1.0;
    /// l(beta) = ell_scale * L_factor * predicted zeta_c(beta).
    double L_factor = 8.0;
    double ell_scale = 1.0;
    /// Conductances below exp(-cut_factor * predicted zeta_c) are dropped.
    double cut_factor = 1.5;
    std::size_t replicas = 50;
    RngSeed seed{};
    SolverOptions solver{1e-8, 0};
    Execution execution = Execution::parallel;
};

struct MottRow {
    double beta = 0.0;
    double beta_pow = 0.0;
    double mean_ln_sigma = 0.0;
    double se = 0.0;
    double censored_fraction = 0.0;
    double ell = 0.0;
    std::size_t replicas = 0;
    double zeta_cut = 0.0;
    /// Mean log of the thinned lower bound at zeta = zeta_cut over
    /// uncensored replicas; -inf if any bound vanishes.
    double mean_ln_lower_bound = 0.0;
};

struct MottScanResult {
    std::vector<MottRow> rows;
    LinearFit fit;
    /// -(lambda* C0^{a+1} / rho)^{1/(a+1+d)}.
    double predicted_slope = 0.0;
};

/// Mean ln(l^{2-d} sigma_l) per beta and its least-squares slope against
/// beta^{(a+1)/(a+1+d)}.
MottScanResult mott_scan(const MottScanPlan& plan);

}  // namespace hopnet
