#pragma once

#include "hopnet/energy_law.hpp"
#include "hopnet/geometry.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/parallel.hpp"
#include "hopnet/rng.hpp"
#include "hopnet/stats.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace hopnet {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }
    std::uint32_t find(std::uint32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }
    bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

/// Component label per vertex: the smallest vertex index in its component.
struct ClusterLabels {
    std::vector<std::uint32_t> label;
    /// Component sizes, in decreasing order.
    std::vector<std::size_t> sizes;

    std::size_t cluster_count() const { return sizes.size(); }
};

ClusterLabels clusters(const WeightedGraph& graph);

/// True iff a path x1, ..., xn with n >= 3 runs from S_l^- to S_l^+ with all
/// interior vertices in Lambda_l.
bool has_lr_crossing(const WeightedGraph& graph, const StripeGeometry& geometry);

/// Smallest level at which the edges with level <= it contain an LR
/// crossing; +inf if none does. edge_level is indexed like graph.edges.
double first_crossing_level(const WeightedGraph& graph, std::span<const double> edge_level,
                            const StripeGeometry& geometry);

/// G[zeta, beta] on a marked Poisson process.
struct PppModel {
    double rho = 1.0;
    EnergyLaw law = EnergyLaw::signed_power(1.0, 0.0);
    int dim = 2;
    double zeta = 1.0;
    double beta = 1.0;
};

/// Sampling window of a crossing experiment: the stripe of side L padded on
/// both sides by the edge range.
Box crossing_window(int dim, double L, double padding);

/// Frequency of LR crossings of Lambda_L over independent replicas, with
/// binomial standard error. padding defaults to zeta; a fixed padding keeps
/// the point samples identical across zeta.
MeanEstimate crossing_probability(const PppModel& model, double L, std::size_t replicas,
                                  RngSeed seed, Execution ex = Execution::parallel,
                                  double padding = std::numeric_limits<double>::quiet_NaN());

struct Probe {
    double value = 0.0;
    double freq = 0.0;
    std::size_t n = 0;
};

struct ThresholdEstimate {
    std::string parameter;
    double value = 0.0;
    double half_width = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::size_t replicas_per_probe = 0;
    double box_side = 0.0;
    RngSeed seed{};
    std::vector<Probe> probes;
    /// Per-replica first-crossing levels (+inf when no crossing by the upper end).
    std::vector<double> replica_thresholds;
};

struct BisectionOptions {
    double tol = 0.02;
    std::size_t replicas = 200;
    /// Initial upper end; NaN selects a default. Doubled while the crossing
    /// frequency there stays below 1/2.
    double hi = std::numeric_limits<double>::quiet_NaN();
    int max_expansions = 8;
    Execution execution = Execution::parallel;
};

/// Bisection on the crossing frequency of Lambda_L as a function of a level,
/// given per-replica first-crossing levels (common random numbers). Stops when
/// the bracket is <= tol; frequency exactly 1/2 continues on the upper half.
ThresholdEstimate bisect_thresholds(std::vector<double> thresholds, double lo, double hi,
                                    double tol);

/// Critical zeta of G[zeta, beta] under PPP[rho, law] in dimension dim.
ThresholdEstimate estimate_zeta_c(double beta, double rho, const EnergyLaw& law, int dim,
                                  double L, const BisectionOptions& opts, RngSeed seed);

enum class SignMode { positive, signed_marks };
SignMode sign_mode_from_string(std::string_view s);
std::string_view to_string(SignMode m);

/// Critical intensity of G[1, 1] under PPP[lambda, nu_{1,alpha}] (signed) or
/// PPP[lambda, nu+_{1,alpha}] (positive).
ThresholdEstimate estimate_lambda_c(double alpha, SignMode mode, int dim, double L,
                                    const BisectionOptions& opts, RngSeed seed);

/// Critical intensity of the Boolean model with radius r (edges |x - y| <= 2r).
ThresholdEstimate estimate_boolean_lambda_c(double r, int dim, double L,
                                            const BisectionOptions& opts, RngSeed seed);

struct PredictedThreshold {
    double zeta_c = 0.0;
    double c_c = 0.0;
    /// zeta_c <= min{C0, epsilon} beta.
    bool valid = false;
    /// -(lambda* C0^{a+1} / rho)^{1/(a+1+d)}.
    double chi = 0.0;
};
PredictedThreshold predicted_zeta_c(double lambda_star, double rho, double c0, double alpha,
                                    int dim, double beta,
                                    double epsilon = std::numeric_limits<double>::infinity());

/// Sup-norm diameters of the origin's cluster in G[zeta, beta] under the Palm
/// version of PPP[lambda, law] sampled in [-R, R]^d.
struct PalmDiameters {
    std::vector<double> diameter;
    /// Cluster reached within zeta of the window boundary.
    std::vector<std::uint8_t> truncated;
    double truncation_rate = 0.0;
    /// truncation_rate < 1%.
    bool valid = true;
};
PalmDiameters palm_cluster_diameter(double lambda, const EnergyLaw& law, double zeta, double beta,
                                    int dim, double window_radius, std::size_t replicas,
                                    RngSeed seed, Execution ex = Execution::parallel);

/// Sup-norm diameter of the component containing vertex v.
double cluster_diameter(const WeightedGraph& graph, std::uint32_t v);

struct SurvivalPoint {
    double n = 0.0;
    double survival = 0.0;
    std::size_t count = 0;
};
/// Empirical P(diam > n) at the given levels.
std::vector<SurvivalPoint> survival_curve(std::span<const double> diameters,
                                          std::span<const double> levels);

}  // namespace hopnet
