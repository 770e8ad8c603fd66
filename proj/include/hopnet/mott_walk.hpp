#pragma once

#include "hopnet/energy_law.hpp"
#include "hopnet/geometry.hpp"
#include "hopnet/parallel.hpp"
#include "hopnet/point_process.hpp"
#include "hopnet/rng.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace hopnet {

struct WalkOptions {
    /// Jumps with conductance below exp(-zeta_cut) are ignored.
    double zeta_cut = 8.0;
    /// Jumps from nodes within zeta_cut of the window boundary are counted
    /// as possibly suppressed.
    bool track_boundary = true;
    /// Keep every jump; otherwise only the start and the final vertex.
    bool record_path = true;
    /// Safety cap on the number of jumps.
    std::size_t max_jumps = 50'000'000;
};

struct Trajectory {
    /// Entry k: the walker enters vertex[k] at time[k]; time[0] = 0.
    std::vector<double> time;
    std::vector<std::uint32_t> vertex;
    double t_max = 0.0;
    /// Start vertex has no admissible jump.
    bool absorbed = false;
    std::size_t jumps = 0;
    std::size_t boundary_jumps = 0;
    Point displacement{};
};

/// Continuous-time walk with jump rates c_{x,y}: exponential holding time of
/// rate c_x = sum_y c_{x,y}, next site with probability c_{x,y} / c_x.
Trajectory simulate_walk(const MarkedConfiguration& conf, double beta, std::size_t start_index,
                         double t_max, RngSeed seed, const WalkOptions& opts = {});

/// Time spent at each vertex up to t_max.
std::vector<double> occupation_times(const Trajectory& traj, std::size_t vertex_count);

struct DiffusionEstimate {
    /// Mean squared displacement per axis divided by 2 t.
    std::vector<double> D;
    std::vector<double> se;
    std::size_t trajectories = 0;
    double t = 0.0;
};

/// Needs at least 30 trajectories with a common t_max; StatisticsError otherwise.
DiffusionEstimate estimate_diffusion(std::span<const Trajectory> trajectories, int dim);

/// Annealed walk experiment: each trajectory starts at the origin of its own
/// Palm sample of PPP[rho, law] in [-R, R]^d.
struct WalkExperiment {
    double rho = 1.0;
    EnergyLaw law = EnergyLaw::signed_power(1.0, 0.0);
    int dim = 2;
    double beta = 1.0;
    double window_radius = 40.0;
    double t_max = 100.0;
    std::size_t trajectories = 100;
    WalkOptions walk{};
    RngSeed seed{};
    Execution execution = Execution::parallel;
};

struct WalkSummary {
    DiffusionEstimate diffusion;
    double suppression_fraction = 0.0;
    double absorbed_fraction = 0.0;
    double mean_jumps = 0.0;
    std::vector<Trajectory> trajectories;
};

WalkSummary run_walk_experiment(const WalkExperiment& plan);

}  // namespace hopnet
