#include "hopnet/mott_walk.hpp"

#include "hopnet/cell_grid.hpp"
#include "hopnet/errors.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace hopnet {

namespace {

struct JumpTable {
    std::vector<std::uint32_t> target;
    std::vector<double> cumulative;
    double rate() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

}  // namespace

Trajectory simulate_walk(const MarkedConfiguration& conf, double beta, std::size_t start_index,
                         double t_max, RngSeed seed, const WalkOptions& opts) {
    if (conf.empty()) throw ParameterError("walk needs a nonempty configuration");
    if (start_index >= conf.size()) throw ParameterError("start index out of range");
    if (!(beta > 0.0) || !(t_max >= 0.0)) throw ParameterError("beta must be positive and t_max nonnegative");
    if (!(opts.zeta_cut > 0.0)) throw ParameterError("zeta_cut must be positive");
    const std::size_t n = conf.size();
    const int dim = conf.dim;
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = conf.points[i].x;
    const double emax = (1.0 + 1e-12) * opts.zeta_cut / (2.0 * beta);
    std::vector<std::uint32_t> active;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(conf.points[i].e) <= emax) active.push_back(static_cast<std::uint32_t>(i));
    const CellGrid grid(pts, active, dim, (1.0 + 1e-12) * opts.zeta_cut);
    const double c_min = std::exp(-opts.zeta_cut);
    std::vector<std::optional<JumpTable>> table(n);
    auto jumps_from = [&](std::uint32_t x) -> const JumpTable& {
        if (table[x]) return *table[x];
        JumpTable t;
        if (std::fabs(conf.points[x].e) <= emax) {
            grid.for_each_near(pts[x], [&](std::uint32_t y) {
                if (y == x) return;
                const double r = distance(pts[x], pts[y], dim);
                if (r == 0.0) return;
                const double c = std::exp(-r - beta * energy_term(conf.points[x].e, conf.points[y].e));
                if (c >= c_min && c > 0.0) {
                    t.target.push_back(y);
                    t.cumulative.push_back((t.cumulative.empty() ? 0.0 : t.cumulative.back()) + c);
                }
            });
        }
        table[x] = std::move(t);
        return *table[x];
    };
    auto near_boundary = [&](std::uint32_t x) {
        for (int k = 0; k < dim; ++k)
            if (pts[x][k] - conf.window.lo[k] < opts.zeta_cut || conf.window.hi[k] - pts[x][k] < opts.zeta_cut)
                return true;
        return false;
    };

    Trajectory tr;
    tr.t_max = t_max;
    auto x = static_cast<std::uint32_t>(start_index);
    tr.time.push_back(0.0);
    tr.vertex.push_back(x);
    if (jumps_from(x).rate() == 0.0) tr.absorbed = true;
    Philox rng(seed);
    double t = 0.0, last_jump = 0.0;
    while (true) {
        const JumpTable& jt = jumps_from(x);
        const double rate = jt.rate();
        if (rate == 0.0) break;
        t += rng.exponential(rate);
        if (t > t_max) break;
        if (tr.jumps >= opts.max_jumps) throw SolverError("walk exceeded the jump cap", t, tr.jumps);
        const double u = rng.uniform() * rate;
        auto it = std::upper_bound(jt.cumulative.begin(), jt.cumulative.end(), u);
        if (it == jt.cumulative.end()) --it;
        if (opts.track_boundary && near_boundary(x)) ++tr.boundary_jumps;
        x = jt.target[static_cast<std::size_t>(it - jt.cumulative.begin())];
        ++tr.jumps;
        last_jump = t;
        if (opts.record_path) {
            tr.time.push_back(t);
            tr.vertex.push_back(x);
        }
    }
    if (!opts.record_path && tr.jumps > 0) {
        tr.time.push_back(last_jump);
        tr.vertex.push_back(x);
    }
    for (int k = 0; k < dim; ++k) tr.displacement[k] = pts[x][k] - pts[start_index][k];
    return tr;
}

std::vector<double> occupation_times(const Trajectory& traj, std::size_t vertex_count) {
    std::vector<double> occ(vertex_count, 0.0);
    for (std::size_t k = 0; k < traj.vertex.size(); ++k) {
        const double end = k + 1 < traj.time.size() ? traj.time[k + 1] : traj.t_max;
        occ[traj.vertex[k]] += end - traj.time[k];
    }
    return occ;
}

DiffusionEstimate estimate_diffusion(std::span<const Trajectory> trajectories, int dim) {
    validate_dimension(dim);
    if (trajectories.size() < 30)
        throw StatisticsError("diffusion estimate needs at least 30 trajectories");
    const double t = trajectories.front().t_max;
    if (!(t > 0.0)) throw StatisticsError("diffusion estimate needs t_max > 0");
    for (const auto& tr : trajectories)
        if (tr.t_max != t) throw StatisticsError("trajectories must share t_max");
    DiffusionEstimate out;
    out.trajectories = trajectories.size();
    out.t = t;
    for (int k = 0; k < dim; ++k) {
        std::vector<double> sq;
        sq.reserve(trajectories.size());
        for (const auto& tr : trajectories) sq.push_back(tr.displacement[k] * tr.displacement[k] / (2.0 * t));
        const auto m = mean_stderr(sq);
        out.D.push_back(m.mean);
        out.se.push_back(m.se);
    }
    return out;
}

WalkSummary run_walk_experiment(const WalkExperiment& plan) {
    const Box window = Box::centered(plan.dim, plan.window_radius);
    WalkSummary out;
    out.trajectories.resize(plan.trajectories);
    for_each_index(plan.trajectories, plan.execution, [&](std::size_t r) {
        const std::uint64_t base = 3 * r;
        const auto sample = sample_marked_ppp(plan.rho, plan.law, window, plan.seed.with_stream(base));
        const auto conf = palm_augment(sample, plan.law, plan.seed.with_stream(base + 1));
        out.trajectories[r] = simulate_walk(conf, plan.beta, conf.size() - 1, plan.t_max,
                                            plan.seed.with_stream(base + 2), plan.walk);
    });
    std::size_t jumps = 0, boundary = 0, absorbed = 0;
    for (const auto& tr : out.trajectories) {
        jumps += tr.jumps;
        boundary += tr.boundary_jumps;
        absorbed += tr.absorbed ? 1 : 0;
    }
    out.suppression_fraction = jumps ? static_cast<double>(boundary) / static_cast<double>(jumps) : 0.0;
    out.absorbed_fraction = plan.trajectories ? static_cast<double>(absorbed) / plan.trajectories : 0.0;
    out.mean_jumps = plan.trajectories ? static_cast<double>(jumps) / plan.trajectories : 0.0;
    out.diffusion = estimate_diffusion(out.trajectories, plan.dim);
    return out;
}

}  // namespace hopnet
