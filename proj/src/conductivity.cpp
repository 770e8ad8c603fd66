#include "hopnet/conductivity.hpp"

#include "hopnet/crossings.hpp"
#include "hopnet/errors.hpp"
#include "hopnet/percolation.hpp"

#include <algorithm>
#include <cmath>

namespace hopnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double boundary_value(Region r) { return r == Region::left ? 1.0 : 0.0; }

}  // namespace

PotentialSolution solve_potential(const WeightedGraph& network, const StripeGeometry& geometry,
                                  const SolverOptions& opts) {
    if (!(opts.tol > 0.0)) throw ParameterError("solver tolerance must be positive");
    const std::size_t n = network.vertex_count();
    PotentialSolution sol;
    sol.region.resize(n);
    sol.potential.assign(n, 0.0);
    std::size_t n_box = 0;
    for (std::size_t v = 0; v < n; ++v) {
        sol.region[v] = geometry.classify(network.positions[v]);
        if (sol.region[v] == Region::box) ++n_box;
        else sol.potential[v] = boundary_value(sol.region[v]);
    }
    if (n_box == 0) throw PreconditionError("network has no node in the box Lambda_l");

    UnionFind uf(n);
    for (const auto& e : network.edges) uf.unite(e.i, e.j);
    std::vector<std::uint8_t> grounded(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (sol.region[v] == Region::left || sol.region[v] == Region::right)
            grounded[uf.find(static_cast<std::uint32_t>(v))] = 1;

    std::vector<std::int64_t> idx(n, -1);
    std::vector<std::uint32_t> nodes;
    for (std::size_t v = 0; v < n; ++v)
        if (sol.region[v] == Region::box && grounded[uf.find(static_cast<std::uint32_t>(v))]) {
            idx[v] = static_cast<std::int64_t>(nodes.size());
            nodes.push_back(static_cast<std::uint32_t>(v));
        }
    const std::size_t m = nodes.size();
    if (m == 0) return sol;

    // reduced system A x = b with A = D - C on the unknown nodes
    const Adjacency adj = make_adjacency(network);
    std::vector<double> diag(m, 0.0), b(m, 0.0);
    std::vector<std::size_t> row(m + 1, 0);
    std::vector<std::uint32_t> col;
    std::vector<double> val;
    for (std::size_t a = 0; a < m; ++a) {
        const std::uint32_t v = nodes[a];
        for (std::size_t q = adj.offset[v]; q < adj.offset[v + 1]; ++q) {
            const std::uint32_t w = adj.target[q];
            const double c = adj.weight[q];
            diag[a] += c;
            if (idx[w] >= 0) {
                col.push_back(static_cast<std::uint32_t>(idx[w]));
                val.push_back(c);
            } else if (sol.region[w] == Region::left) {
                b[a] += c;
            }
        }
        row[a + 1] = col.size();
    }
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t a = 0; a < m; ++a) {
            double s = diag[a] * x[a];
            for (std::size_t q = row[a]; q < row[a + 1]; ++q) s -= val[q] * x[col[q]];
            y[a] = s;
        }
    };
    auto scaled_residual = [&](const std::vector<double>& r) {
        double worst = 0.0;
        for (std::size_t a = 0; a < m; ++a) worst = std::max(worst, std::fabs(r[a]) / diag[a]);
        return worst;
    };
    auto true_residual = [&](const std::vector<double>& x, std::vector<double>& r) {
        apply(x, r);
        for (std::size_t a = 0; a < m; ++a) r[a] = b[a] - r[a];
    };

    std::vector<double> x(m), r(m), z(m), p(m), Ap(m);
    // start from the normalised boundary pull, already close for most nodes
    for (std::size_t a = 0; a < m; ++a) x[a] = b[a] / diag[a];
    true_residual(x, r);
    const std::size_t cap = opts.max_iterations ? opts.max_iterations : 20 * m + 1000;
    double rz = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        z[a] = r[a] / diag[a];
        p[a] = z[a];
        rz += r[a] * z[a];
    }
    std::size_t it = 0;
    double res = scaled_residual(r);
    while (res > opts.tol) {
        if (it >= cap)
            throw SolverError("conjugate gradients did not converge", res, it);
        apply(p, Ap);
        double pAp = 0.0;
        for (std::size_t a = 0; a < m; ++a) pAp += p[a] * Ap[a];
        if (!(pAp > 0.0)) {
            true_residual(x, r);
            res = scaled_residual(r);
            if (res <= opts.tol) break;
            throw SolverError("conjugate gradients broke down", res, it);
        }
        const double alpha = rz / pAp;
        for (std::size_t a = 0; a < m; ++a) {
            x[a] += alpha * p[a];
            r[a] -= alpha * Ap[a];
        }
        ++it;
        res = scaled_residual(r);
        if (res <= opts.tol || it % 64 == 0) {
            true_residual(x, r);
            res = scaled_residual(r);
            if (res <= opts.tol) break;
        }
        double rz_new = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            z[a] = r[a] / diag[a];
            rz_new += r[a] * z[a];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t a = 0; a < m; ++a) p[a] = z[a] + beta * p[a];
    }
    for (std::size_t a = 0; a < m; ++a) sol.potential[nodes[a]] = std::clamp(x[a], 0.0, 1.0);
    sol.residual = res;
    sol.iterations = it;
    return sol;
}

double conductivity_boundary_flux(const WeightedGraph& network, const PotentialSolution& sol) {
    double s = 0.0;
    for (const auto& e : network.edges) {
        const Region ri = sol.region[e.i], rj = sol.region[e.j];
        if (ri == Region::left && rj == Region::box)
            s += e.weight * (sol.potential[e.i] - sol.potential[e.j]);
        else if (rj == Region::left && ri == Region::box)
            s += e.weight * (sol.potential[e.j] - sol.potential[e.i]);
    }
    return s;
}

double dissipated_energy(const WeightedGraph& network, const PotentialSolution& sol) {
    double s = 0.0;
    for (const auto& e : network.edges) {
        const double dv = sol.potential[e.i] - sol.potential[e.j];
        s += e.weight * dv * dv;
    }
    return s;
}

HyperplaneFlux hyperplane_flux(const WeightedGraph& network, const PotentialSolution& sol,
                               double gamma) {
    HyperplaneFlux out;
    for (const auto& e : network.edges) {
        const bool li = network.positions[e.i][0] <= gamma;
        const bool lj = network.positions[e.j][0] <= gamma;
        if (li == lj) continue;
        const std::uint32_t u = li ? e.i : e.j, w = li ? e.j : e.i;
        out.value += e.weight * (sol.potential[u] - sol.potential[w]);
        ++out.spanning_edges;
    }
    return out;
}

double dirichlet_energy(const WeightedGraph& network, const StripeGeometry& geometry,
                        std::span<const double> u) {
    if (u.size() != network.vertex_count())
        throw DomainError("test function must have one value per node");
    for (std::size_t v = 0; v < u.size(); ++v) {
        const Region r = geometry.classify(network.positions[v]);
        if (r == Region::left && u[v] != 1.0) throw DomainError("test function must equal 1 on S_l^-");
        if (r == Region::right && u[v] != 0.0) throw DomainError("test function must equal 0 on S_l^+");
        if (!(u[v] >= 0.0 && u[v] <= 1.0)) throw DomainError("test function must take values in [0, 1]");
    }
    double s = 0.0;
    for (const auto& e : network.edges) {
        const double d = u[e.j] - u[e.i];
        s += e.weight * d * d;
    }
    return s;
}

double network_conductivity(const WeightedGraph& network, const StripeGeometry& geometry,
                            const SolverOptions& opts) {
    bool any_box = false;
    for (const auto& x : network.positions)
        if (geometry.classify(x) == Region::box) any_box = true;
    if (!any_box) return 0.0;
    const auto sol = solve_potential(network, geometry, opts);
    return conductivity_boundary_flux(network, sol);
}

ConductivityResult rescaled_conductivity(const MarkedConfiguration& conf, double beta,
                                         const StripeGeometry& geometry,
                                         const ConductivityOptions& opts) {
    ConductivityResult out;
    if (std::isnan(opts.c_min)) {
        const CutoffChoice cut = default_cutoff(conf, beta, geometry);
        out.c_min = cut.c_min;
        out.zeta_cut = cut.zeta_cut;
        out.dropped_weight = cut.dropped_weight;
    } else {
        out.c_min = opts.c_min;
        out.zeta_cut = opts.c_min > 0.0 ? -std::log(opts.c_min) : kInf;
        out.dropped_weight = kInf;
    }
    const WeightedGraph network = build_ma_network(conf, beta, geometry, out.c_min);
    if (out.c_min == 0.0) out.dropped_weight = 0.0;
    const auto sol = solve_potential(network, geometry, opts.solver);
    out.sigma = conductivity_boundary_flux(network, sol);
    out.rescaled = std::pow(geometry.ell, 2.0 - geometry.dim) * out.sigma;
    out.nodes = network.vertex_count();
    out.edges = network.edges.size();
    out.iterations = sol.iterations;
    return out;
}

ThinnedBound thinned_lower_bound(const MarkedConfiguration& conf, double zeta, double beta,
                                 const StripeGeometry& geometry, const SolverOptions& opts) {
    ThinnedBound out;
    const int d = geometry.dim;
    out.L = geometry.ell / zeta;
    const StripeGeometry small{d, out.L};
    const MarkedConfiguration rescaled = mott_rescale(conf, zeta, beta);
    const WeightedGraph g = build_threshold_graph(rescaled, 1.0, 1.0);
    for (const auto& x : g.positions)
        if (small.classify(x) == Region::box) ++out.box_vertices;
    const WeightedGraph unit = stripe_network(g, small, true);
    out.sigma_L = network_conductivity(unit, small, opts);
    const double pre = std::exp(-zeta) * std::pow(zeta, 2.0 - d) * std::pow(out.L, 2.0 - d);
    out.bound = pre * out.sigma_L;
    out.crossings = max_vertex_disjoint_crossings(g, small);
    if (out.crossings > 0) {
        const double N = static_cast<double>(out.crossings);
        out.crossing_bound = pre * N * N / (3.0 * static_cast<double>(out.box_vertices));
    }
    return out;
}

MottScanResult mott_scan(const MottScanPlan& plan) {
    if (plan.betas.empty()) throw ParameterError("beta list is empty");
    for (std::size_t k = 0; k < plan.betas.size(); ++k) {
        if (!(plan.betas[k] > 0.0)) throw ParameterError("beta values must be positive");
        if (k > 0 && !(plan.betas[k] > plan.betas[k - 1])) throw ParameterError("beta list must be increasing");
    }
    if (plan.replicas < 1) throw ParameterError("replicas must be at least 1");
    const double a1 = plan.law.alpha() + 1.0;
    const double expo = a1 / (a1 + plan.dim);
    const double c0 = std::isfinite(plan.law.c0()) ? plan.law.c0() : plan.law.support_radius();
    MottScanResult result;
    result.predicted_slope = predicted_zeta_c(plan.lambda_star, plan.rho, c0, plan.law.alpha(), plan.dim, 1.0).chi;
    std::vector<double> xs, ys;
    for (std::size_t bi = 0; bi < plan.betas.size(); ++bi) {
        const double beta = plan.betas[bi];
        const double zc = predicted_zeta_c(plan.lambda_star, plan.rho, c0, plan.law.alpha(), plan.dim, beta).zeta_c;
        MottRow row;
        row.beta = beta;
        row.beta_pow = std::pow(beta, expo);
        row.ell = plan.ell_scale * plan.L_factor * zc;
        row.zeta_cut = plan.cut_factor * zc;
        row.replicas = plan.replicas;
        const StripeGeometry geometry{plan.dim, row.ell};
        const Box window = geometry.window(row.zeta_cut);
        const double c_min = std::exp(-row.zeta_cut);
        std::vector<double> ln_sigma(plan.replicas, kInf), ln_bound(plan.replicas, -kInf);
        for_each_index(plan.replicas, plan.execution, [&](std::size_t r) {
            const auto conf = sample_marked_ppp(plan.rho, plan.law, window,
                                                plan.seed.with_stream(bi * plan.replicas + r));
            try {
                const auto network = build_ma_network(conf, beta, geometry, c_min);
                const double s = network_conductivity(network, geometry, plan.solver);
                if (s > 0.0) ln_sigma[r] = std::log(std::pow(row.ell, 2.0 - plan.dim) * s);
            } catch (const PreconditionError&) {
                return;
            }
            if (std::isfinite(ln_sigma[r])) {
                const double lb = thinned_lower_bound(conf, row.zeta_cut, beta, geometry, plan.solver).bound;
                if (lb > 0.0) ln_bound[r] = std::log(lb);
            }
        });
        std::vector<double> kept, kept_bound;
        for (std::size_t r = 0; r < plan.replicas; ++r)
            if (std::isfinite(ln_sigma[r])) {
                kept.push_back(ln_sigma[r]);
                kept_bound.push_back(ln_bound[r]);
            }
        row.censored_fraction = 1.0 - static_cast<double>(kept.size()) / static_cast<double>(plan.replicas);
        if (!kept.empty()) {
            const auto m = mean_stderr(kept);
            row.mean_ln_sigma = m.mean;
            row.se = m.se;
            double s = 0.0;
            for (double v : kept_bound) s += v;
            row.mean_ln_lower_bound = s / static_cast<double>(kept_bound.size());
            xs.push_back(row.beta_pow);
            ys.push_back(row.mean_ln_sigma);
        } else {
            row.mean_ln_sigma = -kInf;
            row.mean_ln_lower_bound = -kInf;
        }
        result.rows.push_back(row);
    }
    if (xs.size() >= 2) result.fit = linear_fit(xs, ys);
    return result;
}

}  // namespace hopnet
