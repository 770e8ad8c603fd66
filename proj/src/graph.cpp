#include "hopnet/graph.hpp"

#include "hopnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hopnet {

namespace {

// Slack on pruning radii so exact predicates decide boundary cases.
constexpr double kSlack = 1.0 + 1e-12;

WeightedGraph vertices_of(const MarkedConfiguration& conf) {
    WeightedGraph g;
    g.dim = conf.dim;
    g.positions.reserve(conf.size());
    g.energies.reserve(conf.size());
    g.source_index.resize(conf.size());
    for (std::size_t i = 0; i < conf.size(); ++i) {
        g.positions.push_back(conf.points[i].x);
        g.energies.push_back(conf.points[i].e);
        g.source_index[i] = i;
    }
    return g;
}

}  // namespace

void WeightedGraph::canonicalize() {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
}

Adjacency make_adjacency(const WeightedGraph& g) {
    Adjacency adj;
    const std::size_t n = g.vertex_count();
    adj.offset.assign(n + 1, 0);
    for (const auto& e : g.edges) {
        ++adj.offset[e.i + 1];
        ++adj.offset[e.j + 1];
    }
    for (std::size_t v = 0; v < n; ++v) adj.offset[v + 1] += adj.offset[v];
    adj.target.resize(adj.offset[n]);
    adj.weight.resize(adj.offset[n]);
    std::vector<std::size_t> fill(adj.offset.begin(), adj.offset.end() - 1);
    for (const auto& e : g.edges) {
        adj.target[fill[e.i]] = e.j;
        adj.weight[fill[e.i]++] = e.weight;
        adj.target[fill[e.j]] = e.i;
        adj.weight[fill[e.j]++] = e.weight;
    }
    return adj;
}

double energy_term(double ex, double ey) {
    return std::fabs(ex) + std::fabs(ey) + std::fabs(ex - ey);
}

double conductance(const Point& x, const Point& y, double ex, double ey, double beta, int dim,
                   double distance_scale) {
    const double r = distance(x, y, dim);
    if (r == 0.0) throw DomainError("conductance of a point with itself is not defined");
    return std::exp(-r / distance_scale - beta * energy_term(ex, ey));
}

WeightedGraph build_threshold_graph(const MarkedConfiguration& conf, double zeta, double beta,
                                    PairSearch search) {
    if (!(zeta > 0.0) || !(beta > 0.0)) throw ParameterError("zeta and beta must be positive");
    WeightedGraph g = vertices_of(conf);
    g.meta.kind = "threshold";
    g.meta.zeta = zeta;
    g.meta.beta = beta;
    // energy_term >= 2 max(|Ex|, |Ey|), so only these points can carry edges
    const double emax = kSlack * zeta / (2.0 * beta);
    std::vector<std::uint32_t> active;
    for (std::size_t i = 0; i < conf.size(); ++i)
        if (std::fabs(conf.points[i].e) <= emax) active.push_back(static_cast<std::uint32_t>(i));
    auto visit = [&](std::uint32_t i, std::uint32_t j) {
        const auto& p = conf.points[i];
        const auto& q = conf.points[j];
        const double cost = distance(p.x, q.x, conf.dim) + beta * energy_term(p.e, q.e);
        if (cost <= zeta) g.edges.push_back({i, j, std::exp(-cost)});
    };
    if (search == PairSearch::cell_list) {
        CellGrid grid(g.positions, active, conf.dim, kSlack * zeta);
        grid.for_each_candidate_pair(visit);
    } else {
        for_each_pair_brute(active, visit);
    }
    g.canonicalize();
    return g;
}

WeightedGraph build_boolean_graph(std::span<const Point> points, int dim, double r,
                                  PairSearch search) {
    if (!(r > 0.0)) throw ParameterError("Boolean radius must be positive");
    validate_dimension(dim);
    WeightedGraph g;
    g.dim = dim;
    g.positions.assign(points.begin(), points.end());
    g.energies.assign(points.size(), 0.0);
    g.source_index.resize(points.size());
    std::iota(g.source_index.begin(), g.source_index.end(), std::size_t{0});
    g.meta.kind = "boolean";
    g.meta.radius = r;
    std::vector<std::uint32_t> all(points.size());
    std::iota(all.begin(), all.end(), 0u);
    auto visit = [&](std::uint32_t i, std::uint32_t j) {
        const double dist = distance(points[i], points[j], dim);
        if (dist > 0.0 && dist <= 2.0 * r) g.edges.push_back({i, j, 1.0});
    };
    if (search == PairSearch::cell_list) {
        CellGrid grid(points, all, dim, kSlack * 2.0 * r);
        grid.for_each_candidate_pair(visit);
    } else {
        for_each_pair_brute(all, visit);
    }
    g.canonicalize();
    return g;
}

WeightedGraph build_ma_network(const MarkedConfiguration& conf, double beta,
                               const StripeGeometry& geometry, double c_min, PairSearch search) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    if (!(c_min >= 0.0) || c_min >= 1.0) throw ParameterError("c_min must be in [0, 1)");
    if (geometry.dim != conf.dim) throw ParameterError("geometry dimension differs");
    WeightedGraph g;
    g.dim = conf.dim;
    g.meta.kind = "miller_abrahams";
    g.meta.beta = beta;
    g.meta.ell = geometry.ell;
    g.meta.c_min = c_min;
    g.meta.zeta = c_min > 0.0 ? -std::log(c_min) : std::numeric_limits<double>::infinity();
    std::vector<Region> region;
    std::array<std::size_t, 3> count{0, 0, 0};
    for (std::size_t i = 0; i < conf.size(); ++i) {
        const Region r = geometry.classify(conf.points[i].x);
        if (r == Region::outside) continue;
        g.positions.push_back(conf.points[i].x);
        g.energies.push_back(conf.points[i].e);
        g.source_index.push_back(i);
        region.push_back(r);
        ++count[static_cast<int>(r)];
    }
    if (count[0] == 0) throw PreconditionError("no point in the left slab S_l^-");
    if (count[1] == 0) throw PreconditionError("no point in the box Lambda_l");
    if (count[2] == 0) throw PreconditionError("no point in the right slab S_l^+");

    const std::size_t n = g.vertex_count();
    auto visit = [&](std::uint32_t i, std::uint32_t j) {
        if (region[i] != Region::box && region[j] != Region::box) return;
        const double cost =
            distance(g.positions[i], g.positions[j], g.dim) + beta * energy_term(g.energies[i], g.energies[j]);
        const double w = std::exp(-cost);
        if (w > 0.0 && w >= c_min) g.edges.push_back({i, j, w});
    };
    if (c_min == 0.0) {
        for (std::uint32_t i = 0; i < n; ++i) {
            if (region[i] != Region::box) continue;
            for (std::uint32_t j = 0; j < n; ++j) {
                if (j == i || (region[j] == Region::box && j < i)) continue;
                i < j ? visit(i, j) : visit(j, i);
            }
        }
    } else {
        const double zeta_cut = g.meta.zeta;
        const double emax = kSlack * zeta_cut / (2.0 * beta);
        std::vector<std::uint32_t> active;
        for (std::uint32_t i = 0; i < n; ++i)
            if (std::fabs(g.energies[i]) <= emax) active.push_back(i);
        if (search == PairSearch::cell_list) {
            CellGrid grid(g.positions, active, g.dim, kSlack * zeta_cut);
            grid.for_each_candidate_pair(visit);
        } else {
            for_each_pair_brute(active, visit);
        }
    }
    g.canonicalize();
    return g;
}

WeightedGraph stripe_network(const WeightedGraph& graph, const StripeGeometry& geometry,
                             bool unit_weights) {
    WeightedGraph g;
    g.dim = graph.dim;
    g.meta = graph.meta;
    g.meta.ell = geometry.ell;
    std::vector<std::int64_t> remap(graph.vertex_count(), -1);
    std::vector<Region> region(graph.vertex_count(), Region::outside);
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        region[v] = geometry.classify(graph.positions[v]);
        if (region[v] == Region::outside) continue;
        remap[v] = static_cast<std::int64_t>(g.positions.size());
        g.positions.push_back(graph.positions[v]);
        g.energies.push_back(graph.energies[v]);
        g.source_index.push_back(graph.source_index.empty() ? v : graph.source_index[v]);
    }
    for (const auto& e : graph.edges) {
        if (remap[e.i] < 0 || remap[e.j] < 0) continue;
        if (region[e.i] != Region::box && region[e.j] != Region::box) continue;
        g.edges.push_back({static_cast<std::uint32_t>(remap[e.i]),
                           static_cast<std::uint32_t>(remap[e.j]),
                           unit_weights ? 1.0 : e.weight});
    }
    g.canonicalize();
    return g;
}

CutoffChoice default_cutoff(const MarkedConfiguration& conf, double beta,
                            const StripeGeometry& geometry, double rel) {
    const WeightedGraph full = build_ma_network(conf, beta, geometry, 0.0);
    std::vector<double> degree(full.vertex_count(), 0.0);
    std::vector<double> weights;
    weights.reserve(full.edges.size());
    for (const auto& e : full.edges) {
        degree[e.i] += e.weight;
        degree[e.j] += e.weight;
        weights.push_back(e.weight);
    }
    CutoffChoice out;
    out.min_degree = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < full.vertex_count(); ++v)
        if (geometry.classify(full.positions[v]) == Region::box)
            out.min_degree = std::min(out.min_degree, degree[v]);
    std::sort(weights.begin(), weights.end());
    const double budget = rel * out.min_degree;
    double dropped = 0.0;
    std::size_t k = 0;
    while (k < weights.size() && dropped + weights[k] <= budget) dropped += weights[k++];
    if (k == 0 || k == weights.size()) {
        out.c_min = 0.0;
        out.zeta_cut = std::numeric_limits<double>::infinity();
        out.dropped_weight = 0.0;
        return out;
    }
    // every weight strictly below weights[k] is dropped
    out.c_min = weights[k];
    out.zeta_cut = -std::log(out.c_min);
    out.dropped_weight = 0.0;
    for (std::size_t q = 0; q < k && weights[q] < out.c_min; ++q) out.dropped_weight += weights[q];
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_pairs(const WeightedGraph& g) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(g.edges.size());
    for (const auto& e : g.edges) out.emplace_back(e.i, e.j);
    std::sort(out.begin(), out.end());
    return out;
}

bool rescale_isomorphism_check(const MarkedConfiguration& conf, double zeta, double beta) {
    return rescale_isomorphism_check(conf, zeta, beta, mott_rescale(conf, zeta, beta));
}

bool rescale_isomorphism_check(const MarkedConfiguration& conf, double zeta, double beta,
                               const MarkedConfiguration& rescaled) {
    const MarkedConfiguration kept = truncate(conf, zeta / beta);
    if (kept.size() != rescaled.size()) return false;
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (int k = 0; k < conf.dim; ++k)
            if (kept.points[i].x[k] / zeta != rescaled.points[i].x[k]) return false;
    const WeightedGraph original = build_threshold_graph(kept, zeta, beta);
    const WeightedGraph scaled = build_threshold_graph(rescaled, 1.0, 1.0);
    return edge_pairs(original) == edge_pairs(scaled);
}

}  // namespace hopnet
