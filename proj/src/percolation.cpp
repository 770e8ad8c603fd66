#include "hopnet/percolation.hpp"

#include "hopnet/errors.hpp"
#include "hopnet/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace hopnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Union-find node of an edge endpoint for crossing detection: both slabs are
// contracted to one node each. Returns false for edges that cannot lie on an
// LR crossing.
bool crossing_endpoints(const std::vector<Region>& region, const Edge& e, std::uint32_t n,
                        std::uint32_t& a, std::uint32_t& b) {
    const Region ri = region[e.i], rj = region[e.j];
    if (ri == Region::outside || rj == Region::outside) return false;
    if (ri != Region::box && rj != Region::box) return false;
    auto node = [n](Region r, std::uint32_t v) {
        return r == Region::left ? n : (r == Region::right ? n + 1 : v);
    };
    a = node(ri, e.i);
    b = node(rj, e.j);
    return true;
}

std::vector<Region> classify_all(const WeightedGraph& g, const StripeGeometry& geometry) {
    std::vector<Region> region(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) region[v] = geometry.classify(g.positions[v]);
    return region;
}

double count_le(const std::vector<double>& sorted, double x) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

template <class Compute>
ThresholdEstimate run_threshold_search(const std::string& parameter, double hi, double L,
                                       const BisectionOptions& opts, RngSeed seed,
                                       Compute&& compute) {
    if (!(opts.tol > 0.0)) throw ParameterError("tol must be positive");
    if (opts.replicas < 1) throw ParameterError("replicas must be at least 1");
    if (!(L > 0.0)) throw ParameterError("box side L must be positive");
    std::vector<double> t(opts.replicas);
    for (int expansion = 0;; ++expansion) {
        for_each_index(opts.replicas, opts.execution,
                       [&](std::size_t r) { t[r] = compute(hi, seed.with_stream(r)); });
        std::vector<double> sorted = t;
        std::sort(sorted.begin(), sorted.end());
        if (count_le(sorted, hi) / static_cast<double>(opts.replicas) > 0.5) break;
        if (expansion >= opts.max_expansions)
            throw SearchError("no " + parameter + " bracket found up to " + std::to_string(hi));
        hi *= 2.0;
    }
    ThresholdEstimate est = bisect_thresholds(std::move(t), 0.0, hi, opts.tol);
    est.parameter = parameter;
    est.box_side = L;
    est.seed = seed;
    return est;
}

}  // namespace

ClusterLabels clusters(const WeightedGraph& graph) {
    const std::size_t n = graph.vertex_count();
    UnionFind uf(n);
    for (const auto& e : graph.edges) uf.unite(e.i, e.j);
    ClusterLabels out;
    out.label.resize(n);
    std::unordered_map<std::uint32_t, std::uint32_t> root_label;
    std::unordered_map<std::uint32_t, std::size_t> count;
    for (std::uint32_t v = 0; v < n; ++v) {
        const std::uint32_t r = uf.find(v);
        auto [it, inserted] = root_label.try_emplace(r, v);
        out.label[v] = it->second;
        ++count[it->second];
    }
    for (const auto& [label, size] : count) out.sizes.push_back(size);
    std::sort(out.sizes.rbegin(), out.sizes.rend());
    return out;
}

bool has_lr_crossing(const WeightedGraph& graph, const StripeGeometry& geometry) {
    const auto n = static_cast<std::uint32_t>(graph.vertex_count());
    const auto region = classify_all(graph, geometry);
    UnionFind uf(n + 2);
    for (const auto& e : graph.edges) {
        std::uint32_t a = 0, b = 0;
        if (crossing_endpoints(region, e, n, a, b)) uf.unite(a, b);
    }
    return uf.same(n, n + 1);
}

double first_crossing_level(const WeightedGraph& graph, std::span<const double> edge_level,
                            const StripeGeometry& geometry) {
    if (edge_level.size() != graph.edges.size())
        throw ParameterError("edge_level must have one entry per edge");
    const auto n = static_cast<std::uint32_t>(graph.vertex_count());
    const auto region = classify_all(graph, geometry);
    struct Item {
        double level;
        std::uint32_t a, b;
    };
    std::vector<Item> items;
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        std::uint32_t a = 0, b = 0;
        if (crossing_endpoints(region, graph.edges[k], n, a, b)) items.push_back({edge_level[k], a, b});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.level < y.level; });
    UnionFind uf(n + 2);
    for (const auto& it : items) {
        uf.unite(it.a, it.b);
        if (uf.same(n, n + 1)) return it.level;
    }
    return kInf;
}

Box crossing_window(int dim, double L, double padding) {
    return StripeGeometry{dim, L}.window(padding);
}

MeanEstimate crossing_probability(const PppModel& model, double L, std::size_t replicas,
                                  RngSeed seed, Execution ex, double padding) {
    if (replicas < 1) throw ParameterError("replicas must be at least 1");
    if (std::isnan(padding)) padding = model.zeta;
    if (padding < model.zeta) throw ParameterError("padding must be at least zeta");
    const StripeGeometry geometry{model.dim, L};
    const Box window = crossing_window(model.dim, L, padding);
    std::vector<std::uint8_t> hit(replicas, 0);
    for_each_index(replicas, ex, [&](std::size_t r) {
        const auto conf = sample_marked_ppp(model.rho, model.law, window, seed.with_stream(r));
        const auto g = build_threshold_graph(conf, model.zeta, model.beta);
        hit[r] = has_lr_crossing(g, geometry) ? 1 : 0;
    });
    std::size_t k = 0;
    for (auto h : hit) k += h;
    return binomial(k, replicas);
}

ThresholdEstimate bisect_thresholds(std::vector<double> thresholds, double lo, double hi,
                                    double tol) {
    if (thresholds.empty()) throw ParameterError("no replicas");
    ThresholdEstimate est;
    std::sort(thresholds.begin(), thresholds.end());
    const std::size_t R = thresholds.size();
    auto freq = [&](double x) { return count_le(thresholds, x) / static_cast<double>(R); };
    est.probes.push_back({hi, freq(hi), R});
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f = freq(mid);
        est.probes.push_back({mid, f, R});
        if (f <= 0.5)
            lo = mid;
        else
            hi = mid;
    }
    est.bracket_lo = lo;
    est.bracket_hi = hi;
    est.value = 0.5 * (lo + hi);
    // order-statistic 95% interval for the median threshold
    const double half = 0.98 * std::sqrt(static_cast<double>(R));
    const auto k_lo = static_cast<std::size_t>(std::max(0.0, std::floor(0.5 * R - half)));
    const auto k_hi = static_cast<std::size_t>(std::min(static_cast<double>(R - 1), std::ceil(0.5 * R + half)));
    const double t_hi = std::min(thresholds[k_hi], est.probes.front().value);
    const double ci = std::max(0.0, t_hi - thresholds[k_lo]) / 2.0;
    est.half_width = (hi - lo) / 2.0 + ci;
    est.replicas_per_probe = R;
    est.replica_thresholds = std::move(thresholds);
    return est;
}

ThresholdEstimate estimate_zeta_c(double beta, double rho, const EnergyLaw& law, int dim,
                                  double L, const BisectionOptions& opts, RngSeed seed) {
    if (!(beta > 0.0) || !(rho > 0.0)) throw ParameterError("beta and rho must be positive");
    validate_dimension(dim);
    const StripeGeometry geometry{dim, L};
    double hi = opts.hi;
    if (!(hi > 0.0)) {
        const double a = law.alpha();
        const double c0 = std::isfinite(law.c0()) ? law.c0() : law.support_radius();
        hi = predicted_zeta_c(16.0, rho, c0, a, dim, beta).zeta_c;
    }
    return run_threshold_search("zeta", hi, L, opts, seed, [&](double zeta_hi, RngSeed s) {
        const auto conf = sample_marked_ppp(rho, law, crossing_window(dim, L, zeta_hi), s);
        const auto g = build_threshold_graph(conf, zeta_hi, beta);
        std::vector<double> level(g.edges.size());
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const auto& e = g.edges[k];
            level[k] = distance(g.positions[e.i], g.positions[e.j], dim) +
                       beta * energy_term(g.energies[e.i], g.energies[e.j]);
        }
        return first_crossing_level(g, level, geometry);
    });
}

SignMode sign_mode_from_string(std::string_view s) {
    if (s == "positive") return SignMode::positive;
    if (s == "signed") return SignMode::signed_marks;
    throw ParameterError("sign mode must be 'positive' or 'signed'");
}

std::string_view to_string(SignMode m) { return m == SignMode::positive ? "positive" : "signed"; }

namespace {

double coupled_first_crossing(const CoupledSample& sample, double lambda_hi,
                              const WeightedGraph& g, const StripeGeometry& geometry) {
    std::vector<double> level(g.edges.size());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        level[k] = lambda_hi * std::max(sample.retention[g.source_index[e.i]],
                                        sample.retention[g.source_index[e.j]]);
    }
    return first_crossing_level(g, level, geometry);
}

}  // namespace

ThresholdEstimate estimate_lambda_c(double alpha, SignMode mode, int dim, double L,
                                    const BisectionOptions& opts, RngSeed seed) {
    validate_dimension(dim);
    const EnergyLaw law = mode == SignMode::positive ? EnergyLaw::positive_power(1.0, alpha)
                                                     : EnergyLaw::signed_power(1.0, alpha);
    const StripeGeometry geometry{dim, L};
    const double hi = opts.hi > 0.0 ? opts.hi : 16.0;
    return run_threshold_search("lambda", hi, L, opts, seed, [&](double lambda_hi, RngSeed s) {
        const auto sample = sample_coupled_ppp(lambda_hi, law, crossing_window(dim, L, 1.0), s);
        const auto g = build_threshold_graph(sample.conf, 1.0, 1.0);
        return coupled_first_crossing(sample, lambda_hi, g, geometry);
    });
}

ThresholdEstimate estimate_boolean_lambda_c(double r, int dim, double L,
                                            const BisectionOptions& opts, RngSeed seed) {
    if (!(r > 0.0)) throw ParameterError("Boolean radius must be positive");
    validate_dimension(dim);
    const StripeGeometry geometry{dim, L};
    const EnergyLaw law = EnergyLaw::signed_power(1.0, 0.0);
    const double hi = opts.hi > 0.0 ? opts.hi : 2.0 / std::pow(r, dim);
    return run_threshold_search("lambda", hi, L, opts, seed, [&](double lambda_hi, RngSeed s) {
        const auto sample = sample_coupled_ppp(lambda_hi, law, crossing_window(dim, L, 2.0 * r), s);
        std::vector<Point> pts;
        pts.reserve(sample.conf.size());
        for (const auto& p : sample.conf.points) pts.push_back(p.x);
        const auto g = build_boolean_graph(pts, dim, r);
        return coupled_first_crossing(sample, lambda_hi, g, geometry);
    });
}

PredictedThreshold predicted_zeta_c(double lambda_star, double rho, double c0, double alpha,
                                    int dim, double beta, double epsilon) {
    if (!(lambda_star > 0.0) || !(rho > 0.0) || !(c0 > 0.0) || !(beta > 0.0) || !(alpha >= 0.0))
        throw ParameterError("predicted_zeta_c needs positive parameters and alpha >= 0");
    const double a1 = alpha + 1.0;
    const double denom = a1 + dim;
    PredictedThreshold p;
    p.zeta_c = std::pow(lambda_star / rho, 1.0 / denom) * std::pow(beta * c0, a1 / denom);
    p.c_c = std::exp(-p.zeta_c);
    p.valid = p.zeta_c <= std::min(c0, epsilon) * beta;
    p.chi = -std::pow(lambda_star * std::pow(c0, a1) / rho, 1.0 / denom);
    return p;
}

double cluster_diameter(const WeightedGraph& graph, std::uint32_t v) {
    const Adjacency adj = make_adjacency(graph);
    std::vector<std::uint8_t> seen(graph.vertex_count(), 0);
    std::deque<std::uint32_t> queue{v};
    seen[v] = 1;
    Point lo = graph.positions[v], hi = graph.positions[v];
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (int k = 0; k < graph.dim; ++k) {
            lo[k] = std::min(lo[k], graph.positions[u][k]);
            hi[k] = std::max(hi[k], graph.positions[u][k]);
        }
        for (std::size_t q = adj.offset[u]; q < adj.offset[u + 1]; ++q) {
            const std::uint32_t w = adj.target[q];
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    double d = 0.0;
    for (int k = 0; k < graph.dim; ++k) d = std::max(d, hi[k] - lo[k]);
    return d;
}

PalmDiameters palm_cluster_diameter(double lambda, const EnergyLaw& law, double zeta, double beta,
                                    int dim, double window_radius, std::size_t replicas,
                                    RngSeed seed, Execution ex) {
    if (!(window_radius > 0.0)) throw ParameterError("window radius must be positive");
    const Box window = Box::centered(dim, window_radius);
    PalmDiameters out;
    out.diameter.assign(replicas, 0.0);
    out.truncated.assign(replicas, 0);
    for_each_index(replicas, ex, [&](std::size_t r) {
        const auto base = sample_marked_ppp(lambda, law, window, RngSeed{seed.seed, 2 * seed.stream + 2 * r});
        const auto conf = palm_augment(base, law, RngSeed{seed.seed, 2 * seed.stream + 2 * r + 1});
        const auto g = build_threshold_graph(conf, zeta, beta);
        const auto origin = static_cast<std::uint32_t>(conf.size() - 1);
        out.diameter[r] = cluster_diameter(g, origin);
        const auto labels = clusters(g);
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            if (labels.label[v] != labels.label[origin]) continue;
            for (int k = 0; k < dim; ++k)
                if (window_radius - std::fabs(g.positions[v][k]) < zeta) out.truncated[r] = 1;
        }
    });
    std::size_t t = 0;
    for (auto f : out.truncated) t += f;
    out.truncation_rate = replicas ? static_cast<double>(t) / static_cast<double>(replicas) : 0.0;
    out.valid = out.truncation_rate < 0.01;
    return out;
}

std::vector<SurvivalPoint> survival_curve(std::span<const double> diameters,
                                          std::span<const double> levels) {
    std::vector<SurvivalPoint> out;
    for (double n : levels) {
        std::size_t c = 0;
        for (double d : diameters)
            if (d > n) ++c;
        out.push_back({n, diameters.empty() ? 0.0 : static_cast<double>(c) / diameters.size(), c});
    }
    return out;
}

}  // namespace hopnet
