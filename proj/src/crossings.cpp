#include "hopnet/crossings.hpp"

#include "hopnet/errors.hpp"
#include "hopnet/point_process.hpp"
#include "hopnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>


namespace hopnet {

namespace {

class Dinic {
public:
    explicit Dinic(std::size_t n) : n_(n) {}

    void add_arc(int u, int v, int cap) { pending_.push_back({u, v, cap}); }

    std::size_t max_flow(int s, int t) {
        build();
        std::size_t flow = 0;
        while (bfs(s, t)) {
            it_.assign(offset_.begin(), offset_.end() - 1);
            while (int f = dfs(s, t, std::numeric_limits<int>::max())) flow += static_cast<std::size_t>(f);
        }
        return flow;
    }

    /// Nodes reachable from s in the residual graph (valid after max_flow).
    std::vector<std::uint8_t> reachable(int s) const {
        std::vector<std::uint8_t> seen(n_, 0);
        std::vector<int> queue{s};
        seen[s] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const int u = queue[h];
            for (int a = offset_[u]; a < offset_[u + 1]; ++a)
                if (cap_[a] > 0 && !seen[to_[a]]) {
                    seen[to_[a]] = 1;
                    queue.push_back(to_[a]);
                }
        }
        return seen;
    }

private:
    struct Pending {
        int u, v, cap;
    };

    // compressed arc arrays; rev_[a] is the paired residual arc
    void build() {
        offset_.assign(n_ + 1, 0);
        for (const auto& p : pending_) {
            ++offset_[p.u + 1];
            ++offset_[p.v + 1];
        }
        for (std::size_t v = 0; v < n_; ++v) offset_[v + 1] += offset_[v];
        const auto m = static_cast<std::size_t>(offset_[n_]);
        to_.resize(m);
        cap_.resize(m);
        rev_.resize(m);
        std::vector<int> fill(offset_.begin(), offset_.end() - 1);
        for (const auto& p : pending_) {
            const int a = fill[p.u]++, b = fill[p.v]++;
            to_[a] = p.v;
            cap_[a] = p.cap;
            rev_[a] = b;
            to_[b] = p.u;
            cap_[b] = 0;
            rev_[b] = a;
        }
        pending_.clear();
        pending_.shrink_to_fit();
        level_.resize(n_);
    }

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        queue_.clear();
        queue_.push_back(s);
        level_[s] = 0;
        for (std::size_t h = 0; h < queue_.size(); ++h) {
            const int u = queue_[h];
            if (level_[t] >= 0 && level_[u] >= level_[t]) break;
            for (int a = offset_[u]; a < offset_[u + 1]; ++a)
                if (cap_[a] > 0 && level_[to_[a]] < 0) {
                    level_[to_[a]] = level_[u] + 1;
                    queue_.push_back(to_[a]);
                }
        }
        return level_[t] >= 0;
    }

    int dfs(int u, int t, int pushed) {
        if (u == t) return pushed;
        for (int& a = it_[u]; a < offset_[u + 1]; ++a) {
            const int v = to_[a];
            if (cap_[a] <= 0 || level_[v] != level_[u] + 1) continue;
            if (int f = dfs(v, t, std::min(pushed, cap_[a]))) {
                cap_[a] -= f;
                cap_[rev_[a]] += f;
                return f;
            }
        }
        return 0;
    }

    std::size_t n_;
    std::vector<Pending> pending_;
    std::vector<int> offset_, to_, cap_, rev_, level_, it_, queue_;
};

}  // namespace

CrossingFlow max_crossing_flow(const WeightedGraph& graph, const StripeGeometry& geometry) {
    const std::size_t n = graph.vertex_count();
    std::vector<Region> region(n);
    for (std::size_t v = 0; v < n; ++v) region[v] = geometry.classify(graph.positions[v]);
    // node 2v = in(v), 2v + 1 = out(v)
    const int source = static_cast<int>(2 * n), sink = source + 1;
    Dinic net(2 * n + 2);
    // only the vertex arcs are finite, so every minimum cut is a vertex cut
    const int big = static_cast<int>(n) + 1;
    for (std::size_t v = 0; v < n; ++v) {
        if (region[v] == Region::outside) continue;
        const int in = static_cast<int>(2 * v);
        net.add_arc(in, in + 1, 1);
        if (region[v] == Region::left) net.add_arc(source, in, big);
        if (region[v] == Region::right) net.add_arc(in + 1, sink, big);
    }
    auto forward = [&](std::uint32_t a, std::uint32_t b) {
        // arc a -> b may lie on a crossing S^- -> Lambda ... Lambda -> S^+
        const Region ra = region[a], rb = region[b];
        const bool ok = (ra == Region::left && rb == Region::box) ||
                        (ra == Region::box && rb == Region::box) ||
                        (ra == Region::box && rb == Region::right);
        if (ok) net.add_arc(static_cast<int>(2 * a + 1), static_cast<int>(2 * b), big);
    };
    for (const auto& e : graph.edges) {
        forward(e.i, e.j);
        forward(e.j, e.i);
    }
    CrossingFlow out;
    out.count = net.max_flow(source, sink);
    const auto seen = net.reachable(source);
    for (std::size_t v = 0; v < n; ++v)
        if (seen[2 * v] && !seen[2 * v + 1]) out.cut.push_back(static_cast<std::uint32_t>(v));
    return out;
}

std::size_t max_vertex_disjoint_crossings(const WeightedGraph& graph,
                                          const StripeGeometry& geometry) {
    return max_crossing_flow(graph, geometry).count;
}

std::size_t brute_force_crossings(const WeightedGraph& graph, const StripeGeometry& geometry) {
    const std::size_t n = graph.vertex_count();
    if (n > 14) throw SizeError("brute_force_crossings supports at most 14 vertices");
    std::vector<Region> region(n);
    for (std::size_t v = 0; v < n; ++v) region[v] = geometry.classify(graph.positions[v]);
    std::vector<std::uint32_t> adj(n, 0);
    for (const auto& e : graph.edges) {
        adj[e.i] |= 1u << e.j;
        adj[e.j] |= 1u << e.i;
    }
    // vertex sets of all LR crossings
    std::vector<std::uint8_t> is_path(std::size_t{1} << n, 0);
    std::function<void(std::uint32_t, std::uint32_t)> extend = [&](std::uint32_t v, std::uint32_t mask) {
        for (std::uint32_t w = 0; w < n; ++w) {
            if (!(adj[v] >> w & 1u) || (mask >> w & 1u)) continue;
            if (region[w] == Region::right) is_path[mask | 1u << w] = 1;
            if (region[w] == Region::box) extend(w, mask | 1u << w);
        }
    };
    for (std::uint32_t s = 0; s < n; ++s) {
        if (region[s] != Region::left) continue;
        for (std::uint32_t m = 0; m < n; ++m)
            if ((adj[s] >> m & 1u) && region[m] == Region::box) extend(m, 1u << s | 1u << m);
    }
    std::vector<std::uint32_t> paths;
    for (std::uint32_t mask = 0; mask < is_path.size(); ++mask)
        if (is_path[mask]) paths.push_back(mask);
    // best(avail): decide the lowest available vertex, unused or on a path
    std::vector<int> memo(std::size_t{1} << n, -1);
    std::function<int(std::uint32_t)> best = [&](std::uint32_t avail) -> int {
        if (avail == 0) return 0;
        if (memo[avail] >= 0) return memo[avail];
        const std::uint32_t low = avail & (~avail + 1u);
        int b = best(avail & ~low);
        for (std::uint32_t p : paths)
            if ((p & low) && (p & avail) == p) b = std::max(b, 1 + best(avail & ~p));
        return memo[avail] = b;
    };
    return static_cast<std::size_t>(best(static_cast<std::uint32_t>((std::size_t{1} << n) - 1)));
}

CrossingBound crossing_lower_bound(std::size_t n, std::size_t n_box) {
    CrossingBound b;
    if (n == 0) return b;
    if (n_box == 0) throw ParameterError("a crossing needs at least one box vertex");
    const double N = static_cast<double>(n), m = static_cast<double>(n_box);
    b.tight = N * N / (2.0 * N + m);
    b.weak = N * N / (3.0 * m);
    return b;
}

DensityScan crossing_density_scan(const PppModel& model, const std::vector<double>& L_list,
                                  std::size_t replicas, RngSeed seed, Execution ex) {
    if (replicas < 1) throw ParameterError("replicas must be at least 1");
    DensityScan scan;
    for (std::size_t li = 0; li < L_list.size(); ++li) {
        const double L = L_list[li];
        if (!(L > 0.0)) throw ParameterError("box sides must be positive");
        const StripeGeometry geometry{model.dim, L};
        const Box window = crossing_window(model.dim, L, model.zeta);
        std::vector<double> ratio(replicas, 0.0);
        for_each_index(replicas, ex, [&](std::size_t r) {
            const auto conf = sample_marked_ppp(model.rho, model.law, window,
                                                seed.with_stream(li * replicas + r));
            const auto g = build_threshold_graph(conf, model.zeta, model.beta);
            ratio[r] = static_cast<double>(max_vertex_disjoint_crossings(g, geometry)) /
                       std::pow(L, model.dim - 1);
        });
        const auto m = mean_stderr(ratio);
        const auto hits = static_cast<double>(std::count_if(ratio.begin(), ratio.end(), [](double x) { return x > 0.0; }));
        scan.rows.push_back({L, m.mean, m.se, replicas, hits / static_cast<double>(replicas)});
    }
    if (!scan.rows.empty() && scan.rows.back().crossing_fraction < 0.5)
        scan.warnings.push_back("fewer than half of the replicas cross at the largest box; parameters look subcritical");
    return scan;
}

}  // namespace hopnet
