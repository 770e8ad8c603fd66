#include "hopnet/errors.hpp"
#include "hopnet/percolation.hpp"
#include "hopnet/point_process.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>

using namespace hopnet;
using testing::conf2d;

namespace {

WeightedGraph with_edges(const MarkedConfiguration& c, std::vector<std::pair<std::uint32_t, std::uint32_t>> e) {
    WeightedGraph g;
    g.dim = c.dim;
    for (const auto& p : c.points) {
        g.positions.push_back(p.x);
        g.energies.push_back(p.e);
    }
    g.source_index.resize(c.size());
    for (auto [i, j] : e) g.edges.push_back({std::min(i, j), std::max(i, j), 1.0});
    g.canonicalize();
    return g;
}

// BFS from every S^- vertex through box vertices only
bool crossing_oracle(const WeightedGraph& g, const StripeGeometry& geo) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<Region> r(n);
    for (std::size_t v = 0; v < n; ++v) r[v] = geo.classify(g.positions[v]);
    std::vector<char> seen(n, 0);
    std::deque<std::uint32_t> q;
    for (std::uint32_t s = 0; s < n; ++s)
        if (r[s] == Region::left)
            for (auto m : adj[s])
                if (r[m] == Region::box && !seen[m]) {
                    seen[m] = 1;
                    q.push_back(m);
                }
    while (!q.empty()) {
        const auto v = q.front();
        q.pop_front();
        for (auto w : adj[v]) {
            if (r[w] == Region::right) return true;
            if (r[w] == Region::box && !seen[w]) {
                seen[w] = 1;
                q.push_back(w);
            }
        }
    }
    return false;
}

}  // namespace

TEST_CASE("cluster labels") {
    CHECK(clusters(WeightedGraph{}).label.empty());
    const auto six = conf2d({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {10, 0, 0}, {11, 0, 0}, {12, 0, 0}});
    const auto path = clusters(with_edges(six, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}));
    CHECK(path.cluster_count() == 1);
    const auto tri = clusters(with_edges(six, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {5, 3}}));
    CHECK(tri.sizes == std::vector<std::size_t>{3, 3});
    CHECK(tri.label == std::vector<std::uint32_t>{0, 0, 0, 3, 3, 3});
}

TEST_CASE("cluster labels agree with BFS reachability") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto c = sample_marked_ppp(4.0, EnergyLaw::signed_power(1.0, 0.0), Box::centered(2, 5.0), {3, s});
        REQUIRE(c.size() <= 500);
        const auto g = build_threshold_graph(c, 1.0 + 0.05 * s, 0.5);
        const auto lab = clusters(g);
        const auto adj = make_adjacency(g);
        for (std::uint32_t v = 0; v < g.vertex_count(); v += 7) {
            std::vector<char> seen(g.vertex_count(), 0);
            std::deque<std::uint32_t> q{v};
            seen[v] = 1;
            while (!q.empty()) {
                const auto u = q.front();
                q.pop_front();
                for (auto k = adj.offset[u]; k < adj.offset[u + 1]; ++k)
                    if (!seen[adj.target[k]]) {
                        seen[adj.target[k]] = 1;
                        q.push_back(adj.target[k]);
                    }
            }
            for (std::uint32_t w = 0; w < g.vertex_count(); ++w) CHECK((lab.label[w] == lab.label[v]) == (seen[w] == 1));
        }
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v) CHECK(lab.label[v] <= v);
    }
}

TEST_CASE("LR crossing examples") {
    const StripeGeometry geo{2, 4.0};
    const auto abc = conf2d({{-2.5, 0, 0}, {0, 0, 0}, {2.5, 0, 0}});
    CHECK(has_lr_crossing(with_edges(abc, {{0, 1}, {1, 2}}), geo));
    CHECK_FALSE(has_lr_crossing(with_edges(abc, {{0, 2}}), geo));
    const auto noleft = conf2d({{0, 0, 0}, {1, 0, 0}, {2.5, 0, 0}});
    CHECK_FALSE(has_lr_crossing(with_edges(noleft, {{0, 1}, {1, 2}}), geo));
    // middle vertex in S^- rather than in the box
    const auto bad = conf2d({{-3, 0, 0}, {-2.5, 0, 0}, {0, 0, 0}, {2.5, 0, 0}});
    CHECK(has_lr_crossing(with_edges(bad, {{0, 1}, {1, 2}, {2, 3}}), geo));
    CHECK_FALSE(has_lr_crossing(with_edges(bad, {{0, 1}, {1, 3}}), geo));
    // interior vertex outside the stripe
    const auto out = conf2d({{-2.5, 0, 0}, {0, 2.5, 0}, {2.5, 0, 0}});
    CHECK_FALSE(has_lr_crossing(with_edges(out, {{0, 1}, {1, 2}}), geo));
}

TEST_CASE("crossing detection matches BFS oracle and is monotone under edge addition") {
    const StripeGeometry geo{2, 6.0};
    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto c = sample_marked_ppp(3.0, EnergyLaw::signed_power(1.0, 0.0), geo.window(2.0), {17, s});
        bool prev = false;
        for (double z = 0.4; z < 2.0; z += 0.1) {
            const auto g = build_threshold_graph(c, z, 0.7);
            const bool x = has_lr_crossing(g, geo);
            CHECK(x == crossing_oracle(g, geo));
            CHECK((x || !prev));
            prev = x;
        }
    }
}

TEST_CASE("first crossing level is the exact threshold") {
    const StripeGeometry geo{2, 5.0};
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto c = sample_marked_ppp(3.0, EnergyLaw::signed_power(1.0, 0.0), geo.window(3.0), {23, s});
        const double beta = 0.8;
        const auto g = build_threshold_graph(c, 3.0, beta);
        std::vector<double> level;
        for (const auto& e : g.edges)
            level.push_back(distance(g.positions[e.i], g.positions[e.j], 2) + beta * energy_term(g.energies[e.i], g.energies[e.j]));
        const double t = first_crossing_level(g, level, geo);
        if (std::isinf(t)) {
            CHECK_FALSE(has_lr_crossing(g, geo));
            continue;
        }
        CHECK(has_lr_crossing(build_threshold_graph(c, t, beta), geo));
        CHECK_FALSE(has_lr_crossing(build_threshold_graph(c, t * (1 - 1e-9), beta), geo));
    }
}

TEST_CASE("crossing probability limits, determinism, coupled monotonicity") {
    PppModel m;
    m.rho = 2.0;
    m.beta = 1.0;
    m.zeta = 0.05;
    CHECK(crossing_probability(m, 8.0, 50, {1, 0}).mean == 0.0);
    m.zeta = 16.0;
    m.law = EnergyLaw::signed_power(1.0, 0.0);
    m.beta = 0.1;
    CHECK(crossing_probability(m, 8.0, 50, {1, 0}).mean == 1.0);

    m.zeta = 2.0;
    m.beta = 1.0;
    m.rho = 4.0;
    const auto a = crossing_probability(m, 6.0, 64, {4, 0}, Execution::serial);
    const auto b = crossing_probability(m, 6.0, 64, {4, 0}, Execution::parallel);
    CHECK(a.mean == b.mean);
    CHECK(a.se == doctest::Approx(std::sqrt(a.mean * (1 - a.mean) / 64)));

    double prev = 0.0;
    for (double z = 1.0; z <= 3.0; z += 0.25) {
        m.zeta = z;
        const double p = crossing_probability(m, 6.0, 100, {5, 0}, Execution::parallel, 3.0).mean;
        CHECK(p >= prev);
        prev = p;
    }
    CHECK(prev > 0.5);
    CHECK_THROWS_AS(crossing_probability(m, 6.0, 10, {5, 0}, Execution::serial, 1.0), ParameterError);
}

TEST_CASE("crossing probability is non-decreasing in rho under thinning coupling") {
    const StripeGeometry geo{2, 6.0};
    const auto law = EnergyLaw::signed_power(1.0, 0.0);
    std::vector<int> hits(6, 0);
    for (std::uint64_t r = 0; r < 60; ++r) {
        const auto s = sample_coupled_ppp(24.0, law, geo.window(1.0), {8, r});
        bool prev = false;
        for (int k = 0; k < 6; ++k) {
            const double rho = 6.0 + 3.0 * k;
            MarkedConfiguration c = s.conf;
            c.points.clear();
            for (std::size_t i = 0; i < s.conf.size(); ++i)
                if (s.retention[i] < rho / 24.0) c.points.push_back(s.conf.points[i]);
            const bool x = has_lr_crossing(build_threshold_graph(c, 1.0, 1.0), geo);
            CHECK((x || !prev));
            prev = x;
            hits[k] += x;
        }
    }
    CHECK(std::is_sorted(hits.begin(), hits.end()));
}

TEST_CASE("bisection on per-replica thresholds") {
    std::vector<double> t{0.1, 0.2, 0.3, 0.4};
    const auto est = bisect_thresholds(t, 0.0, 1.0, 0.01);
    CHECK(est.bracket_hi - est.bracket_lo <= 0.01);
    // exactly half cross on [0.2, 0.3): the tie rule keeps moving up
    CHECK(est.value >= 0.3 - 0.01);
    CHECK(est.value <= 0.3 + 0.01);
    CHECK(est.half_width > 0.0);
    for (const auto& p : est.probes) {
        const double f = static_cast<double>(std::count_if(t.begin(), t.end(), [&](double x) { return x <= p.value; })) / 4.0;
        CHECK(p.freq == f);
    }
    auto sorted = est.probes;
    std::sort(sorted.begin(), sorted.end(), [](const Probe& a, const Probe& b) { return a.value < b.value; });
    for (std::size_t k = 1; k < sorted.size(); ++k) CHECK(sorted[k].freq >= sorted[k - 1].freq);
}

TEST_CASE("threshold search: probes are monotone, frequencies match direct crossing runs") {
    const auto law = EnergyLaw::signed_power(1.0, 0.0);
    BisectionOptions o;
    o.replicas = 40;
    o.tol = 0.05;
    o.hi = 6.0;
    const auto est = estimate_zeta_c(2.0, 1.0, law, 2, 10.0, o, {12, 0});
    CHECK(est.probes.size() >= 3);
    auto sorted = est.probes;
    std::sort(sorted.begin(), sorted.end(), [](const Probe& a, const Probe& b) { return a.value < b.value; });
    for (std::size_t k = 1; k < sorted.size(); ++k) CHECK(sorted[k].freq >= sorted[k - 1].freq);
    for (const auto& p : est.probes) {
        CHECK(p.freq >= 0.0);
        CHECK(p.freq <= 1.0);
    }
    // probe frequencies equal explicit crossing frequencies on the same samples
    PppModel m;
    m.law = law;
    m.beta = 2.0;
    for (std::size_t k = 1; k < 3; ++k) {
        m.zeta = est.probes[k].value;
        const auto direct = crossing_probability(m, 10.0, 40, {12, 0}, Execution::parallel, 6.0);
        CHECK(direct.mean == est.probes[k].freq);
    }
    o.hi = 0.1;
    o.max_expansions = 1;
    CHECK_THROWS_AS(estimate_zeta_c(2.0, 1.0, law, 2, 10.0, o, {12, 0}), SearchError);
    o.tol = 0.0;
    CHECK_THROWS_AS(estimate_zeta_c(2.0, 1.0, law, 2, 10.0, o, {12, 0}), ParameterError);
}

TEST_CASE("critical conductance follows the beta scaling") {
    // zeta_c(8) / zeta_c(4) = 2^{1/3} with lambda_c cancelled; c_c = exp(-zeta_c)
    const auto law = EnergyLaw::signed_power(1.0, 0.0);
    BisectionOptions o;
    o.replicas = 200;
    const auto z4 = estimate_zeta_c(4.0, 1.0, law, 2, 24.0, o, {31, 0});
    const auto z8 = estimate_zeta_c(8.0, 1.0, law, 2, 24.0, o, {32, 0});
    CHECK(z8.value / z4.value == doctest::Approx(std::cbrt(2.0)).epsilon(0.10));
    CHECK(std::log(std::exp(-z8.value)) / std::log(std::exp(-z4.value)) == doctest::Approx(std::cbrt(2.0)).epsilon(0.10));
}

TEST_CASE("lambda_c lies between the Boolean sandwich thresholds") {
    BisectionOptions o;
    o.replicas = 200;
    o.tol = 0.05;
    const double L = 8.0;
    const auto lam = estimate_lambda_c(0.0, SignMode::signed_marks, 2, L, o, {41, 0});
    const auto outer = estimate_boolean_lambda_c(0.5, 2, L, o, {42, 0});
    const auto inner = estimate_boolean_lambda_c(0.1, 2, L, o, {43, 0});
    const double mass = nu_mass(EnergyLaw::signed_power(1.0, 0.0), 0.2);
    CHECK(outer.value <= lam.value);
    CHECK(lam.value <= inner.value / mass);
}

TEST_CASE("positive lambda_c is stable between L = 32 and L = 64") {
    BisectionOptions o;
    o.replicas = 200;
    const auto a = estimate_lambda_c(0.0, SignMode::positive, 2, 32.0, o, {51, 0});
    const auto b = estimate_lambda_c(0.0, SignMode::positive, 2, 64.0, o, {52, 0});
    CHECK(std::fabs(a.value - b.value) <= a.half_width + b.half_width);
}

TEST_CASE("predicted threshold and consistency with a direct estimate") {
    auto p = predicted_zeta_c(1.0, 1.0, 1.0, 0.0, 2, 8.0);
    CHECK(p.zeta_c == doctest::Approx(2.0));
    CHECK(p.c_c == doctest::Approx(std::exp(-2.0)));
    CHECK(p.valid);
    CHECK(p.chi == doctest::Approx(-1.0));
    for (double a : {0.0, 1.0, 3.0})
        for (int d : {1, 2, 3}) CHECK(predicted_zeta_c(2.0, 2.0, 0.5, a, d, 2.0).zeta_c == doctest::Approx(1.0));
    CHECK_FALSE(predicted_zeta_c(100.0, 1.0, 1.0, 0.0, 2, 1.0).valid);
    CHECK(predicted_zeta_c(8.0, 1.0, 2.0, 1.0, 1, 1.0).chi == doctest::Approx(-std::pow(32.0, 1.0 / 3.0)));
    CHECK_THROWS_AS(predicted_zeta_c(0.0, 1.0, 1.0, 0.0, 2, 1.0), ParameterError);

    BisectionOptions o;
    o.replicas = 200;
    const auto lam = estimate_lambda_c(0.0, SignMode::signed_marks, 2, 16.0, o, {61, 0});
    o.tol = 0.02;
    const auto z = estimate_zeta_c(4.0, 1.0, EnergyLaw::signed_power(1.0, 0.0), 2, 16.0 * 3.8, o, {62, 0});
    CHECK(predicted_zeta_c(lam.value, 1.0, 1.0, 0.0, 2, 4.0).zeta_c == doctest::Approx(z.value).epsilon(0.10));
}

TEST_CASE("crossing probabilities of G[zeta,beta] and its rescaled G[1,1] agree") {
    const auto law = EnergyLaw::signed_power(1.0, 0.0);
    const double zeta = 3.8, beta = 4.0, rho = 1.0, L = 24.0;
    PppModel orig{rho, law, 2, zeta, beta};
    PppModel res{rho * nu_mass(law, zeta / beta) * zeta * zeta, star_law(law, zeta / beta), 2, 1.0, 1.0};
    const auto a = crossing_probability(orig, L, 300, {71, 0});
    const auto b = crossing_probability(res, L / zeta, 300, {72, 0});
    CHECK(a.mean > 0.05);
    CHECK(a.mean < 0.95);
    CHECK(two_proportion_pvalue(static_cast<std::size_t>(std::lround(a.mean * 300)), 300,
                                static_cast<std::size_t>(std::lround(b.mean * 300)), 300) > 0.01);
}

TEST_CASE("Palm cluster diameter") {
    WeightedGraph g = with_edges(conf2d({{0, 0, 0}, {0.7, 0.3, 0}, {5, 5, 0}}), {{0, 1}});
    CHECK(cluster_diameter(g, 0) == doctest::Approx(0.7));
    CHECK(cluster_diameter(g, 2) == 0.0);
    // origin mark above zeta / beta: isolated
    auto c = conf2d({{0.1, 0, 0.0}, {0, 0.1, 0.0}, {0, 0, 0.9}});
    const auto iso = build_threshold_graph(c, 1.0, 1.0);
    CHECK(cluster_diameter(iso, 2) == 0.0);

    const auto law = EnergyLaw::positive_power(1.0, 0.0);
    const auto sub = palm_cluster_diameter(5.0, law, 1.0, 1.0, 2, 8.0, 200, {81, 0});
    CHECK(sub.valid);
    CHECK(sub.diameter.size() == 200);
    const auto serial = palm_cluster_diameter(5.0, law, 1.0, 1.0, 2, 8.0, 200, {81, 0}, Execution::serial);
    CHECK(serial.diameter == sub.diameter);
    const std::vector<double> levels{0.5, 1.0, 1.5, 2.0};
    const auto surv = survival_curve(sub.diameter, levels);
    for (std::size_t k = 1; k < surv.size(); ++k) CHECK(surv[k].survival <= surv[k - 1].survival);
    // supercritical intensity in a small window: clusters reach the boundary
    const auto sup = palm_cluster_diameter(40.0, law, 1.0, 1.0, 2, 3.0, 50, {82, 0});
    CHECK_FALSE(sup.valid);
    CHECK(sup.truncation_rate > 0.01);
}
