#include "hopnet/errors.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/io.hpp"
#include "hopnet/point_process.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

using namespace hopnet;
using testing::conf2d;

namespace {

using PairSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

PairSet pairs_of(const WeightedGraph& g) {
    PairSet s;
    for (const auto& e : g.edges) s.emplace(e.i, e.j);
    return s;
}

// independent predicate evaluation over all pairs
PairSet threshold_oracle(const MarkedConfiguration& c, double zeta, double beta) {
    PairSet s;
    for (std::uint32_t i = 0; i < c.size(); ++i)
        for (std::uint32_t j = i + 1; j < c.size(); ++j) {
            const double r = std::hypot(c.points[i].x[0] - c.points[j].x[0], c.points[i].x[1] - c.points[j].x[1]);
            const double a = c.points[i].e, b = c.points[j].e;
            if (r + beta * (std::fabs(a) + std::fabs(b) + std::fabs(a - b)) <= zeta) s.emplace(i, j);
        }
    return s;
}

MarkedConfiguration random_conf(double rho, double radius, std::uint64_t stream,
                                EnergyLaw law = EnergyLaw::signed_power(1.0, 0.0)) {
    return sample_marked_ppp(rho, law, Box::centered(2, radius), {404, stream});
}

bool subset(const PairSet& a, const PairSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("energy_term branches") {
    CHECK(energy_term(0.0, 0.0) == 0.0);
    CHECK(energy_term(0.1, 0.3) == doctest::Approx(0.6));
    CHECK(energy_term(0.5, -0.5) == doctest::Approx(2.0));
    for (double a = -1.0; a <= 1.0; a += 0.125)
        for (double b = -1.0; b <= 1.0; b += 0.125) {
            if (a * b >= 0) CHECK(energy_term(a, b) == doctest::Approx(2.0 * std::max(std::fabs(a), std::fabs(b))));
            if (a * b <= 0) CHECK(energy_term(a, b) == doctest::Approx(2.0 * std::fabs(a - b)));
        }
}

TEST_CASE("conductance") {
    const Point o{0, 0, 0}, e1{1, 0, 0}, y{0.3, 0, 0};
    CHECK(conductance(o, e1, 0.0, 0.0, 3.0, 2) == doctest::Approx(std::exp(-1.0)));
    CHECK(conductance(o, y, 0.1, -0.1, 1.0, 2) == doctest::Approx(std::exp(-0.7)));
    CHECK(conductance(o, y, 0.1, -0.1, 1.0, 2) == doctest::Approx(0.4966).epsilon(1e-4));
    CHECK_THROWS_AS(conductance(o, o, 0.0, 0.0, 1.0, 2), DomainError);
    double prev = 1.0;
    for (double beta = 0.5; beta < 50; beta *= 1.5) {
        const double c = conductance(o, y, 0.2, 0.1, beta, 2);
        CHECK(c < prev);
        prev = c;
    }
    CHECK(prev < 1e-7);
    CHECK(conductance(o, e1, 0.0, 0.0, 1.0, 2, 0.5) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("threshold graph examples") {
    const auto pair = conf2d({{0, 0, 0.1}, {0.3, 0, -0.1}});
    auto g = build_threshold_graph(pair, 1.0, 1.0);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].weight == doctest::Approx(std::exp(-0.7)));
    CHECK(build_threshold_graph(pair, 0.69, 1.0).edges.empty());

    const auto hot = conf2d({{0, 0, 0.6}, {0.01, 0, 0.7}, {0, 0.01, -0.55}});
    CHECK(build_threshold_graph(hot, 1.0, 1.0).edges.empty());
    CHECK_THROWS_AS(build_threshold_graph(pair, 0.0, 1.0), ParameterError);
    // equality is an edge
    const auto tie = conf2d({{0, 0, 0.0}, {0.5, 0, 0.0}});
    CHECK(build_threshold_graph(tie, 0.5, 1.0).edges.size() == 1);
}

TEST_CASE("threshold graph matches the pairwise predicate, cell list equals brute force") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto c = random_conf(3.0, 6.0, s);
        REQUIRE(c.size() <= 600);
        const double zeta = 0.5 + 0.1 * static_cast<double>(s), beta = 0.3 + 0.2 * static_cast<double>(s % 7);
        const auto cell = build_threshold_graph(c, zeta, beta, PairSearch::cell_list);
        const auto brute = build_threshold_graph(c, zeta, beta, PairSearch::brute_force);
        CHECK(pairs_of(cell) == threshold_oracle(c, zeta, beta));
        CHECK(edge_pairs(cell) == edge_pairs(brute));
        for (const auto& e : cell.edges) {
            CHECK(e.i < e.j);
            CHECK(e.weight >= std::exp(-zeta));
            CHECK(e.weight < 1.0);
        }
        std::vector<Point> pts;
        for (const auto& p : c.points) pts.push_back(p.x);
        CHECK(edge_pairs(build_boolean_graph(pts, 2, 0.3 * zeta)) ==
              edge_pairs(build_boolean_graph(pts, 2, 0.3 * zeta, PairSearch::brute_force)));
    }
    // 1d and 3d
    for (int d : {1, 3}) {
        const auto c = sample_marked_ppp(2.0, EnergyLaw::positive_power(1.0, 1.0), Box::centered(d, 4.0), {9, 9});
        CHECK(edge_pairs(build_threshold_graph(c, 2.0, 1.0)) ==
              edge_pairs(build_threshold_graph(c, 2.0, 1.0, PairSearch::brute_force)));
    }
}

TEST_CASE("edge count monotone in zeta and beta") {
    const auto c = random_conf(2.0, 6.0, 77);
    std::size_t prev = 0;
    for (double z = 0.2; z < 4.0; z += 0.2) {
        const auto n = build_threshold_graph(c, z, 1.0).edges.size();
        CHECK(n >= prev);
        prev = n;
    }
    prev = SIZE_MAX;
    for (double b = 0.1; b < 5.0; b += 0.3) {
        const auto n = build_threshold_graph(c, 2.0, b).edges.size();
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("Boolean sandwich of the threshold graph") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto c = random_conf(4.0, 5.0, 100 + s);
        const double zeta = 0.5 + 0.15 * static_cast<double>(s % 10), beta = 0.5 + 0.3 * static_cast<double>(s % 6);
        const auto g = pairs_of(build_threshold_graph(c, zeta, beta));
        std::vector<Point> all;
        for (const auto& p : c.points) all.push_back(p.x);
        const auto outer = pairs_of(build_boolean_graph(all, 2, zeta / 2.0));
        CHECK(subset(g, outer));
        const auto idx = truncate_indices(c, zeta / (5.0 * beta));
        std::vector<Point> low;
        for (auto i : idx) low.push_back(c.points[i].x);
        PairSet inner;
        for (const auto& e : build_boolean_graph(low, 2, zeta / 10.0).edges)
            inner.emplace(static_cast<std::uint32_t>(idx[e.i]), static_cast<std::uint32_t>(idx[e.j]));
        CHECK(subset(inner, g));
    }
}

TEST_CASE("Boolean graph examples") {
    const double r = 0.25;
    std::vector<Point> two{{0, 0, 0}, {2 * r, 0, 0}};
    CHECK(build_boolean_graph(two, 2, r).edges.size() == 1);
    two[1][0] = 2 * r + 1e-9;
    CHECK(build_boolean_graph(two, 2, r).edges.empty());
    std::vector<Point> line;
    for (int i = 0; i < 8; ++i) line.push_back({i * r, 0, 0});
    const auto path = build_boolean_graph(line, 2, r);
    // spacing r and reach 2r: i ~ i+1 and i ~ i+2
    CHECK(path.edges.size() == 7 + 6);
    const auto strict = build_boolean_graph(line, 2, 0.6 * r);
    REQUIRE(strict.edges.size() == 7);
    for (std::uint32_t k = 0; k < 7; ++k) {
        CHECK(strict.edges[k].i == k);
        CHECK(strict.edges[k].j == k + 1);
    }
    CHECK_THROWS_AS(build_boolean_graph(line, 2, 0.0), ParameterError);
}

TEST_CASE("Miller-Abrahams network on the stripe") {
    const StripeGeometry geo{2, 4.0};
    const auto three = conf2d({{-2.5, 0, 0.1}, {0, 0, 0.0}, {2.5, 0, -0.1}});
    const auto net = build_ma_network(three, 1.0, geo, 0.0);
    REQUIRE(net.edges.size() == 2);
    CHECK(net.edges[0].i == 0);
    CHECK(net.edges[0].j == 1);
    CHECK(net.edges[1].i == 1);
    CHECK(net.edges[1].j == 2);
    CHECK(net.edges[0].weight == doctest::Approx(std::exp(-2.5 - 0.2)));

    try {
        build_ma_network(conf2d({{0, 0, 0}, {2.5, 0, 0}}), 1.0, geo, 0.0);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("S_l^-") != std::string::npos);
    }
    CHECK_THROWS_AS(build_ma_network(conf2d({{-3, 0, 0}, {2.5, 0, 0}}), 1.0, geo, 0.0), PreconditionError);
    CHECK_THROWS_AS(build_ma_network(conf2d({{-3, 0, 0}, {0, 0, 0}}), 1.0, geo, 0.0), PreconditionError);
}

TEST_CASE("MA network: complete on qualifying pairs, monotone cutoff, G[zeta,beta] restriction") {
    const StripeGeometry geo{2, 6.0};
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto c = sample_marked_ppp(1.5, EnergyLaw::signed_power(1.0, 0.0), geo.window(2.0), {55, s});
        const double beta = 0.5 + 0.4 * static_cast<double>(s);
        const auto full = build_ma_network(c, beta, geo, 0.0);
        // oracle count of qualifying pairs
        std::vector<std::size_t> in;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (geo.in_stripe(c.points[i].x)) in.push_back(i);
        std::size_t expected = 0;
        for (std::size_t a = 0; a < in.size(); ++a)
            for (std::size_t b = a + 1; b < in.size(); ++b)
                if (geo.classify(c.points[in[a]].x) == Region::box || geo.classify(c.points[in[b]].x) == Region::box)
                    ++expected;
        CHECK(full.edges.size() == expected);
        CHECK(full.vertex_count() == in.size());

        auto prev = pairs_of(full);
        for (double cm : {1e-6, 1e-4, 1e-3, 1e-2}) {
            const auto cut = build_ma_network(c, beta, geo, cm);
            const auto brute = build_ma_network(c, beta, geo, cm, PairSearch::brute_force);
            CHECK(edge_pairs(cut) == edge_pairs(brute));
            const auto now = pairs_of(cut);
            CHECK(subset(now, prev));
            for (const auto& e : cut.edges) CHECK(e.weight >= cm);
            prev = now;
        }

        const double zeta = 2.5;
        PairSet restricted;
        for (const auto& e : full.edges)
            if (std::fabs(full.energies[e.i]) <= zeta / beta && std::fabs(full.energies[e.j]) <= zeta / beta &&
                e.weight >= std::exp(-zeta))
                restricted.emplace(static_cast<std::uint32_t>(full.source_index[e.i]),
                                   static_cast<std::uint32_t>(full.source_index[e.j]));
        const auto g = build_threshold_graph(c, zeta, beta);
        PairSet stripe_edges;
        for (const auto& e : g.edges) {
            const Region a = geo.classify(g.positions[e.i]), b = geo.classify(g.positions[e.j]);
            if (a != Region::outside && b != Region::outside && (a == Region::box || b == Region::box))
                stripe_edges.emplace(e.i, e.j);
        }
        CHECK(restricted == stripe_edges);
    }
}

TEST_CASE("default cutoff respects the dropped-weight budget") {
    const StripeGeometry geo{2, 12.0};
    const auto c = sample_marked_ppp(1.0, EnergyLaw::signed_power(1.0, 0.0), geo.window(4.0), {66, 1});
    const auto choice = default_cutoff(c, 2.0, geo);
    CHECK(choice.c_min > 0.0);
    CHECK(choice.zeta_cut == doctest::Approx(-std::log(choice.c_min)));
    const auto full = build_ma_network(c, 2.0, geo, 0.0);
    double dropped = 0.0;
    for (const auto& e : full.edges)
        if (e.weight < choice.c_min) dropped += e.weight;
    CHECK(dropped == doctest::Approx(choice.dropped_weight));
    CHECK(dropped <= 1e-6 * choice.min_degree);

    // nothing small enough to drop: no cutoff
    const auto tiny = conf2d({{-6.5, 0, 0.0}, {0, 0, 0.0}, {6.5, 0, 0.0}});
    CHECK(default_cutoff(tiny, 1.0, geo).c_min == 0.0);
}

TEST_CASE("rescaling isomorphism") {
    const auto law = EnergyLaw::signed_power(1.0, 0.0);
    const auto c = random_conf(2.0, 5.0, 1, law);
    CHECK(rescale_isomorphism_check(c, 1.0, 1.0));
    Philox rng({5, 5});
    bool caught = false;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const double zeta = 0.5 + 3.5 * rng.uniform(), beta = 0.5 + 3.5 * rng.uniform();
        const auto conf = random_conf(3.0, 6.0, 1000 + s, law);
        CHECK(rescale_isomorphism_check(conf, zeta, beta));
        auto bad = mott_rescale(conf, zeta, beta);
        // push one mark across an edge threshold when possible
        const auto g = build_threshold_graph(bad, 1.0, 1.0);
        for (const auto& e : g.edges) {
            const double slack = 1.0 - (distance(bad.points[e.i].x, bad.points[e.j].x, 2) +
                                        energy_term(bad.points[e.i].e, bad.points[e.j].e));
            if (slack < 1e-3) {
                bad.points[e.i].e += bad.points[e.i].e >= 0 ? 1e-3 : -1e-3;
                if (!rescale_isomorphism_check(conf, zeta, beta, bad)) caught = true;
                break;
            }
        }
        if (!caught && !bad.empty()) {
            bad.points[0].e += 1e-3;
            caught = !rescale_isomorphism_check(conf, zeta, beta, bad) || caught;
        }
    }
    CHECK(caught);
}

TEST_CASE("stripe network of a general graph") {
    const StripeGeometry geo{2, 4.0};
    std::vector<Point> pts{{-2.5, 0, 0}, {0, 0, 0}, {2.5, 0, 0}, {0, 3, 0}, {-3, 0.5, 0}};
    auto g = build_boolean_graph(pts, 2, 10.0);
    const auto s = stripe_network(g, geo, true);
    CHECK(s.vertex_count() == 4);
    // edges touching the box: 0-1, 1-2, 1-4 (index 3 is outside, 0-4 and 0-2 lack a box end)
    CHECK(s.edges.size() == 3);
    for (const auto& e : s.edges) CHECK(e.weight == 1.0);
    const auto adj = make_adjacency(s);
    CHECK(adj.degree(1) == 3);
}

TEST_CASE("configuration JSON round trip and graph export") {
    const auto c = random_conf(1.0, 3.0, 8);
    const auto j = to_json(c);
    const auto back = configuration_from_json(Json::parse(j.dump()));
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back.points[i].x == c.points[i].x);
        CHECK(back.points[i].e == c.points[i].e);
    }
    CHECK(j.begin().key() == "dimension");
    CHECK_THROWS_AS(configuration_from_json(Json::parse(R"({"dimension":2})")), ParameterError);

    const auto dir = std::filesystem::temp_directory_path() / "hopnet_graph_export";
    std::filesystem::remove_all(dir);
    const auto g = build_threshold_graph(c, 2.0, 1.0);
    write_graph(g, dir);
    std::ifstream edges(dir / "edges.csv");
    std::string line;
    std::getline(edges, line);
    CHECK(line == "i,j,weight");
    std::size_t rows = 0;
    while (std::getline(edges, line)) ++rows;
    CHECK(rows == g.edges.size());
    std::ifstream verts(dir / "vertices.csv");
    std::getline(verts, line);
    CHECK(line == "index,x1,x2,e");
    const auto meta = Json::parse(std::ifstream(dir / "graph.json"));
    CHECK(meta["zeta"].get<double>() == 2.0);
    CHECK(format_double(0.1) == "0.10000000000000001");
}
