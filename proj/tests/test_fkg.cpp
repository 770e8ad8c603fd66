#include "hopnet/errors.hpp"
#include "hopnet/fkg.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace hopnet;

namespace {

double w(double a, double b) { return std::fabs(a) + std::fabs(b) + std::fabs(a - b); }
bool oracle_A(double a, double b, double c) { return w(a, b) > 3.0 && w(b, c) > 4.0 - std::sqrt(2.0); }
bool oracle_B(double a, double c) { return w(a, c) > 3.0; }

constexpr int kSteps = 2000;  // resolution 1e-3 on [-1, 1]
double node(int k) { return -1.0 + 2.0 * k / kSteps; }

}  // namespace

TEST_CASE("hand-computed examples") {
    auto z = fkg_events(0, 0, 0);
    CHECK_FALSE(z.A);
    CHECK_FALSE(z.B);
    auto a = fkg_events(0.9, -0.9, 0.9);
    CHECK(a.A);
    CHECK_FALSE(a.B);
    CHECK(fkg_events(0.9, 0.9, -0.9).B);
}

TEST_CASE("events agree with an independent formula on a grid") {
    for (int i = 0; i <= 200; i += 3)
        for (int j = 0; j <= 200; j += 7)
            for (int k = 0; k <= 200; k += 5) {
                const double e0 = -1 + i / 100.0, e1 = -1 + j / 100.0, e2 = -1 + k / 100.0;
                const auto ev = fkg_events(e0, e1, e2);
                CHECK(ev.A == oracle_A(e0, e1, e2));
                CHECK(ev.B == oracle_B(e0, e2));
            }
}

TEST_CASE("sign lemma on a fine grid") {
    std::size_t bad = 0;
    for (int i = 0; i <= kSteps; ++i)
        for (int j = 0; j <= kSteps; ++j) {
            const double a = node(i), b = node(j);
            if (w(a, b) > 2.0 && !(a * b < 0.0)) ++bad;
        }
    CHECK(bad == 0);
}

TEST_CASE("A and B are disjoint on the 1e-3 grid") {
    // coarse literal scan of all triples
    std::size_t hits = 0;
    for (int i = 0; i <= kSteps; i += 5)
        for (int j = 0; j <= kSteps; j += 5)
            for (int k = 0; k <= kSteps; k += 5) {
                const auto ev = fkg_events(node(i), node(j), node(k));
                hits += ev.A && ev.B;
            }
    CHECK(hits == 0);

    // full resolution: for each e1 the admissible e0 (resp. e2) form a grid set S0 (S2).
    // w(a, c) depends on |a|, |c| and sign agreement and is nondecreasing in |a|, |c|,
    // so B fails on S0 x S2 iff it fails at the extreme points of each sign class.
    for (int j = 0; j <= kSteps; ++j) {
        const double e1 = node(j);
        double s0[2] = {-1, -1}, s2[2] = {-1, -1};  // largest |e| among negatives / positives, -1 if none
        for (int i = 0; i <= kSteps; ++i) {
            const double e = node(i);
            const int sgn = e > 0 ? 1 : 0;
            if (w(e, e1) > 3.0) s0[sgn] = std::max(s0[sgn], std::fabs(e));
            if (w(e1, e) > 4.0 - std::sqrt(2.0)) s2[sgn] = std::max(s2[sgn], std::fabs(e));
        }
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                if (s0[p] < 0 || s2[q] < 0) continue;
                const double a = p ? s0[p] : -s0[p], c = q ? s2[q] : -s2[q];
                CHECK_FALSE(fkg_events(a, e1, c).B);
            }
    }
}

TEST_CASE("Monte-Carlo frequencies against integration oracles") {
    // P(B): midpoint rule on [-1, 1]^2
    double pb = 0.0;
    const int n2 = kSteps;
    for (int i = 0; i < n2; ++i)
        for (int k = 0; k < n2; ++k) pb += oracle_B(-1 + (i + 0.5) * 2.0 / n2, -1 + (k + 0.5) * 2.0 / n2);
    pb /= static_cast<double>(n2) * n2;
    CHECK(pb == doctest::Approx(1.0 / 16).epsilon(1e-3));

    double pa = 0.0;
    const int n3 = 200;
    for (int i = 0; i < n3; ++i)
        for (int j = 0; j < n3; ++j)
            for (int k = 0; k < n3; ++k)
                pa += oracle_A(-1 + (i + 0.5) * 2.0 / n3, -1 + (j + 0.5) * 2.0 / n3, -1 + (k + 0.5) * 2.0 / n3);
    pa /= std::pow(static_cast<double>(n3), 3);

    const auto est = fkg_probabilities(1'000'000, {10, 0});
    CHECK(est.samples == 1'000'000);
    CHECK(est.count_AB == 0);
    CHECK(est.PAB == 0.0);
    CHECK(std::fabs(est.PB - pb) < 3.0 * est.se_B);
    CHECK(est.PA > 3.0 * est.se_A);
    CHECK(std::fabs(est.PA - pa) < 3.0 * est.se_A + 0.01 * pa);

    const auto serial = fkg_probabilities(100'000, {11, 0}, Execution::serial);
    const auto par = fkg_probabilities(100'000, {11, 0}, Execution::parallel);
    CHECK(serial.count_A == par.count_A);
    CHECK(serial.count_B == par.count_B);
    CHECK_THROWS_AS(fkg_probabilities(9999, {11, 0}), ParameterError);
}
