#pragma once

#include "hopnet/geometry.hpp"
#include "hopnet/point_process.hpp"

#include <cmath>
#include <initializer_list>
#include <vector>

namespace testing {

using hopnet::Box;
using hopnet::MarkedConfiguration;
using hopnet::MarkedPoint;
using hopnet::Point;

struct P {
    double x1, x2, e;
};

inline MarkedConfiguration conf2d(std::initializer_list<P> pts, double radius = 100.0) {
    MarkedConfiguration c;
    c.dim = 2;
    c.window = Box::centered(2, radius);
    for (const auto& p : pts) c.points.push_back({Point{p.x1, p.x2, 0.0}, p.e});
    return c;
}

inline double poisson_pmf(int k, double mu) {
    return std::exp(k * std::log(mu) - mu - std::lgamma(k + 1.0));
}

/// Pearson statistic of counts against Poisson(mu) with bins 0..top-1 and
/// a tail bin top+. Degrees of freedom: top.
inline double poisson_chi2(const std::vector<long long>& counts, double mu, int top) {
    std::vector<double> obs(top + 1, 0.0), expct(top + 1, 0.0);
    for (long long c : counts) obs[c >= top ? top : c] += 1.0;
    double head = 0.0;
    for (int k = 0; k < top; ++k) {
        expct[k] = poisson_pmf(k, mu) * counts.size();
        head += poisson_pmf(k, mu);
    }
    expct[top] = (1.0 - head) * counts.size();
    double chi2 = 0.0;
    for (int k = 0; k <= top; ++k) chi2 += (obs[k] - expct[k]) * (obs[k] - expct[k]) / expct[k];
    return chi2;
}

/// Gaussian elimination with partial pivoting; a is n x n row-major.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c * n + k] * x[k];
        x[c] = s / a[c * n + c];
    }
    return x;
}

inline double variance(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return v / (xs.size() - 1);
}

}  // namespace testing
