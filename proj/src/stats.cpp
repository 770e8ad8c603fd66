#include "hopnet/stats.hpp"

#include "hopnet/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace hopnet {

MeanEstimate mean_stderr(std::span<const double> xs) {
    MeanEstimate out;
    out.n = xs.size();
    if (xs.empty()) return out;
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double q = 0.0;
        for (double x : xs) q += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(q / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return out;
}

MeanEstimate binomial(std::size_t k, std::size_t n) {
    MeanEstimate out;
    out.n = n;
    if (n == 0) return out;
    const double p = static_cast<double>(k) / static_cast<double>(n);
    out.mean = p;
    out.se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return out;
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x));
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double student_t_quantile(double p, double df) {
    return boost::math::quantile(boost::math::students_t(df), p);
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
    std::vector<double> xs(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_pvalue(double statistic, std::size_t n) {
    if (n == 0) return 1.0;
    const double sn = std::sqrt(static_cast<double>(n));
    // Stephens' finite-n correction of the Kolmogorov limit law
    const double t = (sn + 0.12 + 0.11 / sn) * statistic;
    if (t < 0.2) return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        p += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

double two_proportion_pvalue(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2) {
    if (n1 == 0 || n2 == 0) throw StatisticsError("two-proportion test needs nonempty samples");
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double p = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    const double se = std::sqrt(p * (1.0 - p) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    if (se == 0.0) return p1 == p2 ? 1.0 : 0.0;
    return 2.0 * normal_sf(std::fabs(p1 - p2) / se);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw StatisticsError("linear fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw StatisticsError("linear fit needs distinct abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
        const double q = student_t_quantile(0.975, n - 2.0);
        f.slope_lo = f.slope - q * f.slope_stderr;
        f.slope_hi = f.slope + q * f.slope_stderr;
    } else {
        f.slope_lo = f.slope_hi = f.slope;
    }
    return f;
}

}  // namespace hopnet
