#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace hopnet {

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error of the mean.
MeanEstimate mean_stderr(std::span<const double> xs);

/// Binomial frequency k / n with standard error sqrt(p (1 - p) / n).
MeanEstimate binomial(std::size_t k, std::size_t n);

/// Upper tail P(X >= x) of a chi-square law with df degrees of freedom.
double chi_square_sf(double x, double df);

/// Upper tail of the standard normal law.
double normal_sf(double z);

/// Quantile of the Student t law.
double student_t_quantile(double p, double df);

/// Kolmogorov-Smirnov statistic sup |F_n - F| of a sample against a CDF.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Asymptotic p-value of the one-sample KS test with sample size n.
double ks_pvalue(double statistic, std::size_t n);

/// Two-sided p-value of the pooled two-proportion z-test.
double two_proportion_pvalue(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2);

/// Least-squares fit y = intercept + slope x with a 95% confidence interval
/// on the slope.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double slope_lo = 0.0;
    double slope_hi = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace hopnet
