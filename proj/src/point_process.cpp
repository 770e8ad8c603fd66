#include "hopnet/point_process.hpp"

#include "hopnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hopnet {

namespace {

void check_window(const Box& w) {
    validate_dimension(w.dim);
    for (int k = 0; k < w.dim; ++k)
        if (!(w.hi[k] > w.lo[k]) || !std::isfinite(w.lo[k]) || !std::isfinite(w.hi[k]))
            throw ParameterError("window must have positive, finite extent in every axis");
}

Point uniform_point(const Box& w, Philox& rng) {
    Point x{};
    for (int k = 0; k < w.dim; ++k) x[k] = w.lo[k] + rng.uniform() * (w.hi[k] - w.lo[k]);
    return x;
}

std::size_t poisson_count(double mean, Philox& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<long long> dist(mean);
    return static_cast<std::size_t>(dist(rng));
}

}  // namespace

void MarkedConfiguration::validate() const {
    validate_dimension(dim);
    if (window.dim != dim) throw ParameterError("window dimension differs from configuration");
    for (const auto& p : points) {
        for (int k = 0; k < dim; ++k)
            if (!std::isfinite(p.x[k])) throw ParameterError("non-finite coordinate");
        if (!std::isfinite(p.e)) throw ParameterError("non-finite energy mark");
        if (!window.contains(p.x)) throw ParameterError("point outside window");
    }
    std::vector<Point> sorted;
    sorted.reserve(points.size());
    for (const auto& p : points) sorted.push_back(p.x);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ParameterError("two points share a position");
}

MarkedConfiguration sample_marked_ppp(double rho, const EnergyLaw& law, const Box& window,
                                      RngSeed seed) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("intensity must be >= 0");
    check_window(window);
    MarkedConfiguration conf{window.dim, window, {}};
    Philox rng(seed);
    const std::size_t n = poisson_count(rho * window.volume(), rng);
    conf.points.resize(n);
    for (auto& p : conf.points) {
        p.x = uniform_point(window, rng);
        p.e = law.sample(rng);
    }
    return conf;
}

CoupledSample sample_coupled_ppp(double rho_max, const EnergyLaw& law, const Box& window,
                                 RngSeed seed) {
    if (!(rho_max >= 0.0) || !std::isfinite(rho_max))
        throw ParameterError("intensity must be >= 0");
    check_window(window);
    CoupledSample out{{window.dim, window, {}}, {}};
    Philox rng(seed);
    const std::size_t n = poisson_count(rho_max * window.volume(), rng);
    out.conf.points.resize(n);
    out.retention.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.conf.points[i].x = uniform_point(window, rng);
        out.conf.points[i].e = law.sample(rng);
        out.retention[i] = rng.uniform();
    }
    return out;
}

std::vector<std::size_t> truncate_indices(const MarkedConfiguration& conf, double gamma) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < conf.points.size(); ++i)
        if (std::fabs(conf.points[i].e) <= gamma) idx.push_back(i);
    return idx;
}

MarkedConfiguration truncate(const MarkedConfiguration& conf, double gamma) {
    MarkedConfiguration out{conf.dim, conf.window, {}};
    for (const auto& p : conf.points)
        if (std::fabs(p.e) <= gamma) out.points.push_back(p);
    return out;
}

MarkedConfiguration mott_rescale(const MarkedConfiguration& conf, double zeta, double beta) {
    if (!(zeta > 0.0) || !(beta > 0.0)) throw ParameterError("zeta and beta must be positive");
    MarkedConfiguration out{conf.dim, conf.window, {}};
    for (int k = 0; k < conf.dim; ++k) {
        out.window.lo[k] = conf.window.lo[k] / zeta;
        out.window.hi[k] = conf.window.hi[k] / zeta;
    }
    const double gamma = zeta / beta;
    for (const auto& p : conf.points) {
        if (!(std::fabs(p.e) <= gamma)) continue;
        MarkedPoint q;
        for (int k = 0; k < conf.dim; ++k) q.x[k] = p.x[k] / zeta;
        q.e = beta * p.e / zeta;
        out.points.push_back(q);
    }
    return out;
}

double mott_length(double lambda, double rho, double c0, double alpha, int dim, double beta) {
    return mott_length_general(lambda, rho, std::pow(c0, -(alpha + 1.0)), alpha, dim, beta);
}

double mott_length_general(double lambda, double rho, double small_scale_constant, double alpha,
                           int dim, double beta) {
    if (!(lambda > 0.0) || !(rho > 0.0) || !(small_scale_constant > 0.0) || !(beta > 0.0) ||
        !(alpha >= 0.0) || dim < 1)
        throw ParameterError("mott_length parameters must be positive");
    const double denom = alpha + 1.0 + dim;
    return std::pow(lambda / (small_scale_constant * rho), 1.0 / denom) *
           std::pow(beta, (alpha + 1.0) / denom);
}

MarkedConfiguration palm_augment(const MarkedConfiguration& conf, const EnergyLaw& law,
                                 RngSeed seed) {
    const Point origin{};
    if (!conf.window.contains(origin)) throw ParameterError("origin outside window");
    MarkedConfiguration out = conf;
    Philox rng(seed);
    out.points.push_back({origin, law.sample(rng)});
    return out;
}

MarkedConfiguration sample_perturbed_lattice(double spacing, double jitter, const EnergyLaw& law,
                                             const Box& window, RngSeed seed) {
    if (!(spacing > 0.0)) throw ParameterError("lattice spacing must be positive");
    if (!(jitter >= 0.0 && jitter <= 0.5)) throw ParameterError("jitter must be in [0, 1/2]");
    check_window(window);
    const int d = window.dim;
    std::array<long long, kMaxDim> cells{1, 1, 1};
    long long total = 1;
    for (int k = 0; k < d; ++k) {
        cells[k] = static_cast<long long>(std::floor(window.extent(k) / spacing));
        total *= cells[k];
    }
    MarkedConfiguration conf{d, window, {}};
    conf.points.reserve(static_cast<std::size_t>(std::max(0LL, total)));
    Philox rng(seed);
    std::array<long long, kMaxDim> idx{0, 0, 0};
    for (long long c = 0; c < total; ++c) {
        long long rem = c;
        for (int k = 0; k < d; ++k) {
            idx[k] = rem % cells[k];
            rem /= cells[k];
        }
        MarkedPoint p;
        for (int k = 0; k < d; ++k) {
            const double centre = window.lo[k] + (static_cast<double>(idx[k]) + 0.5) * spacing;
            p.x[k] = centre + jitter * spacing * (2.0 * rng.uniform() - 1.0);
        }
        p.e = law.sample(rng);
        conf.points.push_back(p);
    }
    return conf;
}

}  // namespace hopnet
