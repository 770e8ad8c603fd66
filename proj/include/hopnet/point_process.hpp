#pragma once

#include "hopnet/energy_law.hpp"
#include "hopnet/geometry.hpp"
#include "hopnet/rng.hpp"

#include <cstddef>
#include <vector>

namespace hopnet {

struct MarkedPoint {
    Point x{};
    double e = 0.0;
};

/// Finite realisation of a marked point process inside a window.
struct MarkedConfiguration {
    int dim = 2;
    Box window{};
    std::vector<MarkedPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    /// Throws ParameterError when a point is non-finite, outside the window,
    /// or two points share a position.
    void validate() const;
};

/// Poisson process of intensity rho in the window with i.i.d. marks ~ law.
MarkedConfiguration sample_marked_ppp(double rho, const EnergyLaw& law, const Box& window,
                                      RngSeed seed);

/// Poisson sample at intensity rho_max with one extra uniform per point. The
/// points with retention < rho / rho_max form a PPP of intensity rho, and the
/// family is increasing in rho.
struct CoupledSample {
    MarkedConfiguration conf;
    std::vector<double> retention;
};
CoupledSample sample_coupled_ppp(double rho_max, const EnergyLaw& law, const Box& window,
                                 RngSeed seed);

/// Indices of the points with |E| <= gamma, in order.
std::vector<std::size_t> truncate_indices(const MarkedConfiguration& conf, double gamma);
/// Keeps exactly the points with |E| <= gamma.
MarkedConfiguration truncate(const MarkedConfiguration& conf, double gamma);

/// {(x / zeta, beta E / zeta) : |E| <= zeta / beta}, window scaled by 1 / zeta.
MarkedConfiguration mott_rescale(const MarkedConfiguration& conf, double zeta, double beta);

/// (lambda / rho)^{1/(a+1+d)} (C0 beta)^{(a+1)/(a+1+d)}.
double mott_length(double lambda, double rho, double c0, double alpha, int dim, double beta);
/// (lambda / (C_* rho))^{1/(a+1+d)} beta^{(a+1)/(a+1+d)} for a general mark law.
double mott_length_general(double lambda, double rho, double small_scale_constant, double alpha,
                           int dim, double beta);

/// Adds a point at the origin with an independent mark ~ law.
MarkedConfiguration palm_augment(const MarkedConfiguration& conf, const EnergyLaw& law,
                                 RngSeed seed);

/// One point per lattice cell of side `spacing` tiling the window from its
/// lower corner, displaced uniformly by up to jitter * spacing per coordinate.
MarkedConfiguration sample_perturbed_lattice(double spacing, double jitter, const EnergyLaw& law,
                                             const Box& window, RngSeed seed);

}  // namespace hopnet
