#pragma once

#include "hopnet/rng.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hopnet {

enum class LawKind { positive_power, signed_power, general_table };

std::string_view to_string(LawKind k);
LawKind law_kind_from_string(std::string_view s);

/// Distribution of the energy marks.
///
/// positive_power: density (a+1) C0^{-a-1} E^a on [0, C0].
/// signed_power:   density (a+1) C0^{-a-1} |E|^a / 2 on [-C0, C0].
/// general_table:  piecewise-linear density through user grid points, zero
///                 outside the grid, normalised to mass one.
///
/// For the power laws the agreement radius epsilon equals C0. For tables,
/// alpha and epsilon are metadata describing the behaviour near the origin
/// and C0 is derived from the small-scale constant C_* = C0^{-a-1}.
class EnergyLaw {
public:
    static EnergyLaw positive_power(double c0, double alpha);
    static EnergyLaw signed_power(double c0, double alpha);
    static EnergyLaw table(std::vector<double> grid, std::vector<double> density,
                           double alpha = 0.0, double epsilon = 0.0);
    /// Uniform law on [a, b] as a two-point table.
    static EnergyLaw uniform(double a, double b);

    LawKind kind() const { return kind_; }
    double c0() const { return c0_; }
    double alpha() const { return alpha_; }
    double epsilon() const { return epsilon_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& densities() const { return density_; }

    double support_lo() const;
    double support_hi() const;
    double support_radius() const;

    double density(double e) const;
    /// nu((-inf, e]).
    double cdf(double e) const;
    /// Generalised inverse of the cdf on [0, 1].
    double quantile(double u) const;
    /// nu([-gamma, gamma]).
    double mass(double gamma) const;
    /// C_* = lim_{g -> 0} nu([-g, g]) / g^{alpha+1}.
    double small_scale_constant() const;

    /// Law conditioned on [-gamma, gamma].
    EnergyLaw conditioned(double gamma) const;
    /// Law of X / gamma given |X| <= gamma.
    EnergyLaw star(double gamma) const;

    double sample(Philox& rng) const { return quantile(rng.uniform()); }

    std::string describe() const;

    friend bool operator==(const EnergyLaw&, const EnergyLaw&) = default;

private:
    EnergyLaw() = default;
    EnergyLaw restricted_table(double gamma) const;
    std::size_t segment_of(double e) const;

    LawKind kind_ = LawKind::signed_power;
    double c0_ = 1.0;
    double alpha_ = 0.0;
    double epsilon_ = 1.0;
    std::vector<double> grid_;
    std::vector<double> density_;
    std::vector<double> cumulative_;  // mass up to grid_[i]
};

/// nu([-gamma, gamma]).
double nu_mass(const EnergyLaw& law, double gamma);
/// nu_gamma: law conditioned on [-gamma, gamma].
EnergyLaw conditioned_law(const EnergyLaw& law, double gamma);
/// nu_{*,gamma}: rescaled conditioned law supported in [-1, 1].
EnergyLaw star_law(const EnergyLaw& law, double gamma);

}  // namespace hopnet
