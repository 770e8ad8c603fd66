#include "hopnet/energy_law.hpp"

#include "hopnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hopnet {

std::string_view to_string(LawKind k) {
    switch (k) {
        case LawKind::positive_power: return "positive_power";
        case LawKind::signed_power: return "signed_power";
        case LawKind::general_table: return "general_table";
    }
    return "signed_power";
}

LawKind law_kind_from_string(std::string_view s) {
    if (s == "positive_power" || s == "positive") return LawKind::positive_power;
    if (s == "signed_power" || s == "signed") return LawKind::signed_power;
    if (s == "general_table" || s == "table") return LawKind::general_table;
    throw ParameterError("unknown energy law kind '" + std::string(s) + "'");
}

namespace {

void check_power_params(double c0, double alpha) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw ParameterError("C0 must be positive and finite");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be >= 0");
}

}  // namespace

EnergyLaw EnergyLaw::positive_power(double c0, double alpha) {
    check_power_params(c0, alpha);
    EnergyLaw law;
    law.kind_ = LawKind::positive_power;
    law.c0_ = c0;
    law.alpha_ = alpha;
    law.epsilon_ = c0;
    return law;
}

EnergyLaw EnergyLaw::signed_power(double c0, double alpha) {
    check_power_params(c0, alpha);
    EnergyLaw law;
    law.kind_ = LawKind::signed_power;
    law.c0_ = c0;
    law.alpha_ = alpha;
    law.epsilon_ = c0;
    return law;
}

EnergyLaw EnergyLaw::table(std::vector<double> grid, std::vector<double> density, double alpha,
                           double epsilon) {
    if (grid.size() < 2 || grid.size() != density.size())
        throw ParameterError("table law needs >= 2 grid points and one density per point");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !std::isfinite(density[i]) || density[i] < 0.0)
            throw ParameterError("table law densities must be finite and nonnegative");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ParameterError("table law grid must be strictly increasing");
    }
    if (!(alpha >= 0.0)) throw ParameterError("alpha must be >= 0");
    EnergyLaw law;
    law.kind_ = LawKind::general_table;
    law.alpha_ = alpha;
    law.cumulative_.assign(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        law.cumulative_[i] =
            law.cumulative_[i - 1] + 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    const double total = law.cumulative_.back();
    if (!(total > 0.0)) throw ParameterError("table law has zero mass");
    for (auto& d : density) d /= total;
    for (auto& c : law.cumulative_) c /= total;
    law.cumulative_.back() = 1.0;
    law.grid_ = std::move(grid);
    law.density_ = std::move(density);
    law.epsilon_ = epsilon > 0.0 ? epsilon : law.support_radius();
    // C0 from the small-scale constant when the table is in a power class.
    law.c0_ = std::numeric_limits<double>::infinity();
    if (law.support_lo() <= 0.0 && law.support_hi() >= 0.0) {
        try {
            const double cstar = law.small_scale_constant();
            if (cstar > 0.0) law.c0_ = std::pow(cstar, -1.0 / (alpha + 1.0));
        } catch (const DomainError&) {
        }
    }
    return law;
}

EnergyLaw EnergyLaw::uniform(double a, double b) {
    if (!(b > a)) throw ParameterError("uniform law needs a < b");
    return table({a, b}, {1.0, 1.0});
}

double EnergyLaw::support_lo() const {
    switch (kind_) {
        case LawKind::positive_power: return 0.0;
        case LawKind::signed_power: return -c0_;
        case LawKind::general_table: return grid_.front();
    }
    return 0.0;
}

double EnergyLaw::support_hi() const {
    return kind_ == LawKind::general_table ? grid_.back() : c0_;
}

double EnergyLaw::support_radius() const {
    return std::max(std::fabs(support_lo()), std::fabs(support_hi()));
}

std::size_t EnergyLaw::segment_of(double e) const {
    // index i with grid_[i] <= e < grid_[i+1], clamped to valid segments
    auto it = std::upper_bound(grid_.begin(), grid_.end(), e);
    std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, grid_.size() - 2);
}

double EnergyLaw::density(double e) const {
    switch (kind_) {
        case LawKind::positive_power:
            if (e < 0.0 || e > c0_) return 0.0;
            return (alpha_ + 1.0) * std::pow(e / c0_, alpha_) / c0_;
        case LawKind::signed_power:
            if (std::fabs(e) > c0_) return 0.0;
            return 0.5 * (alpha_ + 1.0) * std::pow(std::fabs(e) / c0_, alpha_) / c0_;
        case LawKind::general_table: {
            if (e < grid_.front() || e > grid_.back()) return 0.0;
            const std::size_t i = segment_of(e);
            const double t = (e - grid_[i]) / (grid_[i + 1] - grid_[i]);
            return density_[i] + t * (density_[i + 1] - density_[i]);
        }
    }
    return 0.0;
}

double EnergyLaw::cdf(double e) const {
    const double a1 = alpha_ + 1.0;
    switch (kind_) {
        case LawKind::positive_power:
            if (e <= 0.0) return 0.0;
            if (e >= c0_) return 1.0;
            return std::pow(e / c0_, a1);
        case LawKind::signed_power: {
            if (e <= -c0_) return 0.0;
            if (e >= c0_) return 1.0;
            const double half = 0.5 * std::pow(std::fabs(e) / c0_, a1);
            return e < 0.0 ? 0.5 - half : 0.5 + half;
        }
        case LawKind::general_table: {
            if (e <= grid_.front()) return 0.0;
            if (e >= grid_.back()) return 1.0;
            const std::size_t i = segment_of(e);
            const double s = e - grid_[i];
            const double slope = (density_[i + 1] - density_[i]) / (grid_[i + 1] - grid_[i]);
            return std::min(1.0, cumulative_[i] + density_[i] * s + 0.5 * slope * s * s);
        }
    }
    return 0.0;
}

double EnergyLaw::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const double inv = 1.0 / (alpha_ + 1.0);
    switch (kind_) {
        case LawKind::positive_power: return c0_ * std::pow(u, inv);
        case LawKind::signed_power:
            if (u < 0.5) return -c0_ * std::pow(1.0 - 2.0 * u, inv);
            return c0_ * std::pow(2.0 * u - 1.0, inv);
        case LawKind::general_table: {
            auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
            i = i == 0 ? 0 : std::min(i - 1, grid_.size() - 2);
            // skip zero-mass segments
            while (i + 2 < grid_.size() && cumulative_[i + 1] <= cumulative_[i] &&
                   cumulative_[i + 1] <= u)
                ++i;
            const double target = u - cumulative_[i];
            const double width = grid_[i + 1] - grid_[i];
            const double f0 = density_[i];
            const double k = (density_[i + 1] - f0) / width;
            const double disc = std::max(0.0, f0 * f0 + 2.0 * k * target);
            const double denom = f0 + std::sqrt(disc);
            double s = denom > 0.0 ? 2.0 * target / denom : 0.0;
            return grid_[i] + std::clamp(s, 0.0, width);
        }
    }
    return 0.0;
}

double EnergyLaw::mass(double gamma) const {
    if (!(gamma > 0.0)) return 0.0;
    switch (kind_) {
        case LawKind::positive_power:
        case LawKind::signed_power:
            if (gamma >= c0_) return 1.0;
            return std::pow(gamma / c0_, alpha_ + 1.0);
        case LawKind::general_table: return std::max(0.0, cdf(gamma) - cdf(-gamma));
    }
    return 0.0;
}

double EnergyLaw::small_scale_constant() const {
    if (kind_ != LawKind::general_table) return std::pow(c0_, -(alpha_ + 1.0));
    if (grid_.front() > 0.0 || grid_.back() < 0.0) return 0.0;
    // one-sided density values and slope magnitudes at the origin
    double vr = 0.0, sr = 0.0, vl = 0.0, sl = 0.0;
    auto at_zero = [&](std::size_t i, double& value, double& slope) {
        slope = (density_[i + 1] - density_[i]) / (grid_[i + 1] - grid_[i]);
        value = density_[i] - slope * grid_[i];
    };
    const auto right = std::upper_bound(grid_.begin(), grid_.end(), 0.0);
    if (right != grid_.begin() && right != grid_.end())
        at_zero(static_cast<std::size_t>(right - grid_.begin()) - 1, vr, sr);
    const auto left = std::lower_bound(grid_.begin(), grid_.end(), 0.0);
    if (left != grid_.begin() && left != grid_.end()) {
        at_zero(static_cast<std::size_t>(left - grid_.begin()) - 1, vl, sl);
        sl = -sl;
    }
    if (alpha_ == 0.0) return vr + vl;
    if (alpha_ == 1.0) {
        if (vr != 0.0 || vl != 0.0)
            throw DomainError("table density does not vanish at 0 but alpha = 1");
        return 0.5 * (sr + sl);
    }
    throw DomainError("small-scale constant of a table law needs alpha in {0, 1}");
}

EnergyLaw EnergyLaw::restricted_table(double gamma) const {
    std::vector<double> g, d;
    const double lo = std::max(-gamma, grid_.front());
    const double hi = std::min(gamma, grid_.back());
    g.push_back(lo);
    d.push_back(density(lo));
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (grid_[i] > lo && grid_[i] < hi) {
            g.push_back(grid_[i]);
            d.push_back(density_[i]);
        }
    }
    g.push_back(hi);
    d.push_back(density(hi));
    return table(std::move(g), std::move(d), alpha_, std::min(epsilon_, gamma));
}

EnergyLaw EnergyLaw::conditioned(double gamma) const {
    if (!(gamma > 0.0) || !(mass(gamma) > 0.0))
        throw DomainError("law has zero mass in [-gamma, gamma]");
    if (kind_ != LawKind::general_table) {
        EnergyLaw law = *this;
        law.c0_ = std::min(c0_, gamma);
        law.epsilon_ = law.c0_;
        return law;
    }
    if (grid_.front() >= -gamma && grid_.back() <= gamma) return *this;
    return restricted_table(gamma);
}

EnergyLaw EnergyLaw::star(double gamma) const {
    EnergyLaw cond = conditioned(gamma);
    if (kind_ != LawKind::general_table) {
        cond.c0_ = cond.c0_ / gamma;
        cond.epsilon_ = cond.c0_;
        return cond;
    }
    std::vector<double> g = cond.grid_;
    std::vector<double> d = cond.density_;
    for (auto& x : g) x /= gamma;
    for (auto& y : d) y *= gamma;
    return table(std::move(g), std::move(d), alpha_, cond.epsilon_ / gamma);
}

std::string EnergyLaw::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == LawKind::general_table)
        os << "(" << grid_.size() << " points on [" << grid_.front() << ", " << grid_.back()
           << "], alpha=" << alpha_ << ")";
    else
        os << "(C0=" << c0_ << ", alpha=" << alpha_ << ")";
    return os.str();
}

double nu_mass(const EnergyLaw& law, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    return law.mass(gamma);
}

EnergyLaw conditioned_law(const EnergyLaw& law, double gamma) { return law.conditioned(gamma); }

EnergyLaw star_law(const EnergyLaw& law, double gamma) { return law.star(gamma); }

}  // namespace hopnet
