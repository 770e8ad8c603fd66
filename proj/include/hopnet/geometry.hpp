#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace hopnet {

/// Largest supported spatial dimension.
inline constexpr int kMaxDim = 3;

/// Position in R^d; coordinates beyond the configuration dimension are zero.
using Point = std::array<double, kMaxDim>;

inline double distance(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return std::sqrt(s);
}

inline double sup_distance(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s = std::fmax(s, std::fabs(a[k] - b[k]));
    return s;
}

/// Axis-aligned box [lo, hi] in the first `dim` coordinates.
struct Box {
    int dim = 2;
    Point lo{};
    Point hi{};

    double volume() const;
    double extent(int k) const { return hi[k] - lo[k]; }
    bool contains(const Point& x) const;
    /// Cube [-radius, radius]^dim.
    static Box centered(int dim, double radius);
};

/// Region of a point relative to the stripe S_l = S_l^- u Lambda_l u S_l^+.
enum class Region { left, box, right, outside };

std::string_view to_string(Region r);

/// Stripe R x (-l/2, l/2)^{d-1} split into the closed slabs x1 <= -l/2 and
/// x1 >= l/2 and the open box (-l/2, l/2)^d.
struct StripeGeometry {
    int dim = 2;
    double ell = 1.0;

    Region classify(const Point& x) const;
    bool in_stripe(const Point& x) const { return classify(x) != Region::outside; }
    /// Stripe truncated to x1 in [-l/2 - padding, l/2 + padding].
    Box window(double padding) const;
};

void validate_dimension(int dim);

}  // namespace hopnet
