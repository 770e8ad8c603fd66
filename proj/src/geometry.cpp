#include "hopnet/geometry.hpp"

#include "hopnet/errors.hpp"

#include <string>

namespace hopnet {

void validate_dimension(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw ParameterError("dimension must be in [1, " + std::to_string(kMaxDim) +
                             "], got " + std::to_string(dim));
}

double Box::volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= std::fmax(0.0, hi[k] - lo[k]);
    return v;
}

bool Box::contains(const Point& x) const {
    for (int k = 0; k < dim; ++k)
        if (x[k] < lo[k] || x[k] > hi[k]) return false;
    return true;
}

Box Box::centered(int dim, double radius) {
    Box b;
    b.dim = dim;
    for (int k = 0; k < dim; ++k) {
        b.lo[k] = -radius;
        b.hi[k] = radius;
    }
    return b;
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::left: return "left";
        case Region::box: return "box";
        case Region::right: return "right";
        case Region::outside: return "outside";
    }
    return "outside";
}

Region StripeGeometry::classify(const Point& x) const {
    const double h = 0.5 * ell;
    for (int k = 1; k < dim; ++k)
        if (!(x[k] > -h && x[k] < h)) return Region::outside;
    if (x[0] <= -h) return Region::left;
    if (x[0] >= h) return Region::right;
    return Region::box;
}

Box StripeGeometry::window(double padding) const {
    Box b;
    b.dim = dim;
    const double h = 0.5 * ell;
    b.lo[0] = -h - padding;
    b.hi[0] = h + padding;
    for (int k = 1; k < dim; ++k) {
        b.lo[k] = -h;
        b.hi[k] = h;
    }
    return b;
}

}  // namespace hopnet
