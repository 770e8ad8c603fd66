#include "hopnet/cell_grid.hpp"

#include "hopnet/errors.hpp"

#include <algorithm>
#include <limits>

namespace hopnet {

CellGrid::CellGrid(std::span<const Point> points, std::span<const std::uint32_t> members, int dim,
                   double side)
    : dim_(dim), side_(side) {
    validate_dimension(dim);
    if (!(side > 0.0) || !std::isfinite(side)) throw ParameterError("cell side must be positive");
    Point lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (auto m : members)
        for (int k = 0; k < dim; ++k) {
            lo[k] = std::min(lo[k], points[m][k]);
            hi[k] = std::max(hi[k], points[m][k]);
        }
    if (members.empty()) {
        lo.fill(0.0);
        hi.fill(0.0);
    }
    origin_ = lo;
    // Keep the number of cells proportional to the number of members; a
    // larger side only adds candidates, never loses pairs.
    const double cap = std::max<double>(64.0, 2.0 * static_cast<double>(members.size()));
    for (;;) {
        double total = 1.0;
        for (int k = 0; k < dim; ++k) {
            counts_[k] = static_cast<long long>(std::floor((hi[k] - lo[k]) / side_)) + 1;
            total *= static_cast<double>(counts_[k]);
        }
        if (total <= cap) break;
        side_ *= 2.0;
    }
    long long ncells = 1;
    for (int k = 0; k < dim; ++k) ncells *= counts_[k];
    start_.assign(static_cast<std::size_t>(ncells) + 1, 0);
    std::vector<long long> cell_of(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
        cell_of[a] = flat(cell_coords(points[members[a]]));
        ++start_[static_cast<std::size_t>(cell_of[a]) + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(members.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t a = 0; a < members.size(); ++a)
        items_[fill[static_cast<std::size_t>(cell_of[a])]++] = members[a];
}

std::array<long long, kMaxDim> CellGrid::cell_coords(const Point& x) const {
    std::array<long long, kMaxDim> c{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
        const double t = std::floor((x[k] - origin_[k]) / side_);
        // out-of-grid queries map to the rings just outside the grid
        c[k] = static_cast<long long>(std::clamp(t, -2.0, static_cast<double>(counts_[k]) + 1.0));
    }
    return c;
}

long long CellGrid::flat(const std::array<long long, kMaxDim>& c) const {
    long long f = 0;
    for (int k = dim_ - 1; k >= 0; --k) f = f * counts_[k] + c[k];
    return f;
}

}  // namespace hopnet
