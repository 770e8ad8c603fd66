#pragma once

#include "hopnet/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace hopnet {

/// How candidate pairs are enumerated. brute_force is the O(n^2) reference.
enum class PairSearch { cell_list, brute_force };

/// Uniform cell list over a subset of points. Any two members at distance
/// <= side lie in the same or in adjacent cells.
class CellGrid {
public:
    CellGrid(std::span<const Point> points, std::span<const std::uint32_t> members, int dim,
             double side);

    /// Calls f(i, j) once for every unordered pair of members in the same or
    /// adjacent cells, with i < j as point indices.
    template <class F>
    void for_each_candidate_pair(F&& f) const;

    /// Calls f(j) for every member in the cells adjacent to x (x included).
    template <class F>
    void for_each_near(const Point& x, F&& f) const;

private:
    std::array<long long, kMaxDim> cell_coords(const Point& x) const;
    long long flat(const std::array<long long, kMaxDim>& c) const;

    int dim_;
    double side_;
    Point origin_{};
    std::array<long long, kMaxDim> counts_{1, 1, 1};
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
    std::vector<int> stencil_dims_;
};

template <class F>
void CellGrid::for_each_candidate_pair(F&& f) const {
    const long long ncells = static_cast<long long>(start_.size()) - 1;
    for (long long c = 0; c < ncells; ++c) {
        const std::uint32_t b = start_[c], e = start_[c + 1];
        if (b == e) continue;
        for (std::uint32_t a = b; a < e; ++a)
            for (std::uint32_t z = a + 1; z < e; ++z) {
                const std::uint32_t i = items_[a], j = items_[z];
                i < j ? f(i, j) : f(j, i);
            }
        std::array<long long, kMaxDim> cc{0, 0, 0};
        long long rem = c;
        for (int k = 0; k < dim_; ++k) {
            cc[k] = rem % counts_[k];
            rem /= counts_[k];
        }
        const int nstencil = dim_ == 1 ? 3 : (dim_ == 2 ? 9 : 27);
        for (int s = 0; s < nstencil; ++s) {
            std::array<long long, kMaxDim> nc{0, 0, 0};
            int t = s;
            bool ok = true;
            for (int k = 0; k < dim_; ++k) {
                nc[k] = cc[k] + (t % 3) - 1;
                t /= 3;
                if (nc[k] < 0 || nc[k] >= counts_[k]) ok = false;
            }
            if (!ok) continue;
            const long long n = flat(nc);
            if (n <= c) continue;
            for (std::uint32_t a = b; a < e; ++a)
                for (std::uint32_t z = start_[n]; z < start_[n + 1]; ++z) {
                    const std::uint32_t i = items_[a], j = items_[z];
                    i < j ? f(i, j) : f(j, i);
                }
        }
    }
}

template <class F>
void CellGrid::for_each_near(const Point& x, F&& f) const {
    const auto cc = cell_coords(x);
    const int nstencil = dim_ == 1 ? 3 : (dim_ == 2 ? 9 : 27);
    for (int s = 0; s < nstencil; ++s) {
        std::array<long long, kMaxDim> nc{0, 0, 0};
        int t = s;
        bool ok = true;
        for (int k = 0; k < dim_; ++k) {
            nc[k] = cc[k] + (t % 3) - 1;
            t /= 3;
            if (nc[k] < 0 || nc[k] >= counts_[k]) ok = false;
        }
        if (!ok) continue;
        const long long n = flat(nc);
        for (std::uint32_t z = start_[n]; z < start_[n + 1]; ++z) f(items_[z]);
    }
}

/// Reference enumeration of all member pairs, i < j.
template <class F>
void for_each_pair_brute(std::span<const std::uint32_t> members, F&& f) {
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const std::uint32_t i = members[a], j = members[b];
            i < j ? f(i, j) : f(j, i);
        }
}

}  // namespace hopnet
