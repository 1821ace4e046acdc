#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msre/lattice.hpp"

namespace msre {

//---------------------------------------------------------------------------//
/*!
 * Tensor grid of candidate heights: level j on axis a is
 * offset_{v,a} + lo_a + j * step for j < counts[a].
 *
 * The optional per-site offset (|box| * n values) lets a grid follow a
 * prescribed surface, e.g. a harmonic extension that is itself a multiple
 * of the step.
 */
struct HeightGrid
{
    Point lo;
    Point hi;
    double step = 0.25;
    std::vector<std::size_t> counts;
    std::vector<double> site_offset;  // empty: no offset

    /// [-W, W]^n with W rounded up to a multiple of step (0 is a level).
    static HeightGrid symmetric(int n, double W, double step);

    /*!
     * Default window for a box of half-width L: W = max(4, 4 L^((4-d)/4)
     * sqrt(lambda)), step = min(0.25, W / 64) rounded down to a power of two.
     */
    static HeightGrid policy(int d, int n, std::int64_t L, double lambda);

    int components() const noexcept { return static_cast<int>(lo.size()); }
    std::size_t points_per_site() const noexcept;
    double offset(std::size_t site, int axis) const noexcept
    {
        return site_offset.empty() ? 0.0 : site_offset[site * lo.size() + axis];
    }
    double level(std::size_t site, int axis, std::size_t j) const noexcept
    {
        return offset(site, axis) + (lo[axis] + static_cast<double>(j) * step);
    }

    /// Heights of every grid point at a site, lexicographic order (axis 0
    /// slowest), flattened.
    std::vector<double> site_points(std::size_t site) const;

    /// True if some component of h lies within `margin` of the window edge
    /// (default half a step, i.e. on the outermost level).
    bool on_edge(std::size_t site, std::span<const double> h,
                 double margin = -1.0) const noexcept;

    /// Same grid with W doubled, same step.
    HeightGrid widened() const;

    void validate(const BoxDomain& domain) const;
};

}  // namespace msre
