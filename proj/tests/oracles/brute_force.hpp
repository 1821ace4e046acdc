#pragma once

#include <cstdint>
#include <vector>

#include "msre/energy.hpp"
#include "msre/height_grid.hpp"

namespace msre::oracle {

struct BruteForceResult
{
    double energy;
    Surface surface;
    std::size_t configurations;
};

/*!
 * Exhaustive minimum over every grid-valued interior, enumerated with
 * vertex 0 as the most significant digit and levels ascending. A strictly
 * smaller energy replaces the incumbent, so among exact ties the
 * lexicographically smallest height sequence wins.
 */
inline BruteForceResult brute_force_minimum(const EnergyModel& model, const HeightGrid& grid)
{
    const auto& dom = model.domain();
    const int n = model.components();
    const std::size_t sites = dom.size();
    std::vector<std::vector<double>> points(sites);
    for (std::size_t i = 0; i < sites; ++i)
        points[i] = grid.site_points(i);
    const std::size_t per = points[0].size() / static_cast<std::size_t>(n);

    std::vector<std::size_t> digit(sites, 0);
    std::vector<double> interior(sites * n);
    BruteForceResult best{kInfinity, model.zero_surface(), 0};
    for (;;)
    {
        for (std::size_t i = 0; i < sites; ++i)
            for (int a = 0; a < n; ++a)
                interior[i * n + a] = points[i][digit[i] * n + a];
        Surface phi = model.admissible(interior);
        const double e = energy(model, phi);
        ++best.configurations;
        if (e < best.energy)
        {
            best.energy = e;
            best.surface = std::move(phi);
        }
        std::size_t k = sites;
        while (k > 0)
        {
            --k;
            if (++digit[k] < per)
                break;
            digit[k] = 0;
            if (k == 0)
                return best;
        }
        if (sites == 0)
            return best;
    }
}

}  // namespace msre::oracle
