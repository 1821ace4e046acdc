#include "msre/height_grid.hpp"

#include <cmath>

#include "msre/errors.hpp"

namespace msre {

HeightGrid HeightGrid::symmetric(int n, double W, double step)
{
    if (n < 1 || !(W > 0.0) || !(step > 0.0) || !std::isfinite(W))
        throw ParameterError("height grid needs n >= 1, W > 0 and step > 0");
    const double half = std::ceil(W / step - 1e-9);
    HeightGrid g;
    g.step = step;
    g.lo.assign(n, -half * step);
    g.hi.assign(n, half * step);
    g.counts.assign(n, static_cast<std::size_t>(2 * half + 1));
    if (g.counts[0] < 3)
        throw ParameterError("height grid needs at least 3 levels per axis");
    return g;
}

HeightGrid HeightGrid::policy(int d, int n, std::int64_t L, double lambda)
{
    const double W = std::max(
        4.0, 4.0 * std::pow(static_cast<double>(std::max<std::int64_t>(L, 1)),
                            (4.0 - d) / 4.0)
                 * std::sqrt(lambda));
    double step = std::min(0.25, W / 64.0);
    step = std::exp2(std::floor(std::log2(step)));
    return symmetric(n, W, step);
}

std::size_t HeightGrid::points_per_site() const noexcept
{
    std::size_t p = 1;
    for (auto c : counts)
        p *= c;
    return p;
}

std::vector<double> HeightGrid::site_points(std::size_t site) const
{
    const std::size_t n = lo.size();
    const std::size_t total = points_per_site();
    std::vector<double> out(total * n);
    std::vector<std::size_t> j(n, 0);
    for (std::size_t k = 0; k < total; ++k)
    {
        for (std::size_t a = 0; a < n; ++a)
            out[k * n + a] = level(site, static_cast<int>(a), j[a]);
        for (std::size_t a = n; a-- > 0;)
        {
            if (++j[a] < counts[a])
                break;
            j[a] = 0;
        }
    }
    return out;
}

bool HeightGrid::on_edge(std::size_t site, std::span<const double> h,
                         double margin) const noexcept
{
    if (margin < 0.0)
        margin = 0.5 * step;
    for (std::size_t a = 0; a < lo.size(); ++a)
    {
        double rel = h[a] - offset(site, static_cast<int>(a));
        if (rel <= lo[a] + margin || rel >= hi[a] - margin)
            return true;
    }
    return false;
}

HeightGrid HeightGrid::widened() const
{
    HeightGrid g = *this;
    for (std::size_t a = 0; a < lo.size(); ++a)
    {
        double center = 0.5 * (lo[a] + hi[a]);
        double half = hi[a] - center;
        g.lo[a] = center - 2.0 * half;
        g.hi[a] = center + 2.0 * half;
        g.counts[a] = 2 * (counts[a] - 1) + 1;
    }
    return g;
}

void HeightGrid::validate(const BoxDomain& domain) const
{
    if (lo.empty() || lo.size() != hi.size() || counts.size() != lo.size())
        throw ContractError("height grid axes are inconsistent");
    if (!(step > 0.0))
        throw ParameterError("height grid step must be positive");
    for (std::size_t a = 0; a < lo.size(); ++a)
    {
        if (counts[a] < 3)
            throw ParameterError("height grid needs at least 3 levels per axis");
        double expect = lo[a] + static_cast<double>(counts[a] - 1) * step;
        if (std::abs(expect - hi[a]) > 1e-9 * (1.0 + std::abs(hi[a])))
            throw ContractError("height grid corners do not match count and step");
    }
    if (!site_offset.empty() && site_offset.size() != domain.size() * lo.size())
        throw ContractError("site offsets must have |box| * n entries");
}

}  // namespace msre
