#include "msre/shift_pi.hpp"

#include <algorithm>
#include <cmath>

#include "msre/errors.hpp"

namespace msre {

double plateau_profile(double t, double a) noexcept
{
    const double x = std::abs(t);
    if (x >= 1.0)
        return 0.0;
    if (x <= a)
        return 1.0;
    const double u = (1.0 - x) / (1.0 - a);
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

namespace {

std::int64_t inner_half_width(std::int64_t L, double epsilon, int d)
{
    return static_cast<std::int64_t>(
        std::ceil((1.0 - epsilon / (2.0 * d)) * static_cast<double>(L) - 1e-12));
}

}  // namespace

ShiftPi build_shift_pi(std::int64_t L, double epsilon, int d, ShiftPiShape shape)
{
    if (L < 1)
        throw ParameterError("L must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0, 1)");
    if (d < 1)
        throw ParameterError("d must be at least 1");

    const BoxDomain dom = BoxDomain::cube(d, L);
    const std::int64_t inner = inner_half_width(L, epsilon, d);
    const double Ld = static_cast<double>(L);
    const double t_inner = static_cast<double>(inner) / Ld;

    double a = 1.0, scale = 1.0;
    if (inner < L)
    {
        if (shape == ShiftPiShape::plateau)
            a = std::max(1.0 - epsilon / (3.0 * d), t_inner);
        else
        {
            a = std::max(0.0, 1.0 - 1.5 * epsilon / d);
            const double t = std::max(1.0 - epsilon / (4.0 * d), t_inner);
            scale = std::pow(plateau_profile(t, a), -d);
        }
    }

    Surface pi(dom, 1);
    Vertex v(d);
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        double p = scale;
        if (a < 1.0)
            for (int k = 0; k < d; ++k)
                p *= plateau_profile(static_cast<double>(v[k]) / Ld, a);
        pi.at(i)[0] = p;
    }
    return {std::move(pi), shape, a, scale, inner};
}

ShiftPiReport shift_pi_report(const ShiftPi& s, double epsilon)
{
    const auto& dom = s.pi.domain();
    const int d = dom.dim();
    const std::int64_t L = dom.hi()[0];
    ShiftPiReport r;
    r.L = L;
    r.d = d;
    r.epsilon = epsilon;
    r.scale = s.scale;

    // the formula evaluated just outside the cube must vanish
    r.support_ok = true;
    const double Ld = static_cast<double>(L);
    for (std::size_t k = 0; k < dom.shell_size(); ++k)
    {
        const Vertex w = dom.shell_vertex(k);
        double p = s.scale;
        for (int a = 0; a < d; ++a)
            p *= s.plateau >= 1.0 ? (std::abs(w[a]) <= L ? 1.0 : 0.0)
                                  : plateau_profile(static_cast<double>(w[a]) / Ld, s.plateau);
        if (p != 0.0 || s.pi.shell_at(k)[0] != 0.0)
            r.support_ok = false;
    }

    r.min_on_inner = 1e300;
    Vertex v(d);
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        bool in = true;
        for (int a = 0; a < d; ++a)
            in = in && std::abs(v[a]) <= s.inner;
        if (in)
            r.min_on_inner = std::min(r.min_on_inner, s.pi.at(i)[0]);
    }
    r.center = s.pi.at(dom.index(dom.center()))[0];

    const Surface lap = laplacian(s.pi);
    for (double x : lap.interior())
        r.max_laplacian = std::max(r.max_laplacian, std::abs(x));
    for (double x : lap.shell())
        r.max_laplacian = std::max(r.max_laplacian, std::abs(x));
    r.gradient2 = dirichlet_norm2(s.pi);
    r.laplacian_scaled = r.max_laplacian * Ld * Ld;
    r.gradient_scaled = r.gradient2 / std::pow(Ld, d - 2);
    return r;
}

ShiftPiLadder check_shift_pi(int d, const std::vector<std::int64_t>& sizes, double epsilon,
                             ShiftPiShape shape)
{
    if (sizes.empty())
        throw ParameterError("at least one size is needed");
    ShiftPiLadder out;
    double lap_lo = 1e300, lap_hi = 0.0, grad_lo = 1e300, grad_hi = 0.0;
    bool ok = true;
    for (std::int64_t L : sizes)
    {
        auto r = shift_pi_report(build_shift_pi(L, epsilon, d, shape), epsilon);
        ok = ok && r.support_ok && r.min_on_inner >= 1.0;
        lap_lo = std::min(lap_lo, r.laplacian_scaled);
        lap_hi = std::max(lap_hi, r.laplacian_scaled);
        grad_lo = std::min(grad_lo, r.gradient_scaled);
        grad_hi = std::max(grad_hi, r.gradient_scaled);
        out.reports.push_back(r);
    }
    out.laplacian_spread = lap_lo > 0.0 ? lap_hi / lap_lo : 1e300;
    out.gradient_spread = grad_lo > 0.0 ? grad_hi / grad_lo : 1e300;
    out.pass = ok && out.laplacian_spread <= out.limit && out.gradient_spread <= out.limit;
    return out;
}

}  // namespace msre
