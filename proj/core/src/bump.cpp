#include "msre/bump.hpp"

#include <cmath>
#include <numbers>

#include "msre/errors.hpp"

namespace msre {

BumpProfile parse_bump_profile(const std::string& name)
{
    if (name == "tent")
        return BumpProfile::tent;
    if (name == "biweight")
        return BumpProfile::biweight;
    throw ParameterError("unknown bump profile '" + name + "'");
}

std::string to_string(BumpProfile profile)
{
    return profile == BumpProfile::tent ? "tent" : "biweight";
}

BumpFunction::BumpFunction(BumpProfile profile, int n) : profile_(profile), n_(n)
{
    if (n < 1)
    {
        throw ParameterError("bump dimension must be positive");
    }
    // surface area of the unit sphere in R^n
    const double half = 0.5 * n;
    const double area = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
    // radial integral of the squared profile, int_0^1 f(r)^2 r^(n-1) dr
    double radial_integral = 0.0;
    if (profile == BumpProfile::tent)
    {
        radial_integral = 2.0 / (n * (n + 1.0) * (n + 2.0));
        lipschitz_ = 1.0;
    }
    else
    {
        // (1 - r^2)^4 r^(n-1) integrates to B(n/2, 5) / 2
        radial_integral =
            0.5 * std::tgamma(half) * 24.0 / std::tgamma(half + 5.0);
        lipschitz_ = 8.0 / (3.0 * std::sqrt(3.0));
    }
    c_ = 1.0 / std::sqrt(area * radial_integral);
    lipschitz_ *= c_;
}

double BumpFunction::operator()(std::span<const double> t) const noexcept
{
    double r2 = 0.0;
    for (double x : t)
        r2 += x * x;
    return of_squared(r2);
}

}  // namespace msre
