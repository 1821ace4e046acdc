#pragma once

#include <cmath>
#include <span>
#include <string>

namespace msre {

enum class BumpProfile
{
    tent,     ///< c (1 - |t|)_+
    biweight  ///< c (1 - |t|^2)_+^2
};

/// Parse "tent" / "biweight"; ParameterError otherwise.
BumpProfile parse_bump_profile(const std::string& name);
std::string to_string(BumpProfile profile);

//---------------------------------------------------------------------------//
/*!
 * Radial bump on R^n supported in the open unit ball, normalized so that
 * the integral of its square is one.
 */
class BumpFunction
{
  public:
    BumpFunction(BumpProfile profile, int n);

    BumpProfile profile() const noexcept { return profile_; }
    int components() const noexcept { return n_; }
    double normalization() const noexcept { return c_; }
    double lipschitz() const noexcept { return lipschitz_; }

    /// Value at radius r >= 0.
    double radial(double r) const noexcept
    {
        if (r >= 1.0)
            return 0.0;
        if (profile_ == BumpProfile::tent)
            return c_ * (1.0 - r);
        double u = 1.0 - r * r;
        return c_ * u * u;
    }

    /// Value as a function of the squared radius (avoids a sqrt for the
    /// biweight profile).
    double of_squared(double r2) const noexcept
    {
        if (r2 >= 1.0)
            return 0.0;
        if (profile_ == BumpProfile::tent)
            return c_ * (1.0 - std::sqrt(r2));
        double u = 1.0 - r2;
        return c_ * u * u;
    }

    double operator()(std::span<const double> t) const noexcept;

  private:
    BumpProfile profile_;
    int n_;
    double c_;
    double lipschitz_;
};

}  // namespace msre
