#include "msre/stats.hpp"

#include <algorithm>
#include <cmath>

#include "msre/errors.hpp"

namespace msre {

double mean(std::span<const double> x)
{
    if (x.empty())
        throw ParameterError("mean of an empty sample");
    double s = 0.0;
    for (double v : x)
        s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x)
{
    if (x.size() < 2)
        return 0.0;
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }))
        return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x)
        s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double sample_std(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double standard_error(std::span<const double> x)
{
    if (x.size() < 2)
        return 0.0;
    return sample_std(x) / std::sqrt(static_cast<double>(x.size()));
}

double jackknife_std_error(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n < 3)
        return 0.0;
    // leave-one-out variances from centred sums
    const double m = mean(x);
    double s2 = 0.0;
    for (double v : x)
        s2 += (v - m) * (v - m);
    const double nd = static_cast<double>(n);
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double dev = x[i] - m;
        // removing x_i: sum of squares about the new mean
        const double ss = s2 - dev * dev * nd / (nd - 1.0);
        loo[i] = std::sqrt(std::max(0.0, ss / (nd - 2.0)));
    }
    const double lm = mean(loo);
    double acc = 0.0;
    for (double v : loo)
        acc += (v - lm) * (v - lm);
    return std::sqrt((nd - 1.0) / nd * acc);
}

double quantile(std::vector<double> x, double q)
{
    if (x.empty())
        throw ParameterError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw ParameterError("quantile level must lie in [0, 1]");
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    const double f = pos - static_cast<double>(lo);
    return x[lo] + f * (x[hi] - x[lo]);
}

LinearFit ols(std::span<const double> x, std::span<const double> y,
              std::span<const double> sigma)
{
    const std::size_t n = x.size();
    if (y.size() != n || (!sigma.empty() && sigma.size() != n))
        throw ContractError("fit inputs have different lengths");
    if (n < 2)
        throw PreconditionError("a line fit needs at least two points");
    const double xm = mean(x), ym = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
        syy += (y[i] - ym) * (y[i] - ym);
    }
    if (sxx <= 0.0)
        throw PreconditionError("a line fit needs at least two distinct abscissae");

    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;

    const double nd = static_cast<double>(n);
    if (!sigma.empty())
    {
        // b = sum w_i y_i with w_i = (x_i - xm) / sxx, a = ym - b xm
        double vb = 0.0, va = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double wb = (x[i] - xm) / sxx;
            const double wa = 1.0 / nd - xm * wb;
            vb += wb * wb * sigma[i] * sigma[i];
            va += wa * wa * sigma[i] * sigma[i];
        }
        f.slope_se = std::sqrt(vb);
        f.intercept_se = std::sqrt(va);
    }
    else if (n > 2)
    {
        const double s2 = sse / (nd - 2.0);
        f.slope_se = std::sqrt(s2 / sxx);
        f.intercept_se = std::sqrt(s2 * (1.0 / nd + xm * xm / sxx));
    }
    return f;
}

}  // namespace msre
