#pragma once

#include <span>
#include <vector>

namespace msre {

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> x);
double sample_std(std::span<const double> x);
/// Standard error of the mean.
double standard_error(std::span<const double> x);

/// Jackknife standard error of the sample standard deviation.
double jackknife_std_error(std::span<const double> x);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> x, double q);
inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double r2 = 0.0;
};

/*!
 * Ordinary least squares y ~ a + b x. With per-point standard errors
 * `sigma` the coefficient errors are propagated from them (the estimator
 * stays unweighted); without, they come from the residual variance.
 */
LinearFit ols(std::span<const double> x, std::span<const double> y,
              std::span<const double> sigma = {});

}  // namespace msre
