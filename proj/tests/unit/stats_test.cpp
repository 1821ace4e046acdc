#include <gtest/gtest.h>

#include <cmath>

#include "msre/errors.hpp"
#include "msre/stats.hpp"

using namespace msre;

TEST(Stats, MeanVarianceStd)
{
    const std::vector<double> x{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(mean(x), 2.5);
    EXPECT_DOUBLE_EQ(sample_variance(x), 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(standard_error(x), std::sqrt(5.0 / 3.0 / 4.0));
    EXPECT_EQ(sample_variance(std::vector<double>{2.0}), 0.0);
    EXPECT_ANY_THROW(mean(std::vector<double>{}));
}

TEST(Stats, JackknifeMatchesExplicitLeaveOneOut)
{
    const std::vector<double> x{0.3, -1.2, 2.5, 0.7, 1.1, -0.4, 3.3, 0.0};
    const std::size_t n = x.size();
    std::vector<double> loo;
    for (std::size_t i = 0; i < n; ++i)
    {
        std::vector<double> y;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                y.push_back(x[j]);
        loo.push_back(sample_std(y));
    }
    const double m = mean(loo);
    double ss = 0.0;
    for (double v : loo)
        ss += (v - m) * (v - m);
    const double expected = std::sqrt(static_cast<double>(n - 1) / n * ss);
    EXPECT_NEAR(jackknife_std_error(x), expected, 1e-12);
}

TEST(Stats, Quantiles)
{
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_DOUBLE_EQ(quantile({0, 10}, 0.25), 2.5);
}

TEST(Ols, ExactLine)
{
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = ols(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);
    EXPECT_NEAR(f.slope_se, 0.0, 1e-12);
}

TEST(Ols, PropagatedErrors)
{
    // var(slope) = sum (x - xbar)^2 s^2 / Sxx^2 with s constant = s^2 / Sxx
    const std::vector<double> x{0, 1, 2, 3}, y{0, 1, 2, 3}, s{0.1, 0.1, 0.1, 0.1};
    const auto f = ols(x, y, s);
    EXPECT_NEAR(f.slope_se, 0.1 / std::sqrt(5.0), 1e-14);
}

TEST(Ols, ResidualErrorsMatchTextbook)
{
    const std::vector<double> x{1, 2, 3, 4, 5}, y{1.1, 1.9, 3.2, 3.8, 5.1};
    const auto f = ols(x, y);
    double sxx = 10.0, rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double r = y[i] - f.intercept - f.slope * x[i];
        rss += r * r;
    }
    EXPECT_NEAR(f.slope_se, std::sqrt(rss / 3.0 / sxx), 1e-12);
}
