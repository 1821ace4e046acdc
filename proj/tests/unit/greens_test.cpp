#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "msre/errors.hpp"
#include "msre/greens.hpp"
#include "msre/rng.hpp"

using namespace msre;

TEST(GreenExact, SingleSite)
{
    const BoxDomain dom(Vertex{0}, Vertex{0});
    const auto g = green_exact(dom, Vertex{0});
    EXPECT_NEAR(g.at(0), 0.5, 1e-14);
}

TEST(GreenExact, OneDimensionalClosedForm)
{
    // A G = e_v with A = 2 - shift: G^v(x) = (x - a)(b - v) / (b - a) for x <= v
    for (std::int64_t L : {3, 10})
    {
        const auto dom = BoxDomain::cube(1, L);
        const double a = static_cast<double>(-L - 1), b = static_cast<double>(L + 1);
        for (std::int64_t v = -L; v <= L; v += 2)
        {
            const auto g = green_exact(dom, Vertex{v});
            EXPECT_LE(g.residual(), 1e-10);
            for (std::int64_t x = -L; x <= L; ++x)
            {
                const double lo = static_cast<double>(std::min(x, v));
                const double hi = static_cast<double>(std::max(x, v));
                EXPECT_NEAR(g(Vertex{x}), (lo - a) * (b - hi) / (b - a), 1e-10);
            }
        }
    }
}

TEST(GreenExact, DiagonalBelowTwiceBoundaryDistance)
{
    for (std::int64_t L : {4, 16, 64})
    {
        const auto dom = BoxDomain::cube(1, L);
        for (std::int64_t v = -L; v <= L; ++v)
        {
            const auto g = green_exact(dom, Vertex{v});
            EXPECT_LE(g(Vertex{v}), 2.0 * static_cast<double>(dom.boundary_distance(Vertex{v})));
        }
    }
}

TEST(GreenExact, SymmetricAndZeroOffTheBox)
{
    const auto dom = BoxDomain::cube(2, 4);
    const auto gu = green_exact(dom, Vertex{1, -2});
    const auto gv = green_exact(dom, Vertex{-3, 0});
    EXPECT_NEAR(gu(Vertex{-3, 0}), gv(Vertex{1, -2}), 1e-11);
    EXPECT_EQ(gu(Vertex{5, 0}), 0.0);
    EXPECT_THROW(green_exact(dom, Vertex{5, 0}), DomainError);
}

TEST(GreenMc, SingleSiteIsOneVisit)
{
    const BoxDomain dom(Vertex{0}, Vertex{0});
    const auto e = green_mc(dom, Vertex{0}, Vertex{0}, 1000, 1);
    EXPECT_EQ(e.estimate, 0.5);
    EXPECT_EQ(e.standard_error, 0.0);
}

TEST(GreenMc, MatchesExactOnRandomPairs)
{
    const auto dom = BoxDomain::cube(2, 6);
    SequentialRng rng(3);
    int outside = 0;
    for (int k = 0; k < 20; ++k)
    {
        const Vertex v{static_cast<std::int64_t>(rng.below(13)) - 6,
                       static_cast<std::int64_t>(rng.below(13)) - 6};
        const Vertex x{static_cast<std::int64_t>(rng.below(13)) - 6,
                       static_cast<std::int64_t>(rng.below(13)) - 6};
        const double exact = green_exact(dom, v)(x);
        const auto mc = green_mc(dom, v, x, 20000, 100 + k);
        if (std::abs(mc.estimate - exact) > 3.0 * mc.standard_error)
            ++outside;
    }
    // 20 pairs at 3 sigma: more than two misses is far in the tail
    EXPECT_LE(outside, 2);
}

TEST(GreenMc, Box8RandomPair)
{
    const auto dom = BoxDomain::cube(2, 8);
    const Vertex v{2, -3}, u{-1, 4};
    const auto mc = green_mc(dom, v, u, 40000, 9);
    EXPECT_NEAR(mc.estimate, green_exact(dom, v)(u), 3.0 * mc.standard_error);
}

TEST(GreenMc, IndependentOfThreadCount)
{
    const auto dom = BoxDomain::cube(2, 4);
    const auto a = green_mc(dom, Vertex{0, 0}, Vertex{1, 1}, 5000, 4, 1);
    const auto b = green_mc(dom, Vertex{0, 0}, Vertex{1, 1}, 5000, 4, 3);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(GreenMc, Preconditions)
{
    const auto dom = BoxDomain::cube(1, 3);
    EXPECT_THROW(green_mc(dom, Vertex{0}, Vertex{4}, 1000), PreconditionError);
    EXPECT_THROW(green_mc(dom, Vertex{0}, Vertex{1}, 99), PreconditionError);
}

TEST(PotentialKernel, OneDimensionIsAbsoluteValue)
{
    EXPECT_EQ(potential_kernel(1, Vertex{7}), 7.0);
    EXPECT_EQ(potential_kernel(1, Vertex{-3}), 3.0);
    EXPECT_EQ(potential_kernel(1, Vertex{0}), 0.0);
}

TEST(PotentialKernel, PlanarExactValues)
{
    const double pi = std::numbers::pi;
    EXPECT_EQ(potential_kernel(2, Vertex{0, 0}), 0.0);
    EXPECT_NEAR(potential_kernel(2, Vertex{1, 0}), 1.0, 1e-6);
    EXPECT_NEAR(potential_kernel(2, Vertex{0, -1}), 1.0, 1e-6);
    EXPECT_NEAR(potential_kernel(2, Vertex{1, 1}), 4.0 / pi, 1e-6);
    EXPECT_NEAR(potential_kernel(2, Vertex{2, 0}), 4.0 - 8.0 / pi, 1e-6);
}

TEST(PotentialKernel, PlanarHarmonicOffOrigin)
{
    // a is harmonic away from 0 and has Laplacian 1 at 0
    PotentialKernel a(2);
    for (const Vertex& x : {Vertex{3, 1}, Vertex{-2, 5}, Vertex{7, 0}})
    {
        double lap = -4.0 * a(x);
        for (const Vertex& e : {Vertex{1, 0}, Vertex{-1, 0}, Vertex{0, 1}, Vertex{0, -1}})
            lap += a(Vertex{x[0] + e[0], x[1] + e[1]});
        EXPECT_NEAR(lap, 0.0, 1e-5);
    }
    double lap0 = 0.0;
    for (const Vertex& e : {Vertex{1, 0}, Vertex{-1, 0}, Vertex{0, 1}, Vertex{0, -1}})
        lap0 += a(e);
    EXPECT_NEAR(lap0 / 4.0, 1.0, 1e-6);
}

TEST(PotentialKernel, PlanarLogarithmicAsymptotic)
{
    const double pi = std::numbers::pi;
    const double c = (2.0 * std::numbers::egamma + std::log(8.0)) / pi;
    for (std::int64_t r : {8, 16, 32})
    {
        const double a = potential_kernel(2, Vertex{r, 0});
        EXPECT_NEAR(a - 2.0 / pi * std::log(static_cast<double>(r)), c, 0.1 / static_cast<double>(r * r) + 1e-5);
    }
}

TEST(PotentialKernel, HigherDimensionsUnsupported)
{
    EXPECT_THROW(potential_kernel(3, Vertex{1, 0, 0}), UnsupportedError);
}

TEST(Walks, GamblerRuin)
{
    const auto a = gambler_ruin_check(5, 5, 100000, 1);
    EXPECT_DOUBLE_EQ(a.expected, 0.5);
    EXPECT_TRUE(a.within(3.0)) << a.estimate;
    const auto b = gambler_ruin_check(1, 9, 100000, 2);
    EXPECT_DOUBLE_EQ(b.expected, 0.9);
    EXPECT_TRUE(b.within(3.0)) << b.estimate;
    EXPECT_THROW(gambler_ruin_check(0, 3, 100000), ParameterError);
    EXPECT_THROW(gambler_ruin_check(3, 3, 10), ParameterError);
}

TEST(Walks, ExitTailDecreasing)
{
    const auto r = exit_time_tail_check(4, {16, 64, 256, 1024, 4096}, 20000, 3);
    EXPECT_TRUE(r.monotone);
    for (std::size_t k = 1; k < r.probability.size(); ++k)
        EXPECT_LE(r.probability[k], r.probability[k - 1]);
    // P(tau_n >= t) ~ sqrt(2 / pi) n / sqrt(t)
    EXPECT_NEAR(r.constant, std::sqrt(2.0 / std::numbers::pi), 0.25);
}

TEST(Bounds, OneDimensionalDiagonalConstant)
{
    const auto rep = check_green_bounds(1, {8, 32, 128}, 12, 1);
    const auto& s = rep.get("diag_over_r");
    for (double c : s.empirical_sup)
        EXPECT_LE(c, 2.0);
    EXPECT_TRUE(s.stable());
    EXPECT_EQ(rep.get("diag_increment").violations, 0u);
}

TEST(Bounds, PlanarAndSpatialStable)
{
    const auto r2 = check_green_bounds(2, {8, 16, 32}, 8, 2);
    for (const auto& s : r2.bounds)
        EXPECT_TRUE(s.stable()) << s.name << " growth " << s.growth();
    const auto r3 = check_green_bounds(3, {4, 8}, 6, 3);
    for (const auto& s : r3.bounds)
        EXPECT_EQ(s.violations, 0u) << s.name;
    EXPECT_THROW(check_green_bounds(4, {4}, 2), ParameterError);
    EXPECT_THROW(check_green_bounds(1, {8}, 2).get("nope"), ContractError);
}
