#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msre/errors.hpp"
#include "msre/experiments.hpp"
#include "msre/greens.hpp"
#include "msre/stats.hpp"

using namespace msre;

namespace {

ExperimentConfig linear_config(std::vector<std::int64_t> sizes, std::size_t replicas)
{
    ExperimentConfig c;
    c.d = 1;
    c.n = 1;
    c.disorder.kind = DisorderKind::linear;
    c.sizes = std::move(sizes);
    c.replicas = replicas;
    c.seed = 17;
    c.solver.kind = SolverKind::closed_form;
    c.band_maxima = false;
    c.profile = false;
    c.threads = 1;
    return c;
}

ExperimentConfig white_config(std::vector<std::int64_t> sizes, std::size_t replicas)
{
    ExperimentConfig c;
    c.d = 1;
    c.sizes = std::move(sizes);
    c.replicas = replicas;
    c.seed = 5;
    c.solver.kind = SolverKind::dp;
    c.threads = 1;
    return c;
}

// Exact laws for linear disorder in d = 1 with n = 1:
// phi_0 = -lambda sum_w G^0(w) zeta_w is centred Gaussian, so
// E|phi_0| = lambda sqrt(2 / pi) ||G^0||_2, and
// Var GE = lambda^4 / 2 tr(A^-2) with the eigenvalues 2 - 2 cos(k pi / (2L + 2)).
double exact_mean_abs_center(std::int64_t L, double lambda)
{
    const auto dom = BoxDomain::cube(1, L);
    const auto g = green_exact(dom, Vertex{0});
    double s = 0.0;
    for (double x : g.values())
        s += x * x;
    return lambda * std::sqrt(2.0 / std::numbers::pi) * std::sqrt(s);
}

double exact_std_ge(std::int64_t L, double lambda)
{
    const double N = static_cast<double>(2 * L + 2);
    double tr = 0.0;
    for (std::int64_t k = 1; k <= 2 * L + 1; ++k)
    {
        const double mu = 2.0 - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / N);
        tr += 1.0 / (mu * mu);
    }
    return std::sqrt(0.5 * std::pow(lambda, 4) * tr);
}

double oracle_slope(const std::vector<std::int64_t>& sizes, double (*f)(std::int64_t, double))
{
    std::vector<double> x, y;
    for (auto L : sizes)
    {
        x.push_back(std::log(static_cast<double>(L)));
        y.push_back(std::log(f(L, 1.0)));
    }
    return ols(x, y).slope;
}

}  // namespace

TEST(Replicas, RepeatedRunIsBitIdentical)
{
    auto c = white_config({8}, 1);
    const auto a = run_replicas(c);
    const auto b = run_replicas(c);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].ge, b[0].ge);
    EXPECT_EQ(a[0].band_max, b[0].band_max);
    EXPECT_EQ(a[0].norms, b[0].norms);
}

TEST(Replicas, IndependentOfThreadCount)
{
    auto c = white_config({4, 8}, 5);
    const auto a = run_replicas(c);
    c.threads = 3;
    const auto b = run_replicas(c);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        EXPECT_EQ(a[k].L, b[k].L);
        EXPECT_EQ(a[k].replica, b[k].replica);
        EXPECT_EQ(a[k].ge, b[k].ge);
        EXPECT_EQ(a[k].norms, b[k].norms);
    }
}

TEST(Replicas, LinearGroundEnergyMatchesQuadraticForm)
{
    auto c = linear_config({6}, 4);
    c.lambda = 1.3;
    const auto res = run_replicas(c);
    for (const auto& r : res)
    {
        const auto m = replica_model(c, r.L, r.replica);
        const auto& dom = m.domain();
        double q = 0.0;
        for (std::size_t w = 0; w < dom.size(); ++w)
        {
            const auto g = green_exact(dom, dom.vertex(w));
            const double zw = m.disorder().at(dom.vertex(w)).linear_coefficients()->slope[0];
            for (std::size_t v = 0; v < dom.size(); ++v)
                q += zw * g.at(v) * m.disorder().at(dom.vertex(v)).linear_coefficients()->slope[0];
        }
        EXPECT_NEAR(r.ge, -0.5 * c.lambda * c.lambda * q, 1e-9 * std::abs(r.ge));
    }
}

TEST(Replicas, PoissonHeightsOnCandidates)
{
    auto c = white_config({8}, 3);
    c.disorder.kind = DisorderKind::poisson;
    c.keep_surfaces = true;
    for (const auto& r : run_replicas(c))
    {
        ASSERT_TRUE(r.surface.has_value());
        const auto m = replica_model(c, r.L, r.replica);
        for (std::size_t i = 0; i < m.domain().size(); ++i)
            EXPECT_EQ(m.disorder().at(m.domain().vertex(i)).eval(r.surface->at(i)), 0.0);
    }
}

TEST(Replicas, InfeasibilityCarriesSizeAndReplica)
{
    auto c = white_config({4}, 2);
    c.disorder.kind = DisorderKind::poisson;
    c.disorder.intensity = 1e-9;
    try
    {
        run_replicas(c);
        FAIL() << "expected infeasibility";
    }
    catch (const InfeasibleError& e)
    {
        EXPECT_NE(std::string(e.what()).find("L = 4"), std::string::npos) << e.what();
    }
}

TEST(Replicas, BudgetRefusedBeforeWork)
{
    auto c = white_config({8, 16}, 10);
    c.budget_node_seconds = 0.0;
    EXPECT_GT(estimated_cost(c), 0.0);
    EXPECT_THROW(run_replicas(c), BudgetError);
}

TEST(Replicas, ValidationNamesField)
{
    auto c = white_config({8}, 0);
    try
    {
        validate(c);
        FAIL();
    }
    catch (const ParameterError& e)
    {
        EXPECT_NE(std::string(e.what()).find("replicas"), std::string::npos);
    }
    c = white_config({16, 8}, 2);
    EXPECT_THROW(validate(c), ParameterError);
}

TEST(Fits, SyntheticPowerLaw)
{
    const std::vector<std::int64_t> sizes{8, 16, 32, 64};
    std::vector<double> v, v2, se;
    for (auto L : sizes)
    {
        v.push_back(3.0 * std::pow(static_cast<double>(L), 0.7));
        v2.push_back(2.0 * v.back());
        se.push_back(0.01 * v.back());
    }
    const auto f = fit_loglog("h", sizes, v, se);
    const auto f2 = fit_loglog("h", sizes, v2, se);
    EXPECT_NEAR(f.slope, 0.7, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
    EXPECT_NEAR(f2.slope, f.slope, 1e-12);
    EXPECT_NEAR(f2.intercept - f.intercept, std::log(2.0), 1e-12);
    const auto g = fit_loglog("h", sizes, v, se, 16);
    EXPECT_EQ(g.sizes.size(), 3u);
    EXPECT_EQ(g.window_lo, 16);
    EXPECT_EQ(g.window_hi, 64);
}

TEST(Fits, Preconditions)
{
    EXPECT_THROW(fit_loglog("h", {8}, {1.0}, {0.1}), PreconditionError);
    try
    {
        fit_loglog("h", {8, 16}, {1.0, 0.0}, {0.1, 0.1});
        FAIL();
    }
    catch (const PreconditionError& e)
    {
        EXPECT_NE(std::string(e.what()).find("L = 16"), std::string::npos) << e.what();
    }
    auto c = white_config({8}, 4);
    EXPECT_THROW(estimate_transversal(run_replicas(c), c), PreconditionError);
}

TEST(Fits, LinearTransversalExponent)
{
    const std::vector<std::int64_t> sizes{16, 32, 64, 128, 256};
    const auto c = linear_config(sizes, 200);
    const auto res = run_replicas(c);
    const auto xi = estimate_transversal(res, c);
    EXPECT_GE(xi.slope, 1.45);
    EXPECT_LE(xi.slope, 1.55);
    EXPECT_NEAR(xi.slope, oracle_slope(sizes, exact_mean_abs_center), 3.0 * xi.slope_se);
    for (std::size_t k = 0; k < sizes.size(); ++k)
        EXPECT_NEAR(xi.values[k], exact_mean_abs_center(sizes[k], 1.0), 3.0 * xi.values_se[k]);

    const auto chi = estimate_energy_fluct(res, c);
    EXPECT_NEAR(chi.slope, oracle_slope(sizes, exact_std_ge), 3.0 * chi.slope_se);
    for (std::size_t k = 0; k < sizes.size(); ++k)
        EXPECT_NEAR(chi.values[k], exact_std_ge(sizes[k], 1.0), 3.0 * chi.values_se[k]);
}

TEST(Scaling, ConsistentSyntheticFits)
{
    ExponentFit xi, chi;
    xi.d = chi.d = 1;
    xi.n = chi.n = 1;
    xi.disorder = chi.disorder = "white";
    xi.lambda = chi.lambda = 1.0;
    xi.slope = 2.0 / 3.0;
    chi.slope = 1.0 / 3.0;
    const auto r = check_scaling_relation(xi, chi, 1);
    EXPECT_NEAR(r.gap, 0.0, 1e-15);
    EXPECT_TRUE(r.pass);
    ExponentFit xi2 = xi;
    xi2.d = 2;
    EXPECT_THROW(check_scaling_relation(xi2, chi, 2), ContractError);
}

TEST(Sandwich, ProxyFormulas)
{
    const std::vector<double> m(5, 1.7);
    EXPECT_DOUBLE_EQ(sandwich_lower_proxy(m), 1.7 * 1.7);
    const std::vector<double> grow{1.0, 2.0, 3.0};
    // max(1, 4 / 2, 9 / 4)
    EXPECT_DOUBLE_EQ(sandwich_lower_proxy(grow), 2.25);
    const std::vector<double> fourth{16.0, 81.0};
    EXPECT_DOUBLE_EQ(sandwich_upper_proxy(fourth), (1.0 + 4.0) + 0.5 * (1.0 + 9.0));
}

TEST(Sandwich, FrozenZeroDisorderIsDegenerate)
{
    auto c = linear_config({8, 16, 32}, 4);
    c.disorder.zero_linear = true;
    c.band_maxima = true;
    const auto res = run_replicas(c);
    for (const auto& r : res)
        for (double m : r.band_max)
            EXPECT_EQ(m, 0.0);
    const auto s = check_d1_sandwich(res, c);
    EXPECT_TRUE(s.degenerate);
    EXPECT_TRUE(s.pass);
    for (double x : s.std_ge)
        EXPECT_EQ(x, 0.0);
}

TEST(Sandwich, MissingBandMaxima)
{
    auto c = white_config({4, 8}, 2);
    c.band_maxima = false;
    EXPECT_THROW(check_d1_sandwich(run_replicas(c), c), PreconditionError);
}

TEST(LimitShape, ZeroSlopeHasZeroGap)
{
    auto c = white_config({16, 32}, 30);
    const auto r = check_limit_shape_d1(c, {0.0, 1.0});
    ASSERT_EQ(r.points.size(), 2u);
    EXPECT_EQ(r.points[0].gap, 0.0);
    EXPECT_LE(r.max_identity_residual, r.identity_tolerance);
    EXPECT_GT(r.identity_checks, 0u);
}

TEST(LimitShape, MisalignedSlopeRefused)
{
    auto c = white_config({16, 32}, 30);
    EXPECT_THROW(check_limit_shape_d1(c, {0.3}), PreconditionError);
}

TEST(Profile, QuantileFloorCountsAlmostEveryVertex)
{
    auto c = white_config({16}, 30);
    const auto res = run_replicas(c);
    std::vector<double> all;
    for (const auto& r : res)
        all.insert(all.end(), r.norms.begin(), r.norms.end());
    const double q05 = quantile(all, 0.05);
    const auto f = delocalization_fraction(res, c, {q05});
    EXPECT_GE(f.fraction[0], 0.95);
    EXPECT_TRUE(f.pass);
}

TEST(Profile, EnvelopeConstantStableInOneDimension)
{
    auto c = white_config({64, 128, 256}, 30);
    c.band_maxima = false;
    const auto p = localization_profile(run_replicas(c), c);
    EXPECT_DOUBLE_EQ(p.exponent, 0.75);
    ASSERT_EQ(p.mean_norm.size(), 3u);
    // per-size sup of E||phi_v|| / r^(3/4) over the upper half of the bins
    std::vector<double> sup;
    double all_sup = 0.0, all_inf = 1e300;
    for (std::size_t k = 0; k < 3; ++k)
    {
        const auto L = static_cast<std::size_t>(p.sizes[k]);
        double s = 0.0;
        for (std::size_t r = (L + 2) / 2; r <= L + 1; ++r)
        {
            const double q = p.mean_norm[k][r - 1] / std::pow(static_cast<double>(r), 0.75);
            s = std::max(s, q);
            all_inf = std::min(all_inf, q);
        }
        sup.push_back(s);
        all_sup = std::max(all_sup, s);
    }
    EXPECT_DOUBLE_EQ(p.ratio_sup, all_sup);
    EXPECT_DOUBLE_EQ(p.ratio_inf, all_inf);
    EXPECT_LE(*std::max_element(sup.begin(), sup.end()),
              1.5 * *std::min_element(sup.begin(), sup.end()));
    // the central plateau is at least as high as the profile near r = L / 2
    for (std::size_t k = 0; k < 3; ++k)
    {
        const auto L = static_cast<std::size_t>(p.sizes[k]);
        EXPECT_GT(p.mean_norm[k][L], 0.8 * p.mean_norm[k][L / 2]);
    }
}

TEST(Concentration, FrozenDisorderHasNoVariance)
{
    auto c = white_config({4, 8}, 30);
    c.freeze_disorder = true;
    const auto res = run_replicas(c);
    for (const auto& g : group_by_size(res))
    {
        std::vector<double> ge;
        for (const auto* r : g)
        {
            ge.push_back(r->ge);
            EXPECT_EQ(r->ge, g.front()->ge);
        }
        EXPECT_EQ(sample_variance(ge), 0.0);
    }
    const auto rep = check_concentration(res, c);
    for (double v : rep.variance)
        EXPECT_EQ(v, 0.0);
    EXPECT_EQ(rep.exceed2, 0.0);
}

TEST(Concentration, DoublingLambdaScalesVarianceByAtMostSix)
{
    auto c = white_config({16}, 100);
    c.band_maxima = false;
    c.profile = false;
    auto var_at = [&](double lambda) {
        c.lambda = lambda;
        std::vector<double> ge;
        for (const auto& r : run_replicas(c))
            ge.push_back(r.ge);
        return sample_variance(ge);
    };
    const double v1 = var_at(1.0);
    const double v2 = var_at(2.0);
    EXPECT_GT(v2, v1);
    EXPECT_LE(v2 / v1, 6.0);
}

TEST(Concentration, OneDimensionalSlopes)
{
    auto c = white_config({16, 32, 64}, 60);
    c.band_maxima = false;
    c.profile = false;
    const auto r = check_concentration(run_replicas(c), c);
    EXPECT_LE(r.variance_slope, 1.1);
    EXPECT_LE(r.exceed3, 0.02 + 1e-12);
}
