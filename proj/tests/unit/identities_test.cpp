#include <gtest/gtest.h>

#include <cmath>

#include "msre/errors.hpp"
#include "msre/identities.hpp"
#include "msre/rng.hpp"

using namespace msre;

namespace {

DisorderField field(DisorderKind kind, int n = 1, std::uint64_t seed = 1)
{
    DisorderParams p;
    p.kind = kind;
    p.n = n;
    p.seed = seed;
    return DisorderField(p);
}

Surface random_surface(const BoxDomain& dom, int n, SequentialRng& rng, bool shell)
{
    Surface s(dom, n);
    for (double& x : s.interior())
        x = rng.uniform(-2.0, 2.0);
    if (shell)
        for (double& x : s.shell())
            x = rng.uniform(-2.0, 2.0);
    return s;
}

}  // namespace

TEST(MainIdentity, ZeroShiftIsExact)
{
    const auto dom = BoxDomain::cube(2, 3);
    SequentialRng rng(1);
    const auto phi = random_surface(dom, 2, rng, true);
    const auto r = verify_main_identity(field(DisorderKind::white, 2), 3.0, phi, Surface(dom, 2));
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_TRUE(r.comparable);
}

TEST(MainIdentity, RandomSurfacesOnWhiteDisorder)
{
    const auto dom = BoxDomain::cube(2, 4);
    SequentialRng rng(2);
    for (int k = 0; k < 20; ++k)
    {
        const auto phi = random_surface(dom, 2, rng, k % 2 == 0);
        const auto s = random_surface(dom, 2, rng, true);
        const auto r = verify_main_identity(field(DisorderKind::white, 2, k), 3.0, phi, s);
        EXPECT_TRUE(r.holds(1e-9)) << r.residual;
        EXPECT_LT(r.residual, 1e-9 * (1.0 + std::abs(r.energy)));
    }
}

TEST(MainIdentity, HarmonicShiftOfZeroBoundarySurface)
{
    // phi vanishes on the shell and s is harmonic in the box, so only the
    // Dirichlet energy of s remains.
    const auto dom = BoxDomain::cube(2, 3);
    SequentialRng rng(3);
    auto phi = random_surface(dom, 1, rng, false);
    Surface tau(dom, 1);
    for (double& x : tau.shell())
        x = rng.uniform(-1.0, 1.0);
    const auto s = harmonic_extension(tau);
    const auto eta = field(DisorderKind::white);
    const double lhs = hamiltonian(eta.shift(s), 1.0, phi + s) - hamiltonian(eta, 1.0, phi);
    EXPECT_NEAR(lhs, 0.5 * dirichlet_norm2(s), 1e-8);
}

TEST(MainIdentity, InfiniteEnergyIsIncomparable)
{
    const auto dom = BoxDomain::cube(1, 2);
    Surface phi(dom, 1);
    phi.at(0)[0] = 0.123456;
    const auto r = verify_main_identity(field(DisorderKind::poisson), 1.0, phi, Surface(dom, 1));
    EXPECT_FALSE(r.comparable);
}

TEST(Rescaling, ResidualIsRoundoff)
{
    const auto dom = BoxDomain::cube(2, 3);
    SequentialRng rng(4);
    for (double lambda : {0.3, 1.0, 4.0, 17.0})
    {
        const auto phi = random_surface(dom, 2, rng, true);
        const auto eta = field(DisorderKind::white, 2);
        const double scale = std::abs(hamiltonian(eta, lambda, phi));
        EXPECT_LE(rescaling_residual(eta, lambda, phi), 1e-12 * (1.0 + scale));
    }
}

TEST(BoundaryShift, ZeroBoundaryIsExact)
{
    const EnergyModel m(BoxDomain::cube(1, 4), field(DisorderKind::white), 1.0);
    const auto r = verify_boundary_shift(m, SolverKind::dp, HeightGrid::symmetric(1, 2.0, 0.25));
    EXPECT_EQ(r.surface_residual, 0.0);
    EXPECT_EQ(r.energy_residual, 0.0);
}

TEST(BoundaryShift, LinearDisorderClosedForm)
{
    SequentialRng rng(5);
    for (int d : {1, 2})
    {
        Surface tau(BoxDomain::cube(d, 4), 2);
        for (double& x : tau.shell())
            x = rng.uniform(-3.0, 3.0);
        const EnergyModel m(field(DisorderKind::linear, 2, 6), 2.0, tau);
        const auto r = verify_boundary_shift(m, SolverKind::closed_form);
        EXPECT_TRUE(r.holds(1e-9)) << r.surface_residual << " " << r.energy_residual;
    }
}

TEST(BoundaryShift, GridAlignedDp)
{
    const std::int64_t L = 5;
    const double step = 0.25;
    for (std::int64_t k : {1, 2, -3})
    {
        Surface tau(BoxDomain::cube(1, L), 1);
        tau.shell_at(1)[0] = static_cast<double>(k) * step * static_cast<double>(2 * L + 2);
        const EnergyModel m(field(DisorderKind::white, 1, 8), 1.0, tau);
        const auto r = verify_boundary_shift(m, SolverKind::dp, HeightGrid::symmetric(1, 4.0, step));
        EXPECT_TRUE(r.holds(1e-9)) << r.surface_residual << " " << r.energy_residual;
    }
}

TEST(BoundaryShift, MisalignedBoundaryNamesVertex)
{
    Surface tau(BoxDomain::cube(1, 3), 1);
    tau.shell_at(1)[0] = 0.3;
    const EnergyModel m(field(DisorderKind::white), 1.0, tau);
    try
    {
        verify_boundary_shift(m, SolverKind::dp, HeightGrid::symmetric(1, 2.0, 0.25));
        FAIL() << "expected a precondition error";
    }
    catch (const PreconditionError& e)
    {
        EXPECT_NE(std::string(e.what()).find("vertex"), std::string::npos) << e.what();
    }
}
