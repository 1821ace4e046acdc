#include "msre/identities.hpp"

#include <cmath>

#include "msre/errors.hpp"

namespace msre {

bool MainIdentityReport::holds(double tol) const noexcept
{
    return comparable && residual <= tol * (1.0 + std::abs(energy));
}

MainIdentityReport verify_main_identity(const DisorderField& eta, double lambda,
                                        const Surface& phi, const Surface& s)
{
    if (!(phi.domain() == s.domain()) || phi.components() != s.components())
        throw ContractError("surface and shift must share domain and n");
    MainIdentityReport r;
    r.energy = hamiltonian(eta, lambda, phi);
    r.shifted_energy = hamiltonian(eta.shift(s), lambda, phi + s);
    r.linear_term = -l2_inner(phi, laplacian(s));
    r.quadratic_term = 0.5 * dirichlet_norm2(s);
    if (!std::isfinite(r.energy) || !std::isfinite(r.shifted_energy))
    {
        r.comparable = false;
        r.residual = kInfinity;
        return r;
    }
    r.residual =
        std::abs(r.shifted_energy - r.energy - r.linear_term - r.quadratic_term);
    return r;
}

double rescaling_residual(const DisorderField& eta, double lambda, const Surface& phi)
{
    const double lhs = hamiltonian(eta, lambda, phi);
    const double rhs = lambda * hamiltonian(eta.rescale(lambda), 1.0,
                                            phi * (1.0 / std::sqrt(lambda)));
    return std::abs(lhs - rhs);
}

namespace {

std::string vertex_name(const Vertex& v)
{
    std::string s = "(";
    for (std::size_t a = 0; a < v.size(); ++a)
        s += (a ? "," : "") + std::to_string(v[a]);
    return s + ")";
}

}  // namespace

BoundaryShiftReport verify_boundary_shift(const EnergyModel& model, SolverKind kind,
                                          const std::optional<HeightGrid>& grid)
{
    const auto& dom = model.domain();
    const int n = model.components();
    Surface tau_bar = harmonic_extension(model.tau(), 1e-12);

    HeightGrid plain;
    HeightGrid follow;
    const bool on_grid = kind != SolverKind::closed_form;
    if (on_grid)
    {
        plain = grid ? *grid : grid_for(model, SolverOptions{});
        plain.site_offset.clear();
        // snap tau_bar to the grid lattice, refusing if it is not aligned
        for (std::size_t i = 0; i < dom.size(); ++i)
        {
            for (int a = 0; a < n; ++a)
            {
                double& x = tau_bar.at(i)[a];
                double k = std::round(x / plain.step);
                if (std::abs(x - k * plain.step) > 1e-9 * plain.step)
                {
                    throw PreconditionError(
                        "harmonic extension of the boundary data is not a multiple of "
                        "the grid step at vertex "
                        + vertex_name(dom.vertex(i)));
                }
                x = k * plain.step;
            }
        }
        follow = plain;
        follow.site_offset.assign(tau_bar.interior().begin(), tau_bar.interior().end());
    }

    EnergyModel shifted(model.disorder().shift(tau_bar * -1.0), model.lambda(),
                        Surface(dom, n));

    auto run = [&](const EnergyModel& m, const HeightGrid& g) {
        switch (kind)
        {
            case SolverKind::closed_form: return solve_quadratic_dirichlet(m, 1e-12);
            case SolverKind::dp: return solve_dp_1d(m, g);
            case SolverKind::mincut: return solve_mincut(m, g);
            default: break;
        }
        throw UnsupportedError("boundary-shift verification needs an exact solver");
    };

    GroundState with_tau = run(model, follow);
    GroundState zero = run(shifted, plain);

    BoundaryShiftReport r;
    r.ground_energy = with_tau.energy;
    r.shifted_ground_energy = zero.energy;
    r.dirichlet_energy = dirichlet_norm2(tau_bar);

    Surface predicted = zero.surface + tau_bar;
    double scale = 0.0;
    for (double x : with_tau.surface.interior())
        scale = std::max(scale, std::abs(x));
    r.surface_residual = max_abs_difference(with_tau.surface, predicted) / (1.0 + scale);
    r.energy_residual =
        std::abs(r.ground_energy - r.shifted_ground_energy - 0.5 * r.dirichlet_energy)
        / (1.0 + std::abs(r.ground_energy));
    return r;
}

}  // namespace msre
