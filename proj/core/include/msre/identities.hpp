#pragma once

#include <optional>

#include "msre/solvers.hpp"

namespace msre {

struct MainIdentityReport
{
    double shifted_energy = 0.0;   ///< H^{eta^s}(phi + s)
    double energy = 0.0;           ///< H^{eta}(phi)
    double linear_term = 0.0;      ///< (phi, -Laplacian s)
    double quadratic_term = 0.0;   ///< 1/2 ||grad s||^2
    double residual = 0.0;         ///< absolute
    bool comparable = true;        ///< false if an energy is infinite

    /// residual <= tol (1 + |H^eta(phi)|)
    bool holds(double tol = 1e-9) const noexcept;
};

/*!
 * Energy change under a joint shift of surface and disorder:
 * H^{eta^s}(phi + s) - H^eta(phi) against (phi, -Laplacian s) + 1/2 ||grad s||^2.
 * phi and s live on the same box; s may be nonzero on the shell.
 */
MainIdentityReport verify_main_identity(const DisorderField& eta, double lambda,
                                        const Surface& phi, const Surface& s);

/// |H^{eta,lambda}(phi) - lambda H^{eta^lambda,1}(phi / sqrt(lambda))|.
double rescaling_residual(const DisorderField& eta, double lambda, const Surface& phi);

struct BoundaryShiftReport
{
    double ground_energy = 0.0;          ///< GE with boundary data tau
    double shifted_ground_energy = 0.0;  ///< GE of eta^{-tau_bar}, zero boundary
    double dirichlet_energy = 0.0;       ///< ||tau||^2_DE
    double surface_residual = 0.0;       ///< max |phi_tau - (phi_0 + tau_bar)| / (1 + max |phi_tau|)
    double energy_residual = 0.0;        ///< |GE - GE_0 - DE/2| / (1 + |GE|)

    bool holds(double tol = 1e-9) const noexcept
    {
        return surface_residual <= tol && energy_residual <= tol;
    }
};

/*!
 * Solve the model with its boundary data and the zero-boundary model with
 * disorder eta^{-tau_bar}, both exactly, and compare.
 *
 * Grid solvers use a grid that follows tau_bar for the first problem; this
 * requires tau_bar to be a multiple of the grid step at every vertex
 * (PreconditionError naming the first offending vertex otherwise).
 * SolverKind::closed_form needs site terms affine in the height.
 */
BoundaryShiftReport verify_boundary_shift(const EnergyModel& model, SolverKind kind,
                                          const std::optional<HeightGrid>& grid = {});

}  // namespace msre
