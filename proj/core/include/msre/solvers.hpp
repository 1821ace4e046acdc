#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msre/energy.hpp"
#include "msre/height_grid.hpp"

namespace msre {

enum class Exactness
{
    exact,          ///< continuum minimizer (closed form)
    exact_on_grid,  ///< minimizer over grid-valued surfaces
    heuristic
};

std::string to_string(Exactness e);

struct GroundState
{
    explicit GroundState(Surface s) : surface(std::move(s)) {}

    Surface surface;
    double energy = 0.0;
    std::string solver;
    Exactness exactness = Exactness::heuristic;
    std::size_t iterations = 0;   ///< sweeps, CG iterations, augmentations
    double flow = 0.0;            ///< max-flow value (min-cut solver)
    bool clipped = false;         ///< an infinite unary was capped
    bool window_hit = false;      ///< optimum touched the height window edge
    std::vector<double> energy_trace;  ///< per sweep (local search)
};

/*!
 * Exact minimizer over grid-valued surfaces for d = 1 by dynamic
 * programming over sites. Ties go to the lexicographically smallest height
 * sequence. Point-set disorders use their own points inside the grid window
 * as candidates instead of the grid.
 */
GroundState solve_dp_1d(const EnergyModel& model, const HeightGrid& grid);

/*!
 * Exact minimizer over grid-valued surfaces for n = 1 and any d through a
 * layered s-t cut (one node per vertex and level). The returned labels come
 * from the source-minimal minimum cut, i.e. the componentwise smallest
 * minimizer.
 */
GroundState solve_mincut(const EnergyModel& model, const HeightGrid& grid);

enum class LocalInit
{
    zero,
    harmonic,
    noise
};

struct LocalOptions
{
    std::size_t restarts = 3;
    std::size_t sweeps = 200;
    std::uint64_t seed = 0;
    /// Accept a move only if it lowers the energy by more than this.
    double min_improvement = 1e-18;
    /// Golden-section refinement rounds for continuous disorders.
    int refine_rounds = 2;
    /// Explicit starting surfaces (interior values); tried before the
    /// standard inits.
    std::vector<std::vector<double>> initial;
};

/*!
 * Coordinate descent: each site update minimizes the one-site energy over
 * the grid (or the point set) and refines continuously around the best
 * candidate for disorders with continuous paths. Best over restarts.
 */
GroundState solve_local(const EnergyModel& model, const HeightGrid& grid,
                        const LocalOptions& options = {});

/*!
 * Linear disorder with zero boundary data: phi = -lambda A^{-1} zeta with
 * A the Dirichlet Laplacian. UnsupportedError for nonzero boundary data.
 */
GroundState solve_linear_closed_form(const EnergyModel& model);

/*!
 * Minimizer of any model whose site terms are affine in the height (the
 * linear kind and its shifts / rescalings), with arbitrary boundary data.
 */
GroundState solve_quadratic_dirichlet(const EnergyModel& model,
                                      double tolerance = 1e-10);

enum class SolverKind
{
    automatic,
    dp,
    mincut,
    local,
    closed_form
};

SolverKind parse_solver_kind(const std::string& name);
std::string to_string(SolverKind kind);

struct SolverOptions
{
    SolverKind kind = SolverKind::automatic;
    std::optional<double> window;  ///< W; policy value if unset
    std::optional<double> step;
    bool retry_window = true;
    LocalOptions local;
};

/// Grid the options select for a model.
HeightGrid grid_for(const EnergyModel& model, const SolverOptions& options);

/*!
 * Solve with the grid policy. If an optimal height lands on the window
 * edge the solve is repeated once with the window doubled; a second hit
 * is reported through GroundState::window_hit.
 */
GroundState solve(const EnergyModel& model, const SolverOptions& options = {});

}  // namespace msre
