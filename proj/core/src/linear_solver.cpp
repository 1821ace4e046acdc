#include <cmath>

#include "msre/errors.hpp"
#include "msre/linear_solve.hpp"
#include "msre/solvers.hpp"

namespace msre {

std::string to_string(Exactness e)
{
    switch (e)
    {
        case Exactness::exact: return "exact";
        case Exactness::exact_on_grid: return "exact-on-grid";
        case Exactness::heuristic: return "heuristic";
    }
    return "?";
}

SolverKind parse_solver_kind(const std::string& name)
{
    if (name == "auto")
        return SolverKind::automatic;
    if (name == "dp")
        return SolverKind::dp;
    if (name == "mincut")
        return SolverKind::mincut;
    if (name == "local")
        return SolverKind::local;
    if (name == "closed_form")
        return SolverKind::closed_form;
    throw ParameterError("unknown solver '" + name + "'");
}

std::string to_string(SolverKind kind)
{
    switch (kind)
    {
        case SolverKind::automatic: return "auto";
        case SolverKind::dp: return "dp";
        case SolverKind::mincut: return "mincut";
        case SolverKind::local: return "local";
        case SolverKind::closed_form: return "closed_form";
    }
    return "?";
}

GroundState solve_quadratic_dirichlet(const EnergyModel& model, double tolerance)
{
    const auto& dom = model.domain();
    const int n = model.components();
    const int d = dom.dim();
    std::vector<VertexDisorder::Affine> coef(dom.size());
    Vertex v(d);
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        auto c = model.disorder().at(v).linear_coefficients();
        if (!c)
            throw UnsupportedError("closed-form solve needs site terms affine in the height");
        coef[i] = std::move(*c);
    }

    Surface phi = model.zero_surface();
    std::vector<double> rhs(dom.size());
    std::size_t iterations = 0;
    for (int a = 0; a < n; ++a)
    {
        for (std::size_t i = 0; i < dom.size(); ++i)
            rhs[i] = -model.lambda() * coef[i].slope[a];
        for (std::size_t s = 0; s < dom.shell_size(); ++s)
            rhs[dom.shell_neighbor(s)] += model.tau().shell_at(s)[a];
        CgOptions opt;
        opt.tolerance = tolerance;
        auto res = solve_dirichlet(dom, rhs, opt);
        iterations += res.iterations;
        for (std::size_t i = 0; i < dom.size(); ++i)
            phi.at(i)[a] = res.x[i];
    }
    GroundState gs(std::move(phi));
    gs.energy = energy(model, gs.surface);
    gs.solver = "closed_form";
    gs.exactness = Exactness::exact;
    gs.iterations = iterations;
    return gs;
}

GroundState solve_linear_closed_form(const EnergyModel& model)
{
    if (model.disorder().kind() != DisorderKind::linear)
        throw UnsupportedError("closed form needs linear disorder");
    if (!model.zero_boundary())
        throw UnsupportedError(
            "closed form needs zero boundary data; shift the disorder by the "
            "harmonic extension instead");
    return solve_quadratic_dirichlet(model);
}

HeightGrid grid_for(const EnergyModel& model, const SolverOptions& options)
{
    const auto& dom = model.domain();
    std::int64_t L = 0;
    for (int a = 0; a < dom.dim(); ++a)
        L = std::max(L, (dom.extent(a) - 1) / 2);
    HeightGrid g = HeightGrid::policy(dom.dim(), model.components(), L, model.lambda());
    if (options.window || options.step)
    {
        double W = options.window.value_or(g.hi[0]);
        double step = options.step.value_or(std::min(0.25, W / 64.0));
        g = HeightGrid::symmetric(model.components(), W, step);
    }
    return g;
}

namespace {

GroundState solve_on_grid(const EnergyModel& model, SolverKind kind,
                          const HeightGrid& grid, const LocalOptions& local)
{
    switch (kind)
    {
        case SolverKind::dp: return solve_dp_1d(model, grid);
        case SolverKind::mincut: return solve_mincut(model, grid);
        case SolverKind::local: return solve_local(model, grid, local);
        default: break;
    }
    throw ContractError("not a grid solver");
}

bool hits_window(const GroundState& gs, const HeightGrid& grid, bool point_set)
{
    const double margin = point_set ? 1.0 : 0.5 * grid.step;
    for (std::size_t i = 0; i < gs.surface.domain().size(); ++i)
        if (grid.on_edge(i, gs.surface.at(i), margin))
            return true;
    return false;
}

}  // namespace

GroundState solve(const EnergyModel& model, const SolverOptions& options)
{
    SolverKind kind = options.kind;
    const bool point_set = model.disorder().is_point_set();
    if (kind == SolverKind::automatic)
    {
        if (model.domain().dim() == 1)
            kind = SolverKind::dp;
        else if (model.components() == 1 && !point_set)
            kind = SolverKind::mincut;
        else
            kind = SolverKind::local;
    }
    if (kind == SolverKind::closed_form)
        return model.zero_boundary() ? solve_linear_closed_form(model)
                                     : solve_quadratic_dirichlet(model);

    HeightGrid grid = grid_for(model, options);
    GroundState gs = solve_on_grid(model, kind, grid, options.local);
    if (hits_window(gs, grid, point_set))
    {
        if (options.retry_window)
        {
            grid = grid.widened();
            gs = solve_on_grid(model, kind, grid, options.local);
        }
        gs.window_hit = hits_window(gs, grid, point_set);
    }
    return gs;
}

}  // namespace msre
