#include <algorithm>
#include <cmath>
#include <string>

#include "msre/errors.hpp"
#include "msre/experiments.hpp"
#include "msre/parallel.hpp"
#include "msre/rng.hpp"

namespace msre {
namespace {

constexpr double kSecondsPerState = 1e-7;

std::string size_tag(std::int64_t L, std::size_t r)
{
    return " (L = " + std::to_string(L) + ", replica " + std::to_string(r) + ")";
}

std::size_t band_count(std::int64_t L)
{
    std::size_t j = 0;
    while ((std::int64_t{1} << j) < L)
        ++j;
    return j + 1;
}

}  // namespace

Point ExperimentConfig::unit_direction() const
{
    if (direction.empty())
    {
        Point e(n, 0.0);
        e[0] = 1.0;
        return e;
    }
    return direction;
}

void validate(const ExperimentConfig& c)
{
    if (c.d < 1)
        throw ParameterError("d must be at least 1");
    if (c.n < 1)
        throw ParameterError("n must be at least 1");
    if (c.disorder.n != c.n)
        throw ParameterError("disorder.n must equal n");
    if (!(c.lambda > 0.0) || !std::isfinite(c.lambda))
        throw ParameterError("lambda must be positive and finite");
    if (c.sizes.empty())
        throw ParameterError("sizes must not be empty");
    for (std::size_t k = 0; k < c.sizes.size(); ++k)
    {
        if (c.sizes[k] < 1)
            throw ParameterError("sizes must be positive");
        if (k > 0 && c.sizes[k] <= c.sizes[k - 1])
            throw ParameterError("sizes must be strictly increasing");
    }
    if (c.replicas < 1)
        throw ParameterError("replicas must be at least 1");
    if (!c.direction.empty())
    {
        if (static_cast<int>(c.direction.size()) != c.n)
            throw ParameterError("direction must have n entries");
        double s = 0.0;
        for (double x : c.direction)
            s += x * x;
        if (std::abs(std::sqrt(s) - 1.0) > 1e-12)
            throw ParameterError("direction must be a unit vector");
    }
    if (c.budget_node_seconds && !(*c.budget_node_seconds >= 0.0))
        throw ParameterError("budget must be non-negative");
}

std::uint64_t replica_seed(const ExperimentConfig& c, std::int64_t L, std::size_t r)
{
    if (c.freeze_disorder)
        return derive_seed(c.seed, 0, 0);
    return derive_seed(c.seed, static_cast<std::uint64_t>(L), r);
}

double estimated_cost(const ExperimentConfig& c)
{
    double states = 0.0;
    for (std::int64_t L : c.sizes)
    {
        const BoxDomain dom = BoxDomain::cube(c.d, L);
        double per_site = 1.0;
        if (c.solver.kind != SolverKind::closed_form)
        {
            EnergyModel probe(dom, DisorderField(c.disorder), c.lambda);
            per_site = static_cast<double>(grid_for(probe, c.solver).points_per_site());
        }
        states += static_cast<double>(dom.size()) * per_site * static_cast<double>(c.replicas);
    }
    return states * kSecondsPerState;
}

EnergyModel replica_model(const ExperimentConfig& c, std::int64_t L, std::size_t r)
{
    DisorderParams p = c.disorder;
    p.seed = replica_seed(c, L, r);
    return EnergyModel(BoxDomain::cube(c.d, L), DisorderField(p), c.lambda);
}

double band_maximum(const Surface& phi, std::span<const double> e, std::int64_t k)
{
    const auto& dom = phi.domain();
    if (dom.dim() != 1)
        throw UnsupportedError("band maxima are defined for d = 1");
    const std::int64_t L = dom.hi()[0];
    if (dom.lo()[0] != -L)
        throw ContractError("band maxima need a symmetric box");
    double m = 0.0;
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        const std::int64_t v = dom.lo()[0] + static_cast<std::int64_t>(i);
        if (std::abs(v) < L - k)
            continue;
        double p = 0.0;
        for (std::size_t a = 0; a < e.size(); ++a)
            p += phi.at(i)[a] * e[a];
        m = std::max(m, std::abs(p));
    }
    return m;
}

std::vector<ReplicaResult> run_replicas(const ExperimentConfig& config)
{
    validate(config);
    if (config.budget_node_seconds)
    {
        const double cost = estimated_cost(config);
        if (cost > *config.budget_node_seconds)
            throw BudgetError("estimated cost " + std::to_string(cost)
                              + " node-seconds exceeds the budget of "
                              + std::to_string(*config.budget_node_seconds));
    }

    const Point e = config.unit_direction();
    const std::size_t R = config.replicas;
    std::vector<ReplicaResult> out(config.sizes.size() * R);
    parallel_for(out.size(), config.threads, [&](std::size_t slot) {
        const std::int64_t L = config.sizes[slot / R];
        const std::size_t r = slot % R;
        EnergyModel model = replica_model(config, L, r);
        GroundState gs(model.zero_surface());
        try
        {
            gs = solve(model, config.solver);
        }
        catch (const InfeasibleError& err)
        {
            throw InfeasibleError(err.what() + size_tag(L, r));
        }

        const auto& dom = model.domain();
        const auto& phi = gs.surface;
        ReplicaResult res;
        res.L = L;
        res.replica = r;
        res.disorder_seed = replica_seed(config, L, r);
        res.ge = gs.energy;
        res.volume = dom.size();
        res.window_hit = gs.window_hit;
        res.solver = gs.solver;

        const auto c = phi.at(dom.index(dom.center()));
        double proj = 0.0, norm2 = 0.0;
        for (int a = 0; a < config.n; ++a)
        {
            proj += c[a] * e[a];
            norm2 += c[a] * c[a];
        }
        res.center_projection = std::abs(proj);
        res.center_norm = std::sqrt(norm2);
        res.gradient2 = dirichlet_norm2(phi);

        if (config.band_maxima && config.d == 1)
        {
            const std::size_t J = band_count(L);
            res.band_max.resize(J);
            for (std::size_t j = 0; j < J; ++j)
                res.band_max[j] = band_maximum(phi, e, std::int64_t{1} << j);
        }
        if (config.profile)
        {
            res.norms.resize(dom.size());
            for (std::size_t i = 0; i < dom.size(); ++i)
            {
                double s = 0.0;
                for (double x : phi.at(i))
                    s += x * x;
                res.norms[i] = std::sqrt(s);
            }
        }
        if (config.keep_surfaces)
            res.surface = phi;
        out[slot] = std::move(res);
    });
    return out;
}

}  // namespace msre
