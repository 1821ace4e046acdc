#include <algorithm>
#include <cmath>
#include <limits>

#include "msre/errors.hpp"
#include "msre/experiments.hpp"
#include "msre/identities.hpp"
#include "msre/parallel.hpp"
#include "msre/stats.hpp"

namespace msre {

//---------------------------------------------------------------------------//
// Sandwich
//---------------------------------------------------------------------------//

double sandwich_lower_proxy(std::span<const double> mean_band_max)
{
    double best = 0.0;
    for (std::size_t j = 0; j < mean_band_max.size(); ++j)
        best = std::max(best, std::ldexp(mean_band_max[j] * mean_band_max[j],
                                          -static_cast<int>(j)));
    return best;
}

double sandwich_upper_proxy(std::span<const double> fourth_moment)
{
    double s = 0.0;
    for (std::size_t j = 0; j < fourth_moment.size(); ++j)
        s += std::ldexp(1.0 + std::sqrt(fourth_moment[j]), -static_cast<int>(j));
    return s;
}

SandwichReport check_d1_sandwich(const std::vector<ReplicaResult>& results,
                                 const ExperimentConfig& config,
                                 const std::vector<std::int64_t>& sizes)
{
    if (config.d != 1)
        throw PreconditionError("the standard-deviation sandwich is stated for d = 1");
    SandwichReport rep;
    for (const auto& g : group_by_size(results))
    {
        const std::int64_t L = g.front()->L;
        if (!sizes.empty() && std::find(sizes.begin(), sizes.end(), L) == sizes.end())
            continue;
        const std::size_t J = g.front()->band_max.size();
        if (J == 0)
            throw PreconditionError("band maxima M_k were not collected (L = "
                                    + std::to_string(L) + ")");
        std::vector<double> ge, m1(J, 0.0), m4(J, 0.0);
        for (const auto* r : g)
        {
            if (r->band_max.size() != J)
                throw ContractError("inconsistent band maxima at L = " + std::to_string(L));
            ge.push_back(r->ge);
            for (std::size_t j = 0; j < J; ++j)
            {
                const double m = r->band_max[j];
                m1[j] += m;
                m4[j] += m * m * m * m;
            }
        }
        const double R = static_cast<double>(g.size());
        for (std::size_t j = 0; j < J; ++j)
        {
            m1[j] /= R;
            m4[j] /= R;
        }
        rep.sizes.push_back(L);
        rep.std_ge.push_back(sample_std(ge));
        rep.lower.push_back(sandwich_lower_proxy(m1));
        rep.upper.push_back(sandwich_upper_proxy(m4));
    }
    if (rep.sizes.empty())
        throw PreconditionError("no replica results at the requested sizes");

    rep.degenerate = std::all_of(rep.std_ge.begin(), rep.std_ge.end(),
                                 [](double s) { return s == 0.0; })
                     && std::all_of(rep.lower.begin(), rep.lower.end(),
                                    [](double s) { return s == 0.0; });
    if (rep.degenerate)
    {
        rep.a.assign(rep.sizes.size(), 0.0);
        rep.b.assign(rep.sizes.size(), 0.0);
        rep.a_spread = rep.b_spread = 1.0;
        rep.pass = true;
        return rep;
    }
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rep.sizes.size(); ++k)
    {
        rep.a.push_back(rep.std_ge[k] > 0.0 ? rep.lower[k] / rep.std_ge[k] : inf);
        rep.b.push_back(rep.std_ge[k] / rep.upper[k]);
    }
    auto spread = [inf](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo > 0.0 && std::isfinite(*hi) ? *hi / *lo : inf;
    };
    rep.a_spread = spread(rep.a);
    rep.b_spread = spread(rep.b);
    rep.pass = rep.a_spread <= 2.0 && rep.b_spread <= 2.0;
    return rep;
}

//---------------------------------------------------------------------------//
// Limit shape
//---------------------------------------------------------------------------//

LimitShapeReport check_limit_shape_d1(const ExperimentConfig& config,
                                      const std::vector<double>& x_ladder)
{
    validate(config);
    if (config.d != 1)
        throw PreconditionError("the limit-shape check is for d = 1");
    if (x_ladder.empty())
        throw ParameterError("the x ladder is empty");
    SolverKind kind = config.solver.kind;
    if (kind == SolverKind::automatic)
        kind = config.disorder.kind == DisorderKind::linear ? SolverKind::closed_form
                                                            : SolverKind::dp;

    LimitShapeReport rep;
    const std::size_t take = std::min<std::size_t>(2, config.sizes.size());
    rep.sizes.assign(config.sizes.end() - static_cast<std::ptrdiff_t>(take),
                     config.sizes.end());
    for (std::int64_t L : rep.sizes)
        if (L < 2)
            throw PreconditionError("limit-shape sizes must be at least 2");

    const Point e = config.unit_direction();
    const int n = config.n;

    // grids per size; slopes must keep the harmonic extension on the grid
    std::vector<HeightGrid> grids;
    for (std::int64_t L : rep.sizes)
    {
        BoxDomain dom(Vertex{1}, Vertex{L - 1});
        EnergyModel probe(dom, DisorderField(config.disorder), config.lambda);
        grids.push_back(grid_for(probe, config.solver));
        if (kind == SolverKind::closed_form)
            continue;
        const double step = grids.back().step;
        for (double x : x_ladder)
        {
            for (int a = 0; a < n; ++a)
            {
                const double s = x * e[a];
                if (std::abs(s / step - std::round(s / step)) > 1e-9)
                    throw PreconditionError("slope " + std::to_string(x)
                                            + " is not a multiple of the grid step "
                                            + std::to_string(step));
            }
        }
    }

    const std::size_t R = config.replicas;
    const std::size_t X = x_ladder.size();
    // per (size, replica): D_x and the identity residual for each x
    std::vector<std::vector<double>> diff(rep.sizes.size() * R, std::vector<double>(X));
    std::vector<std::vector<double>> resid(rep.sizes.size() * R, std::vector<double>(X));
    parallel_for(rep.sizes.size() * R, config.threads, [&](std::size_t slot) {
        const std::size_t si = slot / R, r = slot % R;
        const std::int64_t L = rep.sizes[si];
        BoxDomain dom(Vertex{1}, Vertex{L - 1});
        DisorderParams p = config.disorder;
        p.seed = replica_seed(config, L, r);
        DisorderField eta(p);
        const HeightGrid& grid = grids[si];

        EnergyModel zero_model(dom, eta, config.lambda);
        const double ge0 = kind == SolverKind::closed_form
                               ? solve_quadratic_dirichlet(zero_model, 1e-12).energy
                               : solve_dp_1d(zero_model, grid).energy;
        for (std::size_t k = 0; k < X; ++k)
        {
            Surface tau(dom, n);
            Point end(n);
            for (int a = 0; a < n; ++a)
                end[a] = x_ladder[k] * static_cast<double>(L) * e[a];
            tau.set(Vertex{L}, end);
            EnergyModel model(eta, config.lambda, tau);
            const auto b = verify_boundary_shift(model, kind, grid);
            diff[slot][k] = (b.ground_energy - ge0) / static_cast<double>(L);
            resid[slot][k] = std::max(b.surface_residual, b.energy_residual);
        }
    });

    for (const auto& v : resid)
        for (double x : v)
        {
            rep.max_identity_residual = std::max(rep.max_identity_residual, x);
            ++rep.identity_checks;
        }

    rep.pass = rep.max_identity_residual <= rep.identity_tolerance;
    for (std::size_t k = 0; k < X; ++k)
    {
        std::vector<double> v;
        for (const auto& d : diff)
            v.push_back(d[k]);
        LimitShapePoint pt;
        pt.x = x_ladder[k];
        const double expected = 0.5 * pt.x * pt.x;
        pt.gap = mean(v) - expected;
        pt.se = standard_error(v);
        pt.tolerance = rep.relative_tolerance * expected + 3.0 * pt.se;
        pt.pass = std::abs(pt.gap) <= pt.tolerance;
        rep.pass = rep.pass && pt.pass;
        rep.points.push_back(pt);
    }
    return rep;
}

//---------------------------------------------------------------------------//
// Profile and delocalization
//---------------------------------------------------------------------------//

ProfileReport localization_profile(const std::vector<ReplicaResult>& results,
                                   const ExperimentConfig& config)
{
    ProfileReport rep;
    rep.exponent = (4.0 - config.d) / 4.0;
    const auto groups = group_by_size(results);
    if (groups.empty())
        throw PreconditionError("no replica results");
    rep.ratio_sup = 0.0;
    rep.ratio_inf = std::numeric_limits<double>::infinity();
    std::vector<double> lx, ly;
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
    {
        const auto& g = groups[gi];
        const std::int64_t L = g.front()->L;
        const BoxDomain dom = BoxDomain::cube(config.d, L);
        std::vector<double> sum(static_cast<std::size_t>(L + 1), 0.0);
        std::vector<double> count(static_cast<std::size_t>(L + 1), 0.0);
        for (const auto* r : g)
        {
            if (r->norms.size() != dom.size())
                throw PreconditionError("profile statistics were not collected (L = "
                                        + std::to_string(L) + ")");
            for (std::size_t i = 0; i < dom.size(); ++i)
            {
                const auto rv = static_cast<std::size_t>(dom.boundary_distance(i));
                sum[rv - 1] += r->norms[i];
                count[rv - 1] += 1.0;
            }
        }
        std::vector<double> m(sum.size(), 0.0);
        for (std::size_t b = 0; b < sum.size(); ++b)
            m[b] = count[b] > 0.0 ? sum[b] / count[b] : 0.0;
        rep.sizes.push_back(L);

        const std::size_t first = static_cast<std::size_t>((L + 2) / 2);  // r >= ceil((L+1)/2)
        for (std::size_t rv = first; rv <= static_cast<std::size_t>(L + 1); ++rv)
        {
            const double mv = m[rv - 1];
            if (!(mv > 0.0))
            {
                ++rep.empty_bins;
                continue;
            }
            const double ratio = mv / std::pow(static_cast<double>(rv), rep.exponent);
            rep.ratio_sup = std::max(rep.ratio_sup, ratio);
            rep.ratio_inf = std::min(rep.ratio_inf, ratio);
            if (gi + 1 == groups.size())
            {
                lx.push_back(std::log(static_cast<double>(rv)));
                ly.push_back(std::log(mv));
            }
        }
        rep.mean_norm.push_back(std::move(m));
    }
    if (lx.size() >= 2)
        rep.slope = ols(lx, ly).slope;
    rep.pass = std::isfinite(rep.ratio_inf) && rep.ratio_inf > 0.0
               && rep.ratio_sup <= rep.limit * rep.ratio_inf;
    return rep;
}

DelocalizationReport delocalization_fraction(const std::vector<ReplicaResult>& results,
                                             const ExperimentConfig& config,
                                             const std::vector<double>& h_ladder)
{
    const auto groups = group_by_size(results);
    if (groups.empty())
        throw PreconditionError("no replica results");
    const auto& g = groups.back();
    DelocalizationReport rep;
    rep.L = g.front()->L;

    auto fraction_at = [&](double h) {
        double acc = 0.0;
        for (const auto* r : g)
        {
            if (r->norms.empty())
                throw PreconditionError("profile statistics were not collected");
            std::size_t c = 0;
            for (double x : r->norms)
                c += x >= h ? 1 : 0;
            acc += static_cast<double>(c) / static_cast<double>(r->norms.size());
        }
        return acc / static_cast<double>(g.size());
    };

    rep.h = h_ladder;
    for (double h : h_ladder)
        rep.fraction.push_back(fraction_at(h));
    std::vector<double> center;
    for (const auto* r : g)
        center.push_back(r->center_norm);
    rep.h_half_median = 0.5 * median(center);
    rep.fraction_at_half_median = fraction_at(rep.h_half_median);
    rep.pass = config.d > 3 || rep.fraction_at_half_median >= rep.floor;
    return rep;
}

//---------------------------------------------------------------------------//
// Concentration
//---------------------------------------------------------------------------//

ConcentrationReport check_concentration(const std::vector<ReplicaResult>& results,
                                        const ExperimentConfig& config)
{
    if (config.disorder.kind != DisorderKind::white)
        throw PreconditionError("the concentration check is for white disorder");
    const auto groups = group_by_size(results);
    if (groups.size() < 2)
        throw PreconditionError("the concentration check needs at least two sizes");
    for (const auto& g : groups)
        if (g.size() < 30)
            throw PreconditionError("the concentration check needs 30 replicas per size");

    ConcentrationReport rep;
    std::size_t total = 0, over2 = 0, over3 = 0;
    bool all_zero = true;
    for (const auto& g : groups)
    {
        std::vector<double> ge, grad;
        for (const auto* r : g)
        {
            ge.push_back(r->ge);
            grad.push_back(r->gradient2 / static_cast<double>(r->volume));
        }
        rep.sizes.push_back(g.front()->L);
        rep.volume.push_back(static_cast<double>(g.front()->volume));
        const double var = sample_variance(ge);
        rep.variance.push_back(var);
        rep.gradient_per_volume.push_back(mean(grad));
        if (var > 0.0)
        {
            all_zero = false;
            const double m = mean(ge), sd = std::sqrt(var);
            for (double x : ge)
            {
                const double z = std::abs(x - m) / sd;
                over2 += z >= 2.0 ? 1 : 0;
                over3 += z >= 3.0 ? 1 : 0;
            }
        }
        total += ge.size();
    }
    rep.exceed2 = static_cast<double>(over2) / static_cast<double>(total);
    rep.exceed3 = static_cast<double>(over3) / static_cast<double>(total);

    if (all_zero)
    {
        // frozen or deterministic disorder: no fluctuations to scale
        rep.variance_slope = 0.0;
    }
    else
    {
        std::vector<double> x, y;
        for (std::size_t k = 0; k < rep.sizes.size(); ++k)
        {
            if (!(rep.variance[k] > 0.0))
                throw PreconditionError("zero GE variance at L = "
                                        + std::to_string(rep.sizes[k]));
            x.push_back(std::log(rep.volume[k]));
            y.push_back(std::log(rep.variance[k]));
        }
        rep.variance_slope = ols(x, y).slope;
    }
    {
        std::vector<double> x, y;
        bool positive = true;
        for (std::size_t k = 0; k < rep.sizes.size(); ++k)
        {
            positive = positive && rep.gradient_per_volume[k] > 0.0;
            x.push_back(std::log(static_cast<double>(rep.sizes[k])));
            y.push_back(positive ? std::log(rep.gradient_per_volume[k]) : 0.0);
        }
        rep.gradient_slope = positive ? ols(x, y).slope : 0.0;
    }
    rep.pass = rep.variance_slope <= 1.1 && rep.gradient_slope <= 0.1 && rep.exceed2 <= 0.10
               && rep.exceed3 <= 0.02;
    return rep;
}

}  // namespace msre
