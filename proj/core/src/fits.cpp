#include <algorithm>
#include <cmath>
#include <map>

#include "msre/errors.hpp"
#include "msre/experiments.hpp"
#include "msre/stats.hpp"

namespace msre {
namespace {

constexpr std::size_t kMinReplicas = 30;

void tag(ExponentFit& f, const ExperimentConfig& c)
{
    f.d = c.d;
    f.n = c.n;
    f.disorder = to_string(c.disorder.kind);
    f.lambda = c.lambda;
}

}  // namespace

ExponentFit fit_loglog(std::string statistic, const std::vector<std::int64_t>& sizes,
                       const std::vector<double>& values,
                       const std::vector<double>& values_se, std::int64_t floor)
{
    if (sizes.size() != values.size() || sizes.size() != values_se.size())
        throw ContractError("fit inputs have different lengths");

    // sort by size so that permuted input gives the same fit
    std::vector<std::size_t> order(sizes.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });

    ExponentFit f;
    f.statistic = std::move(statistic);
    std::vector<double> x, y, s;
    for (std::size_t i : order)
    {
        if (sizes[i] < floor)
            continue;
        if (!(values[i] > 0.0))
            throw PreconditionError("non-positive " + f.statistic + " at L = "
                                    + std::to_string(sizes[i]) + "; no log-log fit");
        f.sizes.push_back(sizes[i]);
        f.values.push_back(values[i]);
        f.values_se.push_back(values_se[i]);
        x.push_back(std::log(static_cast<double>(sizes[i])));
        y.push_back(std::log(values[i]));
        s.push_back(values_se[i] / values[i]);
    }
    if (f.sizes.size() < 2)
        throw PreconditionError("an exponent fit needs at least two sizes");
    for (std::size_t i = 1; i < f.sizes.size(); ++i)
        if (f.sizes[i] == f.sizes[i - 1])
            throw PreconditionError("duplicate size " + std::to_string(f.sizes[i]));

    const LinearFit lf = ols(x, y, s);
    f.slope = lf.slope;
    f.intercept = lf.intercept;
    f.slope_se = lf.slope_se;
    f.r2 = lf.r2;
    f.window_lo = f.sizes.front();
    f.window_hi = f.sizes.back();
    return f;
}

std::vector<std::vector<const ReplicaResult*>>
group_by_size(const std::vector<ReplicaResult>& results)
{
    std::map<std::int64_t, std::vector<const ReplicaResult*>> by;
    for (const auto& r : results)
        by[r.L].push_back(&r);
    std::vector<std::vector<const ReplicaResult*>> out;
    for (auto& [L, v] : by)
    {
        std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->replica < b->replica; });
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

void require_replicas(const std::vector<std::vector<const ReplicaResult*>>& groups)
{
    if (groups.size() < 2)
        throw PreconditionError("an exponent fit needs at least two sizes");
    for (const auto& g : groups)
        if (g.size() < kMinReplicas)
            throw PreconditionError("L = " + std::to_string(g.front()->L) + " has "
                                    + std::to_string(g.size()) + " replicas; at least "
                                    + std::to_string(kMinReplicas) + " are needed");
}

}  // namespace

ExponentFit estimate_transversal(const std::vector<ReplicaResult>& results,
                                 const ExperimentConfig& config, HeightStatistic statistic)
{
    const auto groups = group_by_size(results);
    require_replicas(groups);
    std::vector<std::int64_t> sizes;
    std::vector<double> m, se;
    for (const auto& g : groups)
    {
        std::vector<double> v;
        for (const auto* r : g)
            v.push_back(statistic == HeightStatistic::projection ? r->center_projection
                                                                 : r->center_norm);
        sizes.push_back(g.front()->L);
        m.push_back(mean(v));
        se.push_back(standard_error(v));
    }
    ExponentFit f = fit_loglog(statistic == HeightStatistic::projection ? "E|phi_0.e|"
                                                                         : "E||phi_0||",
                               sizes, m, se, config.fit_floor);
    tag(f, config);
    return f;
}

ExponentFit estimate_energy_fluct(const std::vector<ReplicaResult>& results,
                                  const ExperimentConfig& config)
{
    const auto groups = group_by_size(results);
    require_replicas(groups);
    std::vector<std::int64_t> sizes;
    std::vector<double> sd, se;
    for (const auto& g : groups)
    {
        std::vector<double> v;
        for (const auto* r : g)
            v.push_back(r->ge);
        sizes.push_back(g.front()->L);
        sd.push_back(sample_std(v));
        se.push_back(jackknife_std_error(v));
    }
    ExponentFit f = fit_loglog("std(GE)", sizes, sd, se, config.fit_floor);
    tag(f, config);
    return f;
}

ScalingReport check_scaling_relation(const ExponentFit& xi, const ExponentFit& chi, int d)
{
    if (xi.d != chi.d || xi.d != d || xi.n != chi.n || xi.disorder != chi.disorder
        || xi.lambda != chi.lambda)
    {
        throw ContractError("configuration mismatch: xi from (d=" + std::to_string(xi.d)
                            + ", n=" + std::to_string(xi.n) + ", " + xi.disorder
                            + "), chi from (d=" + std::to_string(chi.d)
                            + ", n=" + std::to_string(chi.n) + ", " + chi.disorder
                            + "), relation asked for d=" + std::to_string(d));
    }
    ScalingReport r;
    r.xi = xi.slope;
    r.chi = chi.slope;
    r.gap = chi.slope - (2.0 * xi.slope + d - 2.0);
    r.combined_se = std::sqrt(chi.slope_se * chi.slope_se + 4.0 * xi.slope_se * xi.slope_se);
    r.tolerance = std::max(0.1, 3.0 * r.combined_se);
    r.pass = std::abs(r.gap) <= r.tolerance;
    return r;
}

}  // namespace msre
