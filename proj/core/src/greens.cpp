#include "msre/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "msre/errors.hpp"
#include "msre/linear_solve.hpp"
#include "msre/parallel.hpp"
#include "msre/rng.hpp"

namespace msre {

GreenTable::GreenTable(BoxDomain domain, Vertex source, std::vector<double> values,
                       double residual, std::size_t iterations)
    : domain_(std::move(domain)), source_(std::move(source)), values_(std::move(values)),
      residual_(residual), iterations_(iterations)
{
    if (values_.size() != domain_.size())
        throw ContractError("Green table has the wrong size");
}

double GreenTable::operator()(std::span<const std::int64_t> x) const
{
    if (!domain_.contains(x))
        return 0.0;
    return values_[domain_.index(x)];
}

GreenTable green_exact(const BoxDomain& domain, std::span<const std::int64_t> v,
                       double tolerance)
{
    if (static_cast<int>(v.size()) != domain.dim() || !domain.contains(v))
        throw DomainError("Green's function source must lie in the box");
    std::vector<double> rhs(domain.size(), 0.0);
    rhs[domain.index(v)] = 1.0;
    CgOptions opt;
    opt.tolerance = tolerance;
    auto res = solve_dirichlet(domain, rhs, opt);
    return GreenTable(domain, Vertex(v.begin(), v.end()), std::move(res.x), res.residual,
                      res.iterations);
}

McEstimate green_mc(const BoxDomain& domain, std::span<const std::int64_t> v,
                    std::span<const std::int64_t> x, std::size_t walkers,
                    std::uint64_t seed, unsigned threads)
{
    const int d = domain.dim();
    if (static_cast<int>(v.size()) != d || static_cast<int>(x.size()) != d)
        throw ContractError("vertex dimension does not match the box");
    if (!domain.contains(v) || !domain.contains(x))
        throw PreconditionError("Monte Carlo Green's function needs v and x in the box");
    if (walkers < 100)
        throw PreconditionError("Monte Carlo Green's function needs at least 100 walkers");

    const std::size_t target = domain.index(v);
    std::vector<double> visits(walkers);
    parallel_for(walkers, threads, [&](std::size_t k) {
        SequentialRng rng(seed, Stream::walk, k);
        std::vector<std::int64_t> pos(x.begin(), x.end());
        std::size_t idx = domain.index(pos);
        std::size_t count = 0;
        for (;;)
        {
            if (idx == target)
                ++count;
            const auto dir = rng.below(2 * static_cast<std::uint64_t>(d));
            const int a = static_cast<int>(dir / 2);
            const bool up = (dir & 1) != 0;
            if (up)
            {
                if (pos[a] == domain.hi()[a])
                    break;
                ++pos[a];
                idx += domain.stride(a);
            }
            else
            {
                if (pos[a] == domain.lo()[a])
                    break;
                --pos[a];
                idx -= domain.stride(a);
            }
        }
        visits[k] = static_cast<double>(count) / (2.0 * d);
    });

    double mean = 0.0;
    for (double c : visits)
        mean += c;
    mean /= static_cast<double>(walkers);
    double ss = 0.0;
    for (double c : visits)
        ss += (c - mean) * (c - mean);
    const double var = ss / static_cast<double>(walkers - 1);
    return {mean, std::sqrt(var / static_cast<double>(walkers)), walkers};
}

//---------------------------------------------------------------------------//

double BoundSeries::growth() const
{
    if (empirical_sup.empty() || empirical_sup.front() <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return empirical_sup.back() / empirical_sup.front();
}

bool BoundSeries::stable() const
{
    const double g = growth();
    return std::isfinite(g) && g <= stability_limit && violations == 0;
}

const BoundSeries& GreenBoundReport::get(const std::string& name) const
{
    for (const auto& b : bounds)
        if (b.name == name)
            return b;
    throw ContractError("no bound named '" + name + "'");
}

namespace {

struct Accum
{
    double sup = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::size_t violations = 0;

    void add(double value)
    {
        sup = std::max(sup, value);
        ++evaluated;
    }
    void merge(const Accum& o)
    {
        sup = std::max(sup, o.sup);
        evaluated += o.evaluated;
        skipped += o.skipped;
        violations += o.violations;
    }
};

double euclid(std::span<const std::int64_t> a, std::span<const std::int64_t> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double t = static_cast<double>(a[i] - b[i]);
        s += t * t;
    }
    return std::sqrt(s);
}

}  // namespace

GreenBoundReport check_green_bounds(int d, const std::vector<std::int64_t>& sizes,
                                    std::size_t samples, std::uint64_t seed,
                                    unsigned threads)
{
    if (d < 1 || d > 3)
        throw ParameterError("Green's function bounds are checked for d in {1, 2, 3}");
    if (sizes.empty())
        throw ParameterError("at least one size is needed");
    for (std::size_t k = 0; k < sizes.size(); ++k)
    {
        if (sizes[k] < 1)
            throw ParameterError("sizes must be positive");
        if (k > 0 && sizes[k] <= sizes[k - 1])
            throw ParameterError("sizes must be strictly increasing");
    }
    if (samples == 0)
        throw ParameterError("at least one sample is needed");

    std::vector<std::string> names;
    if (d == 1)
        names = {"diag_over_r", "diag_increment"};
    else if (d == 2)
        names = {"diag_over_log"};
    names.push_back("decay");
    names.push_back("difference");

    GreenBoundReport report;
    report.d = d;
    for (const auto& nm : names)
    {
        BoundSeries s;
        s.name = nm;
        s.sizes = sizes;
        report.bounds.push_back(std::move(s));
    }
    auto slot = [&](const std::string& nm) {
        return static_cast<std::size_t>(
            std::find(names.begin(), names.end(), nm) - names.begin());
    };
    const std::size_t nb = names.size();
    const std::size_t i_decay = slot("decay"), i_diff = slot("difference");

    for (std::size_t si = 0; si < sizes.size(); ++si)
    {
        const std::int64_t L = sizes[si];
        const BoxDomain dom = BoxDomain::cube(d, L);

        // sources v and partners u
        std::vector<Vertex> src, partner;
        for (std::int64_t r = 1; r <= L + 1 && src.size() < samples; r *= 2)
        {
            Vertex v(d, 0);
            v[0] = -L + r - 1;
            Vertex u = v;
            u[0] += 1;
            src.push_back(v);
            partner.push_back(u);
        }
        SequentialRng rng(seed, Stream::sampling, static_cast<std::uint64_t>(si));
        const auto width = static_cast<std::uint64_t>(2 * L + 1);
        while (src.size() < samples)
        {
            Vertex v(d), u(d);
            for (int a = 0; a < d; ++a)
                v[a] = -L + static_cast<std::int64_t>(rng.below(width));
            // partner: a nearest neighbour inside the box
            u = v;
            const auto axis = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
            u[axis] += u[axis] < L && (u[axis] == -L || rng.below(2) == 1) ? 1 : -1;
            src.push_back(v);
            partner.push_back(u);
        }

        std::vector<std::vector<Accum>> per(src.size(), std::vector<Accum>(nb));
        parallel_for(src.size(), threads, [&](std::size_t k) {
            const Vertex& v = src[k];
            const Vertex& u = partner[k];
            auto& acc = per[k];
            const GreenTable gv = green_exact(dom, v);
            const bool has_u = u != v;
            std::optional<GreenTable> gu;
            if (has_u)
                gu = green_exact(dom, u);
            const double rv = static_cast<double>(dom.boundary_distance(v));
            const double gvv = gv(v);
            const double dd = static_cast<double>(d);

            if (d == 1)
                acc[slot("diag_over_r")].add(gvv / rv);
            if (d == 2)
                acc[slot("diag_over_log")].add(gvv / std::log1p(rv));

            Vertex x(d);
            for (std::size_t i = 0; i < dom.size(); ++i)
            {
                dom.vertex(i, x);
                const double dist = euclid(x, v);
                if (d == 1 && dist > 0.0)
                {
                    const double inc = gvv - gv.at(i);
                    auto& a = acc[slot("diag_increment")];
                    if (inc < -1e-12)
                        ++a.violations;
                    a.add(inc / dist);
                }
                if (rv > 2.0 * dist)
                {
                    ++acc[i_decay].skipped;
                    if (has_u)
                        ++acc[i_diff].skipped;
                    continue;
                }
                const double rx = static_cast<double>(dom.boundary_distance(i));
                const double scale = std::pow(dist, dd);
                acc[i_decay].add(gv.at(i) * scale / (rx * rv));
                if (has_u)
                {
                    const double diff = std::abs(gv.at(i) - gu->at(i));
                    acc[i_diff].add(diff * scale / (rx * euclid(u, v)));
                }
            }
        });

        std::vector<Accum> total(nb);
        for (const auto& p : per)
            for (std::size_t b = 0; b < nb; ++b)
                total[b].merge(p[b]);
        for (std::size_t b = 0; b < nb; ++b)
        {
            auto& s = report.bounds[b];
            s.empirical_sup.push_back(total[b].sup);
            s.evaluated.push_back(total[b].evaluated);
            s.skipped.push_back(total[b].skipped);
            s.violations += total[b].violations;
        }
    }
    return report;
}

}  // namespace msre
