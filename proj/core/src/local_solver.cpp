#include <algorithm>
#include <cmath>
#include <numbers>

#include "msre/errors.hpp"
#include "msre/rng.hpp"
#include "msre/solvers.hpp"

namespace msre {
namespace {

constexpr std::size_t kMaxTable = 50'000'000;

struct SiteData
{
    VertexDisorder eta;
    std::vector<double> points;  // candidates, flat
    std::vector<double> values;  // lambda eta at the candidates (if tabulated)
    std::optional<VertexDisorder::Affine> affine;
};

class Descent
{
  public:
    Descent(const EnergyModel& model, const HeightGrid& grid, const LocalOptions& opt)
        : model_(model), grid_(grid), opt_(opt), dom_(model.domain()),
          n_(static_cast<std::size_t>(model.components())),
          lambda_(model.lambda())
    {
        const auto& eta = model.disorder();
        point_set_ = eta.is_point_set();
        continuous_ = eta.has_continuous_paths();
        const std::size_t N = dom_.size();
        const bool tabulate = point_set_ || N * grid.points_per_site() <= kMaxTable;
        if (!point_set_ && !tabulate && grid.points_per_site() > 1'000'000)
            throw ResourceError("height grid too large for local search");
        sites_.reserve(N);
        coord_.resize(N * dom_.dim());
        Vertex v(dom_.dim());
        for (std::size_t i = 0; i < N; ++i)
        {
            dom_.vertex(i, v);
            for (int a = 0; a < dom_.dim(); ++a)
                coord_[i * dom_.dim() + a] = v[a] - dom_.lo()[a];
            SiteData s{eta.at(v), {}, {}, std::nullopt};
            s.affine = s.eta.linear_coefficients();
            if (point_set_)
            {
                Point lo(n_), hi(n_);
                for (std::size_t a = 0; a < n_; ++a)
                {
                    lo[a] = grid.offset(i, static_cast<int>(a)) + grid.lo[a];
                    hi[a] = grid.offset(i, static_cast<int>(a)) + grid.hi[a];
                }
                s.points = s.eta.candidates(lo, hi);
                if (s.points.empty())
                    throw InfeasibleError("no admissible height inside the window");
                s.values.assign(s.points.size() / n_, 0.0);
            }
            else if (tabulate)
            {
                s.points = grid.site_points(i);
                s.values.resize(s.points.size() / n_);
                s.eta.eval_many(s.points, s.values);
                for (double& x : s.values)
                    x *= lambda_;
            }
            sites_.push_back(std::move(s));
        }
    }

    /// One run from the given interior; returns the final surface.
    GroundState run(std::vector<double> interior)
    {
        Surface phi = model_.admissible(interior);
        GroundState gs(phi);
        gs.solver = "local";
        gs.exactness = Exactness::heuristic;
        bool refine_phase = false;
        std::size_t sweep = 0;
        for (; sweep < opt_.sweeps; ++sweep)
        {
            std::size_t moves = 0;
            for (std::size_t i = 0; i < dom_.size(); ++i)
                moves += update(phi, i, refine_phase) ? 1 : 0;
            gs.energy_trace.push_back(hamiltonian(model_.disorder(), lambda_, phi));
            if (moves == 0)
            {
                if (refine_phase || !continuous_ || opt_.refine_rounds <= 0)
                {
                    ++sweep;
                    break;
                }
                refine_phase = true;
            }
        }
        gs.iterations = sweep;
        gs.surface = std::move(phi);
        gs.energy = energy(model_, gs.surface);
        return gs;
    }

  private:
    // Energy change of moving site i from its current height c to h.
    double delta(std::size_t i, std::span<const double> h, std::span<const double> c,
                 std::span<const double> sum, double eta_c) const
    {
        const double deg = static_cast<double>(dom_.dim());
        double q = 0.0;
        for (std::size_t a = 0; a < n_; ++a)
            q += (h[a] - c[a]) * (deg * (h[a] + c[a]) - sum[a]);
        double e;
        if (sites_[i].affine)
            e = lambda_ * sites_[i].eta.eval_diff(h, c);
        else
        {
            double eh = sites_[i].eta.eval(h);
            if (eh == kInfinity)
                return kInfinity;
            if (eta_c == kInfinity)
                return -kInfinity;
            e = lambda_ * eh - eta_c;
        }
        return q + e;
    }

    bool update(Surface& phi, std::size_t i, bool refine)
    {
        const SiteData& s = sites_[i];
        std::vector<double> sum(n_, 0.0);
        for_each_neighbor(dom_, i, {&coord_[i * dom_.dim()], static_cast<std::size_t>(dom_.dim())},
                          [&](bool shell, std::size_t j) {
                              auto p = shell ? phi.shell_at(j) : phi.at(j);
                              for (std::size_t a = 0; a < n_; ++a)
                                  sum[a] += p[a];
                          });
        std::vector<double> cur(phi.at(i).begin(), phi.at(i).end());
        const double eta_c = lambda_ * s.eta.eval(cur);
        const double deg = static_cast<double>(dom_.dim());

        double best = -opt_.min_improvement;
        std::vector<double> best_h;
        auto consider = [&](std::span<const double> h, double d) {
            if (d < best)
            {
                best = d;
                best_h.assign(h.begin(), h.end());
            }
        };

        // grid or point candidates
        if (!s.values.empty())
        {
            const std::size_t count = s.values.size();
            for (std::size_t k = 0; k < count; ++k)
            {
                std::span<const double> h(&s.points[k * n_], n_);
                double q = 0.0;
                for (std::size_t a = 0; a < n_; ++a)
                    q += (h[a] - cur[a]) * (deg * (h[a] + cur[a]) - sum[a]);
                double d;
                if (s.values[k] == kInfinity)
                    continue;
                if (s.affine)
                    d = q + lambda_ * s.eta.eval_diff(h, cur);
                else if (eta_c == kInfinity)
                    d = -kInfinity;
                else
                    d = q + (s.values[k] - eta_c);
                consider(h, d);
            }
        }
        else
        {
            auto pts = grid_.site_points(i);
            std::vector<double> vals(pts.size() / n_);
            s.eta.eval_many(pts, vals);
            for (std::size_t k = 0; k < vals.size(); ++k)
            {
                std::span<const double> h(&pts[k * n_], n_);
                if (vals[k] == kInfinity)
                    continue;
                consider(h, delta(i, h, cur, sum, eta_c));
            }
        }

        if (s.affine)
        {
            // exact one-site minimizer of a quadratic plus affine term
            std::vector<double> h(n_);
            for (std::size_t a = 0; a < n_; ++a)
                h[a] = (sum[a] - lambda_ * s.affine->slope[a]) / (2.0 * deg);
            consider(h, delta(i, h, cur, sum, eta_c));
        }
        else if (refine && continuous_)
        {
            std::vector<double> h = best_h.empty() ? cur : best_h;
            double hd = best_h.empty() ? 0.0 : best;
            for (int round = 0; round < opt_.refine_rounds; ++round)
            {
                for (std::size_t a = 0; a < n_; ++a)
                {
                    hd = golden(i, h, a, cur, sum, eta_c, hd);
                }
            }
            consider(h, hd);
        }

        if (best_h.empty())
            return false;
        std::copy(best_h.begin(), best_h.end(), phi.at(i).begin());
        return true;
    }

    // Golden-section search along axis a within one grid step of h[a];
    // updates h and returns its energy change.
    double golden(std::size_t i, std::vector<double>& h, std::size_t a,
                  std::span<const double> cur, std::span<const double> sum,
                  double eta_c, double hd)
    {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = h[a] - grid_.step, hi = h[a] + grid_.step;
        std::vector<double> t = h;
        auto f = [&](double x) {
            t[a] = x;
            return delta(i, t, cur, sum, eta_c);
        };
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 40; ++it)
        {
            if (f1 <= f2)
            {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = f(x1);
            }
            else
            {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = f(x2);
            }
        }
        double x = f1 <= f2 ? x1 : x2;
        double fx = std::min(f1, f2);
        if (fx < hd)
        {
            h[a] = x;
            return fx;
        }
        return hd;
    }

    const EnergyModel& model_;
    const HeightGrid& grid_;
    const LocalOptions& opt_;
    const BoxDomain& dom_;
    std::size_t n_;
    double lambda_;
    bool point_set_ = false;
    bool continuous_ = false;
    std::vector<SiteData> sites_;
    std::vector<std::int64_t> coord_;
};

}  // namespace

GroundState solve_local(const EnergyModel& model, const HeightGrid& grid,
                        const LocalOptions& options)
{
    const auto& dom = model.domain();
    const std::size_t n = static_cast<std::size_t>(model.components());
    if (grid.components() != static_cast<int>(n))
        throw ContractError("height grid and model disagree on n");
    grid.validate(dom);
    for (const auto& init : options.initial)
        if (init.size() != dom.size() * n)
            throw ContractError("initial surface has the wrong size");

    Descent descent(model, grid, options);
    const std::size_t runs = std::max<std::size_t>(
        std::max<std::size_t>(options.restarts, 1), options.initial.size());

    std::optional<GroundState> best;
    for (std::size_t r = 0; r < runs; ++r)
    {
        std::vector<double> init(dom.size() * n, 0.0);
        if (r < options.initial.size())
            init = options.initial[r];
        else
        {
            std::size_t which = r - options.initial.size();
            if (which == 1)
            {
                Surface h = harmonic_extension(model.tau());
                init.assign(h.interior().begin(), h.interior().end());
            }
            else if (which >= 2)
            {
                SequentialRng rng(options.seed, Stream::init, r);
                for (std::size_t i = 0; i < dom.size(); ++i)
                {
                    for (std::size_t a = 0; a < n; ++a)
                    {
                        auto j = rng.below(grid.counts[a]);
                        init[i * n + a] = grid.level(i, static_cast<int>(a), j);
                    }
                }
            }
        }
        GroundState gs = descent.run(std::move(init));
        if (!best || gs.energy < best->energy)
            best = std::move(gs);
    }
    if (best->energy == kInfinity)
        throw InfeasibleError("local search found no finite-energy surface");
    return *best;
}

}  // namespace msre
