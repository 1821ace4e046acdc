#include <algorithm>
#include <cmath>
#include <string>

#include "msre/errors.hpp"
#include "msre/solvers.hpp"

namespace msre {
namespace {

constexpr std::size_t kMaxStates = 1'000'000;
constexpr std::size_t kMaxTable = 400'000'000;

struct Site
{
    std::vector<double> points;               // flat, lex order
    std::vector<std::vector<double>> levels;  // per axis, grid sites only
    std::size_t size = 0;
};

double half_sq_dist(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c)
    {
        double d = a[c] - b[c];
        s += d * d;
    }
    return 0.5 * s;
}

/*!
 * out[i] = min_j 1/2 (x[i] - y[j])^2 + f[j] for sorted y and x, via the
 * lower envelope of the parabolas. Infinite f are skipped.
 */
void distance_transform(std::span<const double> y, std::span<const double> f,
                        std::span<const double> x, std::span<double> out,
                        std::vector<std::size_t>& hull, std::vector<double>& bound)
{
    hull.clear();
    bound.clear();
    auto key = [&](std::size_t j) { return f[j] + 0.5 * y[j] * y[j]; };
    for (std::size_t j = 0; j < y.size(); ++j)
    {
        if (f[j] == kInfinity)
            continue;
        while (!hull.empty())
        {
            std::size_t k = hull.back();
            if (y[j] == y[k])
            {
                if (f[j] < f[k])
                {
                    hull.pop_back();
                    bound.pop_back();
                    continue;
                }
                goto next;
            }
            double s = (key(j) - key(k)) / (y[j] - y[k]);
            if (s <= bound.back())
            {
                hull.pop_back();
                bound.pop_back();
                continue;
            }
            hull.push_back(j);
            bound.push_back(s);
            goto next;
        }
        hull.push_back(j);
        bound.push_back(-kInfinity);
    next:;
    }
    if (hull.empty())
    {
        std::fill(out.begin(), out.end(), kInfinity);
        return;
    }
    std::size_t h = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        while (h + 1 < hull.size() && bound[h + 1] < x[i])
            ++h;
        double d = x[i] - y[hull[h]];
        out[i] = 0.5 * d * d + f[hull[h]];
    }
}

// m[k] = min_j 1/2 |x_k - y_j|^2 + next[j] for query site `to` and source
// site `from`.
std::vector<double> transition(const Site& to, const Site& from,
                               const std::vector<double>& next, std::size_t n)
{
    std::vector<std::size_t> hull;
    std::vector<double> bound;
    if (!to.levels.empty() && !from.levels.empty())
    {
        // separable transform, one axis at a time
        std::vector<double> cur = next;
        std::vector<std::size_t> ext(n);
        for (std::size_t a = 0; a < n; ++a)
            ext[a] = to.levels[a].size();
        std::vector<double> line_f, line_out;
        for (std::size_t a = 0; a < n; ++a)
        {
            std::size_t stride = 1;
            for (std::size_t b = a + 1; b < n; ++b)
                stride *= ext[b];
            const std::size_t len = ext[a];
            const std::size_t outer = cur.size() / (len * stride);
            line_f.resize(len);
            line_out.resize(len);
            for (std::size_t o = 0; o < outer; ++o)
            {
                for (std::size_t in = 0; in < stride; ++in)
                {
                    const std::size_t base = o * len * stride + in;
                    for (std::size_t j = 0; j < len; ++j)
                        line_f[j] = cur[base + j * stride];
                    distance_transform(from.levels[a], line_f, to.levels[a], line_out,
                                       hull, bound);
                    for (std::size_t j = 0; j < len; ++j)
                        cur[base + j * stride] = line_out[j];
                }
            }
        }
        return cur;
    }
    std::vector<double> m(to.size, kInfinity);
    if (n == 1)
    {
        distance_transform(from.points, next, to.points, m, hull, bound);
        return m;
    }
    for (std::size_t k = 0; k < to.size; ++k)
    {
        const double* xk = &to.points[k * n];
        double best = kInfinity;
        for (std::size_t j = 0; j < from.size; ++j)
        {
            if (next[j] == kInfinity)
                continue;
            best = std::min(best, half_sq_dist(xk, &from.points[j * n], n) + next[j]);
        }
        m[k] = best;
    }
    return m;
}

std::string vertex_name(const Vertex& v)
{
    std::string s = "(";
    for (std::size_t a = 0; a < v.size(); ++a)
        s += (a ? "," : "") + std::to_string(v[a]);
    return s + ")";
}

}  // namespace

GroundState solve_dp_1d(const EnergyModel& model, const HeightGrid& grid)
{
    const auto& dom = model.domain();
    if (dom.dim() != 1)
        throw UnsupportedError("the dynamic program needs d = 1");
    const std::size_t n = static_cast<std::size_t>(model.components());
    if (grid.components() != static_cast<int>(n))
        throw ContractError("height grid and model disagree on n");
    grid.validate(dom);

    const auto& eta = model.disorder();
    const bool point_set = eta.is_point_set();
    if (!point_set && grid.points_per_site() > kMaxStates)
        throw ResourceError("per-site state count " + std::to_string(grid.points_per_site())
                            + " exceeds " + std::to_string(kMaxStates));

    const std::size_t N = dom.size();
    std::vector<Site> sites(N);
    std::vector<std::vector<double>> B(N);
    std::size_t table = 0;

    auto prepare = [&](std::size_t i) {
        Site& s = sites[i];
        Vertex v = dom.vertex(i);
        auto view = eta.at(v);
        if (point_set)
        {
            Point lo(n), hi(n);
            for (std::size_t a = 0; a < n; ++a)
            {
                lo[a] = grid.offset(i, static_cast<int>(a)) + grid.lo[a];
                hi[a] = grid.offset(i, static_cast<int>(a)) + grid.hi[a];
            }
            s.points = view.candidates(lo, hi);
            s.size = s.points.size() / n;
            if (s.size == 0)
                throw InfeasibleError("no admissible height at vertex " + vertex_name(v)
                                      + " inside the window");
            if (s.size > kMaxStates)
                throw ResourceError("too many candidate points at " + vertex_name(v));
        }
        else
        {
            s.points = grid.site_points(i);
            s.size = grid.points_per_site();
            s.levels.resize(n);
            for (std::size_t a = 0; a < n; ++a)
            {
                s.levels[a].resize(grid.counts[a]);
                for (std::size_t j = 0; j < grid.counts[a]; ++j)
                    s.levels[a][j] = grid.level(i, static_cast<int>(a), j);
            }
        }
        table += s.size;
        if (table > kMaxTable)
            throw ResourceError("dynamic-programming table too large");
        std::vector<double> unary(s.size);
        view.eval_many(s.points, unary);
        for (double& u : unary)
            u *= model.lambda();
        return unary;
    };

    const Point tau_left = model.tau().value(Vertex{dom.lo()[0] - 1});
    const Point tau_right = model.tau().value(Vertex{dom.hi()[0] + 1});

    // backward pass
    for (std::size_t ii = N; ii-- > 0;)
    {
        auto unary = prepare(ii);
        const Site& s = sites[ii];
        std::vector<double>& b = B[ii];
        if (ii + 1 == N)
        {
            b.resize(s.size);
            for (std::size_t k = 0; k < s.size; ++k)
                b[k] = unary[k] + half_sq_dist(&s.points[k * n], tau_right.data(), n);
        }
        else
        {
            b = transition(s, sites[ii + 1], B[ii + 1], n);
            for (std::size_t k = 0; k < s.size; ++k)
                b[k] = b[k] == kInfinity || unary[k] == kInfinity ? kInfinity
                                                                   : b[k] + unary[k];
        }
    }

    // forward reconstruction, first exact argmin at every site
    std::vector<double> interior(N * n);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < N; ++i)
    {
        const Site& s = sites[i];
        const double* anchor = i == 0 ? tau_left.data() : &sites[i - 1].points[prev * n];
        double best = kInfinity;
        std::size_t arg = s.size;
        for (std::size_t k = 0; k < s.size; ++k)
        {
            if (B[i][k] == kInfinity)
                continue;
            double c = half_sq_dist(anchor, &s.points[k * n], n) + B[i][k];
            if (c < best)
            {
                best = c;
                arg = k;
            }
        }
        if (arg == s.size)
            throw InfeasibleError("every grid configuration has infinite energy");
        std::copy_n(&s.points[arg * n], n, &interior[i * n]);
        prev = arg;
    }

    GroundState gs(model.admissible(interior));
    gs.energy = energy(model, gs.surface);
    gs.solver = "dp";
    gs.exactness = Exactness::exact_on_grid;
    gs.iterations = N;
    if (gs.energy == kInfinity)
        throw InfeasibleError("dynamic program returned an infinite-energy surface");
    return gs;
}

}  // namespace msre
