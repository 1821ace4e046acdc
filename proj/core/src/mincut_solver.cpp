#include <algorithm>
#include <cmath>

#include "msre/errors.hpp"
#include "msre/maxflow.hpp"
#include "msre/solvers.hpp"

namespace msre {
namespace {

constexpr std::size_t kMaxNodes = 100'000'000;
constexpr std::size_t kMaxArcs = 400'000'000;

struct Instance
{
    std::size_t N = 0;   // vertices
    std::size_t M = 0;   // levels
    double step = 0.0;
    std::vector<double> unary;  // N * M, lambda eta + shell terms (no linear part)
    std::vector<double> level;  // N * M heights
    struct Edge
    {
        std::size_t u, w;
        double B;  // linear coefficient of z = x_u - x_w
    };
    std::vector<Edge> edges;
    double clip = 0.0;
};

// Build the graph for band K and return labels, or nothing if a clipped
// arc ends up cut.
struct CutResult
{
    std::vector<std::size_t> labels;
    double flow = 0.0;
    bool clipped_cut = false;
    bool clipped = false;
};

CutResult cut_with_band(const Instance& I, std::size_t K)
{
    const std::size_t N = I.N, M = I.M, L = M - 1;
    const double s2 = I.step * I.step;
    const double inf = kInfinity;

    // unaries including the linear parts of the pairwise terms
    std::vector<double> D(I.unary);
    for (const auto& e : I.edges)
    {
        for (std::size_t x = 0; x < M; ++x)
        {
            D[e.u * M + x] += e.B * static_cast<double>(x);
            D[e.w * M + x] -= e.B * static_cast<double>(x);
        }
    }

    CutResult out;
    double max_cap = 0.0;
    for (std::size_t i = 0; i < N; ++i)
    {
        double lo = inf;
        for (std::size_t x = 0; x < M; ++x)
            if (std::isfinite(D[i * M + x]))
                lo = std::min(lo, D[i * M + x]);
        if (lo == inf)
            throw InfeasibleError("a vertex has no finite-energy level");
        for (std::size_t x = 0; x < M; ++x)
        {
            double& d = D[i * M + x];
            if (!std::isfinite(d))
            {
                d = I.clip;
                out.clipped = true;
            }
            else
                d -= lo;
            max_cap = std::max(max_cap, d);
        }
    }

    MaxFlow g(N * L + 2);
    const std::size_t src = N * L, snk = N * L + 1;
    auto node = [&](std::size_t i, std::size_t k) { return i * L + (k - 1); };
    for (std::size_t i = 0; i < N; ++i)
    {
        g.add_arc(src, node(i, 1), D[i * M + 0]);
        for (std::size_t k = 1; k < L; ++k)
            g.add_arc(node(i, k), node(i, k + 1), D[i * M + k], inf);
        g.add_arc(node(i, L), snk, D[i * M + L]);
    }
    for (const auto& e : I.edges)
    {
        for (std::size_t m = 0; m < K && m < L; ++m)
        {
            // (z - m)_+ : x_u >= k + m and x_w < k
            for (std::size_t k = 1; k + m <= L; ++k)
                g.add_arc(node(e.u, k + m), node(e.w, k), s2);
            if (m == 0)
                continue;
            // (-z - m)_+ : x_w >= k + m and x_u < k
            for (std::size_t k = 1; k + m <= L; ++k)
                g.add_arc(node(e.w, k + m), node(e.u, k), s2);
        }
        if (g.arc_count() > kMaxArcs)
            throw ResourceError("min-cut graph exceeds the arc budget");
    }

    out.flow = g.max_flow(src, snk, 1e-13 * (1.0 + max_cap));
    const auto& S = g.source_side();
    out.labels.assign(N, 0);
    for (std::size_t i = 0; i < N; ++i)
    {
        std::size_t x = 0;
        while (x < L && S[node(i, x + 1)])
            ++x;
        out.labels[i] = x;
        if (!std::isfinite(I.unary[i * M + x]))
            out.clipped_cut = true;
    }
    return out;
}

}  // namespace

GroundState solve_mincut(const EnergyModel& model, const HeightGrid& grid)
{
    if (model.components() != 1)
        throw UnsupportedError("the min-cut solver needs n = 1");
    if (model.disorder().is_point_set())
        throw UnsupportedError("the min-cut solver works on height grids only");
    const auto& dom = model.domain();
    if (grid.components() != 1)
        throw ContractError("height grid and model disagree on n");
    grid.validate(dom);

    Instance I;
    I.N = dom.size();
    I.M = grid.counts[0];
    I.step = grid.step;
    if (I.N * I.M > kMaxNodes)
        throw ResourceError("min-cut node budget exceeded");

    I.unary.assign(I.N * I.M, 0.0);
    I.level.resize(I.N * I.M);
    double max_abs = 0.0;
    Vertex v(dom.dim());
    for (std::size_t i = 0; i < I.N; ++i)
    {
        dom.vertex(i, v);
        for (std::size_t x = 0; x < I.M; ++x)
            I.level[i * I.M + x] = grid.level(i, 0, x);
        std::span<double> u(&I.unary[i * I.M], I.M);
        model.disorder().at(v).eval_many({&I.level[i * I.M], I.M}, u);
        for (double& e : u)
        {
            e *= model.lambda();
            if (std::isfinite(e))
                max_abs = std::max(max_abs, std::abs(e));
        }
    }
    I.clip = 1e6 * (1.0 + static_cast<double>(I.N) * max_abs);

    const auto& tau = model.tau();
    for_each_edge(dom, [&](std::size_t i, bool shell, std::size_t j) {
        if (shell)
        {
            const double t = tau.shell_at(j)[0];
            for (std::size_t x = 0; x < I.M; ++x)
            {
                double d = I.level[i * I.M + x] - t;
                I.unary[i * I.M + x] += 0.5 * d * d;
            }
            return;
        }
        // g(z) = 1/2 (dlo + z step)^2 with dlo the offset difference
        const double dlo = grid.offset(i, 0) - grid.offset(j, 0);
        auto g = [&](double z) {
            double h = dlo + z * I.step;
            return 0.5 * h * h;
        };
        I.edges.push_back({i, j, g(1.0) - g(0.0) - I.step * I.step});
    });

    std::size_t K = std::min<std::size_t>(16, I.M - 1);
    std::size_t cuts = 0;
    for (;;)
    {
        CutResult r = cut_with_band(I, K);
        ++cuts;
        std::size_t spread = 0;
        for (const auto& e : I.edges)
        {
            auto a = r.labels[e.u], b = r.labels[e.w];
            spread = std::max(spread, a > b ? a - b : b - a);
        }
        if (spread <= K || K >= I.M - 1)
        {
            if (r.clipped_cut)
                throw InfeasibleError("min cut selected a forbidden height");
            std::vector<double> interior(I.N);
            for (std::size_t i = 0; i < I.N; ++i)
                interior[i] = I.level[i * I.M + r.labels[i]];
            GroundState gs(model.admissible(interior));
            gs.energy = energy(model, gs.surface);
            gs.solver = "mincut";
            gs.exactness = Exactness::exact_on_grid;
            gs.iterations = cuts;
            gs.flow = r.flow;
            gs.clipped = r.clipped;
            return gs;
        }
        K = std::min(2 * K, I.M - 1);
    }
}

}  // namespace msre
