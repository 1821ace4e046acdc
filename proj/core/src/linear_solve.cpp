#include "msre/linear_solve.hpp"

#include <algorithm>
#include <cmath>

#include "msre/errors.hpp"

namespace msre {

void apply_dirichlet_laplacian(const BoxDomain& domain,
                               std::span<const double> x, std::span<double> y)
{
    const int d = domain.dim();
    const std::size_t n = domain.size();
    std::vector<std::int64_t> coord(d, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
        double acc = 2.0 * d * x[i];
        for (int a = 0; a < d; ++a)
        {
            const std::size_t s = domain.stride(a);
            if (coord[a] > 0)
                acc -= x[i - s];
            if (coord[a] + 1 < domain.extent(a))
                acc -= x[i + s];
        }
        y[i] = acc;
        for (int a = d - 1; a >= 0; --a)
        {
            if (++coord[a] < domain.extent(a))
                break;
            coord[a] = 0;
        }
    }
}

CgResult solve_dirichlet(const BoxDomain& domain, std::span<const double> b,
                         const CgOptions& options)
{
    const std::size_t n = domain.size();
    if (b.size() != n)
    {
        throw ContractError("right-hand side has the wrong size");
    }
    const std::size_t cap =
        options.max_iterations ? options.max_iterations : 20 * n + 20;

    CgResult out;
    out.x.assign(n, 0.0);
    std::vector<double> r(b.begin(), b.end());
    std::vector<double> p = r;
    std::vector<double> ap(n);

    auto dot = [](std::span<const double> u, std::span<const double> v) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            s += u[i] * v[i];
        return s;
    };
    auto max_norm = [](std::span<const double> u) {
        double m = 0.0;
        for (double x : u)
            m = std::max(m, std::abs(x));
        return m;
    };
    auto true_residual = [&] {
        std::vector<double> ax(n);
        apply_dirichlet_laplacian(domain, out.x, ax);
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            m = std::max(m, std::abs(b[i] - ax[i]));
        return m;
    };

    double rr = dot(r, r);
    std::size_t it = 0;
    while (max_norm(r) > options.tolerance)
    {
        if (it == cap)
        {
            double res = true_residual();
            if (res <= options.tolerance)
                break;
            throw ConvergenceError("conjugate gradients hit the iteration cap", res);
        }
        apply_dirichlet_laplacian(domain, p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t i = 0; i < n; ++i)
        {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = r[i] + beta * p[i];
        ++it;
        if (max_norm(r) <= options.tolerance)
        {
            // the recursive residual drifts; confirm against b - A x
            std::vector<double> ax(n);
            apply_dirichlet_laplacian(domain, out.x, ax);
            for (std::size_t i = 0; i < n; ++i)
                r[i] = b[i] - ax[i];
            rr = dot(r, r);
            if (max_norm(r) > options.tolerance)
            {
                p = r;
            }
        }
    }
    out.iterations = it;
    out.residual = true_residual();
    return out;
}

}  // namespace msre
