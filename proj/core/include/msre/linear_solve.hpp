#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msre/lattice.hpp"

namespace msre {

struct CgOptions
{
    double tolerance = 1e-10;     ///< max-norm residual
    std::size_t max_iterations = 0;  ///< 0: 20 * |box|
};

struct CgResult
{
    std::vector<double> x;
    std::size_t iterations = 0;
    double residual = 0.0;  ///< max-norm of b - A x, recomputed at exit
};

/// y = A x with A = -Laplacian restricted to the box, zero outside.
void apply_dirichlet_laplacian(const BoxDomain& domain,
                               std::span<const double> x, std::span<double> y);

/*!
 * Conjugate gradients for A x = b, A the Dirichlet Laplacian of the box.
 * Throws ConvergenceError with the residual reached if the iteration cap
 * is hit.
 */
CgResult solve_dirichlet(const BoxDomain& domain, std::span<const double> b,
                         const CgOptions& options = {});

}  // namespace msre
