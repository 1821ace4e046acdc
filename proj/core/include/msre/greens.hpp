#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msre/lattice.hpp"

namespace msre {

//---------------------------------------------------------------------------//
/*!
 * G^v(x) for x in the box: the solution of A G = e_v with A the Dirichlet
 * Laplacian of the box (2d on the diagonal), i.e. the expected number of
 * visits to v before exit, divided by 2d. Zero off the box.
 */
class GreenTable
{
  public:
    GreenTable(BoxDomain domain, Vertex source, std::vector<double> values,
               double residual, std::size_t iterations);

    const BoxDomain& domain() const noexcept { return domain_; }
    const Vertex& source() const noexcept { return source_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double residual() const noexcept { return residual_; }
    std::size_t iterations() const noexcept { return iterations_; }

    double at(std::size_t index) const { return values_.at(index); }
    double operator()(std::span<const std::int64_t> x) const;

  private:
    BoxDomain domain_;
    Vertex source_;
    std::vector<double> values_;
    double residual_;
    std::size_t iterations_;
};

/// Solve A G = e_v by conjugate gradients to a max-norm residual `tolerance`.
GreenTable green_exact(const BoxDomain& domain, std::span<const std::int64_t> v,
                       double tolerance = 1e-12);

struct McEstimate
{
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/*!
 * Monte Carlo estimate of G^v(x): walkers start at x and count visits to v
 * until they leave the box; each visit weighs 1/(2d). Walker k draws from
 * its own substream of the walk stream, so the estimate does not depend on
 * the thread count.
 */
McEstimate green_mc(const BoxDomain& domain, std::span<const std::int64_t> v,
                    std::span<const std::int64_t> x, std::size_t walkers,
                    std::uint64_t seed = 0, unsigned threads = 0);

//---------------------------------------------------------------------------//
/*!
 * Potential kernel a(x) = sum_n (P(X_n = 0) - P(X_n = x)) of the simple
 * random walk. d = 1 gives |x|. For d = 2 the walk is rotated by 45 degrees
 * so that the two diagonal coordinates are independent one-dimensional
 * walks, and the series is summed in (even, odd) pairs with an asymptotic
 * tail correction. The horizon is doubled until the corrected value moves
 * by less than `accuracy`.
 */
class PotentialKernel
{
  public:
    explicit PotentialKernel(int d, double accuracy = 1e-7);

    int dim() const noexcept { return d_; }
    double operator()(std::span<const std::int64_t> x);
    /// Pair horizon used for the last evaluated x (0 in d = 1).
    std::int64_t last_horizon() const noexcept { return last_horizon_; }

  private:
    int d_;
    double accuracy_;
    std::int64_t last_horizon_ = 0;
    std::map<std::pair<std::int64_t, std::int64_t>, double> cache_;
};

double potential_kernel(int d, std::span<const std::int64_t> x);

//---------------------------------------------------------------------------//
// One-dimensional walk checks.
//---------------------------------------------------------------------------//

struct GamblerRuinReport
{
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::size_t trials = 0;
    double estimate = 0.0;  ///< fraction of walks that reach n before -m
    double standard_error = 0.0;
    double expected = 0.0;  ///< m / (n + m)
    double deviation = 0.0;
    bool within(double sigmas) const { return deviation <= sigmas * standard_error; }
};

GamblerRuinReport gambler_ruin_check(std::int64_t n, std::int64_t m,
                                     std::size_t trials, std::uint64_t seed = 0,
                                     unsigned threads = 0);

struct ExitTailReport
{
    std::int64_t n = 0;
    std::size_t trials = 0;
    std::vector<std::int64_t> times;
    std::vector<double> probability;  ///< estimate of P(tau_n >= t)
    std::vector<double> standard_error;
    std::vector<double> scaled;       ///< probability * sqrt(t) / n
    double constant = 0.0;            ///< least-squares fit of P against n / sqrt(t)
    bool monotone = false;            ///< probability non-increasing in t
};

/// tau_n is the first time a walk from 0 reaches n.
ExitTailReport exit_time_tail_check(std::int64_t n, std::vector<std::int64_t> times,
                                    std::size_t trials, std::uint64_t seed = 0,
                                    unsigned threads = 0);

//---------------------------------------------------------------------------//
// Empirical constants of the Green's function bounds.
//---------------------------------------------------------------------------//

struct BoundSeries
{
    std::string name;
    std::vector<std::int64_t> sizes;
    std::vector<double> empirical_sup;
    std::vector<std::size_t> evaluated;
    std::vector<std::size_t> skipped;  ///< samples outside the bound's range
    std::size_t violations = 0;        ///< sign conditions that failed
    double stability_limit = 1.5;

    /// Largest-size sup over smallest-size sup.
    double growth() const;
    bool stable() const;
};

struct GreenBoundReport
{
    int d = 0;
    std::vector<BoundSeries> bounds;
    const BoundSeries& get(const std::string& name) const;
};

/*!
 * For every bound shape that applies in dimension d, the sup over sampled
 * configurations of (Green quantity) / (shape) on the cubes of the given
 * half-widths:
 *
 *  - "diag_over_r" (d = 1): G^v(v) / r_v
 *  - "diag_increment" (d = 1): (G^v(v) - G^v(u)) / |u - v|, which must be
 *    non-negative
 *  - "diag_over_log" (d = 2): G^v(v) / log(1 + r_v)
 *  - "decay": G^v(x) |x - v|^d / (r_x r_v) over x with r_v <= 2 |x - v|
 *  - "difference": |G^v(x) - G^u(x)| |x - v|^d / (r_x |u - v|) over the
 *    same x
 *
 * r is the sup-norm distance to the complement of the box and |.| the
 * Euclidean norm. Sources v are a ladder of vertices at distances 1, 2, 4,
 * ... from a face plus random vertices, `samples` in total per size, each
 * paired with a nearest neighbour u.
 */
GreenBoundReport check_green_bounds(int d, const std::vector<std::int64_t>& sizes,
                                    std::size_t samples, std::uint64_t seed = 0,
                                    unsigned threads = 0);

}  // namespace msre
