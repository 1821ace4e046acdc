#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace msre {

using Vertex = std::vector<std::int64_t>;
using Point = std::vector<double>;

//---------------------------------------------------------------------------//
/*!
 * Finite axis-aligned box of Z^d.
 *
 * Interior vertices are indexed row-major (last axis fastest), which is also
 * the fixed total order on Z^d used for lexicographic tie-breaking.
 *
 * The outer shell is the set of outside vertices joined by an edge to the
 * box. Those are the face-adjacent vertices only (exactly one coordinate out
 * of range by one); corner-adjacent vertices do not touch an edge meeting
 * the box and are not part of the shell. Shell vertices are indexed face by
 * face: axis 0 low side, axis 0 high side, axis 1 low side, ...
 */
class BoxDomain
{
  public:
    BoxDomain(Vertex lo, Vertex hi);

    /// {-L, ..., L}^d.
    static BoxDomain cube(int d, std::int64_t L);

    int dim() const noexcept { return static_cast<int>(lo_.size()); }
    const Vertex& lo() const noexcept { return lo_; }
    const Vertex& hi() const noexcept { return hi_; }
    std::int64_t extent(int axis) const noexcept { return extent_[axis]; }
    std::size_t stride(int axis) const noexcept { return stride_[axis]; }
    std::size_t size() const noexcept { return size_; }

    bool contains(std::span<const std::int64_t> v) const noexcept;
    std::size_t index(std::span<const std::int64_t> v) const;
    Vertex vertex(std::size_t index) const;
    void vertex(std::size_t index, std::span<std::int64_t> out) const;

    std::size_t shell_size() const noexcept { return shell_size_; }
    std::optional<std::size_t>
    shell_index(std::span<const std::int64_t> v) const noexcept;
    Vertex shell_vertex(std::size_t s) const;
    /// Interior vertex adjacent to shell vertex s.
    std::size_t shell_neighbor(std::size_t s) const;

    /// Min over w outside the box of the sup-norm distance to v.
    std::int64_t boundary_distance(std::span<const std::int64_t> v) const;
    std::int64_t boundary_distance(std::size_t index) const;

    /// Vertex closest to the geometric center (rounding toward lo).
    Vertex center() const;

    bool operator==(const BoxDomain& other) const noexcept
    {
        return lo_ == other.lo_ && hi_ == other.hi_;
    }

  private:
    Vertex lo_;
    Vertex hi_;
    std::vector<std::int64_t> extent_;
    std::vector<std::size_t> stride_;
    std::vector<std::size_t> face_size_;
    std::vector<std::size_t> face_offset_;  // 2 * d entries
    std::size_t size_ = 0;
    std::size_t shell_size_ = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Visit every edge {u, w} with u in the box exactly once.
 *
 * The callback receives (interior index of u, whether w is a shell vertex,
 * index of w in the interior or shell numbering).
 */
template<class F>
void for_each_edge(const BoxDomain& domain, F&& f)
{
    const int d = domain.dim();
    const std::size_t n = domain.size();
    std::vector<std::int64_t> coord(d, 0);  // offsets from lo
    for (std::size_t i = 0; i < n; ++i)
    {
        for (int a = 0; a < d; ++a)
        {
            const std::int64_t ext = domain.extent(a);
            if (coord[a] + 1 < ext)
            {
                f(i, false, i + domain.stride(a));
            }
            else
            {
                Vertex w(d);
                for (int b = 0; b < d; ++b)
                    w[b] = domain.lo()[b] + coord[b];
                w[a] += 1;
                f(i, true, *domain.shell_index(w));
            }
            if (coord[a] == 0)
            {
                Vertex w(d);
                for (int b = 0; b < d; ++b)
                    w[b] = domain.lo()[b] + coord[b];
                w[a] -= 1;
                f(i, true, *domain.shell_index(w));
            }
        }
        for (int a = d - 1; a >= 0; --a)
        {
            if (++coord[a] < domain.extent(a))
                break;
            coord[a] = 0;
        }
    }
}

/*!
 * Visit the neighbours of interior vertex i: callback (is_shell, index).
 * Every neighbour of an interior vertex is either interior or in the shell.
 */
template<class F>
void for_each_neighbor(const BoxDomain& domain, std::size_t i,
                       std::span<const std::int64_t> offset_coord, F&& f)
{
    const int d = domain.dim();
    for (int a = 0; a < d; ++a)
    {
        for (int side = 0; side < 2; ++side)
        {
            const bool up = side == 1;
            const std::int64_t c = offset_coord[a];
            const bool inside = up ? (c + 1 < domain.extent(a)) : (c > 0);
            if (inside)
            {
                f(false, up ? i + domain.stride(a) : i - domain.stride(a));
            }
            else
            {
                Vertex w(d);
                for (int b = 0; b < d; ++b)
                    w[b] = domain.lo()[b] + offset_coord[b];
                w[a] += up ? 1 : -1;
                f(true, *domain.shell_index(w));
            }
        }
    }
}

//---------------------------------------------------------------------------//
/*!
 * Map phi: Z^d -> R^n that may be nonzero only on the box and its shell.
 *
 * Values are dense on the box (|box| * n, components contiguous per vertex)
 * and on the shell; everything else is identically zero.
 */
class Surface
{
  public:
    Surface(BoxDomain domain, int components);

    const BoxDomain& domain() const noexcept { return domain_; }
    int components() const noexcept { return n_; }

    std::span<double> interior() noexcept { return interior_; }
    std::span<const double> interior() const noexcept { return interior_; }
    std::span<double> shell() noexcept { return shell_; }
    std::span<const double> shell() const noexcept { return shell_; }

    std::span<double> at(std::size_t i) noexcept
    {
        return {interior_.data() + i * n_, static_cast<std::size_t>(n_)};
    }
    std::span<const double> at(std::size_t i) const noexcept
    {
        return {interior_.data() + i * n_, static_cast<std::size_t>(n_)};
    }
    std::span<double> shell_at(std::size_t s) noexcept
    {
        return {shell_.data() + s * n_, static_cast<std::size_t>(n_)};
    }
    std::span<const double> shell_at(std::size_t s) const noexcept
    {
        return {shell_.data() + s * n_, static_cast<std::size_t>(n_)};
    }

    /// Value anywhere on Z^d (zero off the box and shell).
    Point value(std::span<const std::int64_t> v) const;
    /// Set a value on the box or the shell; DomainError elsewhere.
    void set(std::span<const std::int64_t> v, std::span<const double> value);

    /// Same domain, same boundary values, interior zeroed.
    Surface with_zero_interior() const;
    /// Same domain, same interior, shell zeroed.
    Surface with_zero_shell() const;

    bool all_finite() const noexcept;

    Surface& operator+=(const Surface& other);
    Surface& operator-=(const Surface& other);
    Surface& operator*=(double factor);

    friend Surface operator+(Surface a, const Surface& b) { return a += b; }
    friend Surface operator-(Surface a, const Surface& b) { return a -= b; }
    friend Surface operator*(Surface a, double f) { return a *= f; }

    bool operator==(const Surface& other) const noexcept = default;

  private:
    BoxDomain domain_;
    int n_;
    std::vector<double> interior_;
    std::vector<double> shell_;
};

/// Max over the box and shell of |a - b| componentwise.
double max_abs_difference(const Surface& a, const Surface& b);

//---------------------------------------------------------------------------//
// Discrete operators. All of them read only values on the box and shell.
//---------------------------------------------------------------------------//

/// (Laplacian_box phi)_v = sum over neighbours u with {u,v} meeting the box of
/// (phi_u - phi_v); the result lives on the box and its shell.
Surface laplacian(const Surface& phi);

/// Sum over edges meeting the box of (phi_u - phi_v) . (psi_u - psi_v).
double dirichlet_inner(const Surface& phi, const Surface& psi);

/// dirichlet_inner(phi, phi).
double dirichlet_norm2(const Surface& phi);

/// Plain l2 inner product over the box and shell.
double l2_inner(const Surface& phi, const Surface& psi);

/*!
 * Harmonic extension of the shell values of tau into the box.
 *
 * The result equals tau on the shell and has zero Laplacian on the box,
 * solved to a max-norm residual of at most 1e-10.
 */
Surface harmonic_extension(const Surface& tau, double tolerance = 1e-10);

/// Dirichlet energy of the harmonic extension of the shell values of tau.
double dirichlet_energy_of_bc(const Surface& tau);

/// Max-norm of the Laplacian of phi over the box.
double max_laplacian_on_box(const Surface& phi);

}  // namespace msre
