#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msre/bump.hpp"
#include "msre/lattice.hpp"
#include "msre/rng.hpp"

namespace msre {

/// Energy of a forbidden height.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class DisorderKind
{
    white,
    poisson,
    brownian,
    linear,
    periodic_white,
    rpsg
};

DisorderKind parse_disorder_kind(const std::string& name);
std::string to_string(DisorderKind kind);

struct DisorderParams
{
    DisorderKind kind = DisorderKind::white;
    std::uint64_t seed = 0;
    int n = 1;
    double delta = 0.125;     ///< height grid spacing (white, periodic, brownian)
    double intensity = 1.0;   ///< points per unit height volume (poisson)
    BumpProfile bump = BumpProfile::tent;
    bool zero_linear = false;  ///< linear kind with every zeta_v = 0
};

/// Tolerance used to decide that a height sits on a point of a point-set
/// disorder.
inline double point_tolerance(double scale) noexcept
{
    return 1e-12 * (scale > 1.0 ? scale : 1.0);
}

class DisorderField;

//---------------------------------------------------------------------------//
/*!
 * The disorder seen from a single vertex, t -> eta_{v,t}.
 *
 * All shift / rescale / resample transforms of the owning field are folded
 * into an affine height map t -> scale * t + offset and an effective seed,
 * so a view is cheap to evaluate many times. Single and batched evaluation
 * produce bit-identical values.
 */
class VertexDisorder
{
  public:
    double eval(std::span<const double> t) const;

    /// Evaluate at count = points.size() / n heights stored contiguously.
    void eval_many(std::span<const double> points, std::span<double> out) const;

    /*!
     * eta(t_new) - eta(t_old). Exact for the linear kind (no cancellation);
     * +inf if t_new is forbidden, -inf if only t_old is.
     */
    double eval_diff(std::span<const double> t_new,
                     std::span<const double> t_old) const;

    /*!
     * Points of a point-set disorder inside the closed window [lo, hi]^n,
     * flattened and in lexicographic order. UnsupportedError for the
     * continuous kinds.
     */
    std::vector<double>
    candidates(std::span<const double> lo, std::span<const double> hi) const;

    /// For the linear kind: eta(t) = slope . t + constant.
    struct Affine
    {
        Point slope;
        double constant = 0.0;
    };
    std::optional<Affine> linear_coefficients() const;

    int components() const noexcept { return n_; }

  private:
    friend class DisorderField;
    VertexDisorder() = default;

    double base_eval(std::span<const double> u) const;
    void to_base(std::span<const double> t, std::span<double> u) const noexcept;
    double gaussian_cell(std::span<const std::int64_t> cell) const;

    std::shared_ptr<const void> keep_alive_;
    const DisorderParams* params_ = nullptr;
    const BumpFunction* bump_ = nullptr;
    std::uint64_t seed_ = 0;
    std::uint64_t vkey_ = 0;
    int n_ = 1;
    double scale_ = 1.0;
    Point offset_;
    Point zeta_;  // linear kind
    Point phase_; // rpsg kind
};

//---------------------------------------------------------------------------//
/*!
 * Seeded random environment eta: Z^d x R^n -> R u {+inf}.
 *
 * A field is an immutable handle; shift, rescale and resample return new
 * handles sharing the source. Every draw is a pure function of
 * (seed, stream, vertex, cell), so evaluation order never matters and
 * handles can be shared freely between threads.
 */
class DisorderField
{
  public:
    explicit DisorderField(DisorderParams params);

    const DisorderParams& params() const noexcept;
    DisorderKind kind() const noexcept { return params().kind; }
    int components() const noexcept { return params().n; }
    const BumpFunction& bump() const noexcept;

    bool is_point_set() const noexcept;
    bool has_continuous_paths() const noexcept;

    VertexDisorder at(std::span<const std::int64_t> v) const;

    double eval(std::span<const std::int64_t> v, std::span<const double> t) const
    {
        return at(v).eval(t);
    }

    /// eta^s_{v,t} = eta_{v, t - s_v} (s read as zero off its box and shell).
    DisorderField shift(const Surface& s) const;

    /// eta^lambda_{v,t} = eta_{v, t sqrt(lambda)}.
    DisorderField rescale(double lambda) const;

    /// Independent copy on the vertices of `set`, driven by fresh_seed;
    /// unchanged elsewhere.
    DisorderField resample(std::vector<Vertex> set, std::uint64_t fresh_seed) const;

    struct Node;

  private:
    explicit DisorderField(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

}  // namespace msre
