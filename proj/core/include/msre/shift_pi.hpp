#pragma once

#include <cstdint>
#include <vector>

#include "msre/lattice.hpp"

namespace msre {

/*!
 * One-dimensional profile: 1 on |t| <= a, 0 on |t| >= 1, and the quintic
 * smootherstep 6u^5 - 15u^4 + 10u^3 of u = (1 - |t|) / (1 - a) in between,
 * so the profile is C^2.
 */
double plateau_profile(double t, double a) noexcept;

enum class ShiftPiShape
{
    /// 1 on [-a, a]^d with a = 1 - eps / (3d), no rescaling.
    plateau,
    /// Transition of width 3 eps / (2d), rescaled so that pi >= 1 on the
    /// inner cube. Its discrete Laplacian reaches the L^-2 regime at much
    /// smaller L than the plateau shape, at the price of a large scale.
    wide
};

struct ShiftPi
{
    Surface pi;             ///< on the cube of half-width L, zero shell
    ShiftPiShape shape = ShiftPiShape::wide;
    double plateau = 0.0;   ///< a; 1 means the indicator of the cube
    double scale = 1.0;     ///< factor applied to the product profile
    std::int64_t inner = 0; ///< half-width of the inner cube where pi >= 1
};

struct ShiftPiReport
{
    std::int64_t L = 0;
    int d = 0;
    double epsilon = 0.0;
    double scale = 1.0;
    bool support_ok = false;       ///< pi vanishes off the cube
    double min_on_inner = 0.0;     ///< min of pi over the inner cube
    double center = 0.0;
    double max_laplacian = 0.0;    ///< over the cube and its shell
    double gradient2 = 0.0;        ///< ||grad pi||^2
    double laplacian_scaled = 0.0; ///< max|Laplacian pi| L^2
    double gradient_scaled = 0.0;  ///< ||grad pi||^2 / L^(d-2)
};

/*!
 * pi_v = c prod_i q(v_i / L) with q the plateau profile. The inner cube has
 * half-width ceil((1 - eps / (2d)) L).
 *
 * plateau: a = 1 - eps / (3d), c = 1; for small L where the inner cube
 * does not fit inside the plateau, a is raised to inner / L.
 * wide: a = max(0, 1 - 3 eps / (2d)) and c = q(t)^-d with
 * t = max(1 - eps / (4d), inner / L), so c does not depend on L once L is
 * moderately large.
 * Either shape degenerates to the indicator of the cube when inner = L.
 */
ShiftPi build_shift_pi(std::int64_t L, double epsilon, int d,
                       ShiftPiShape shape = ShiftPiShape::wide);

ShiftPiReport shift_pi_report(const ShiftPi& s, double epsilon);

struct ShiftPiLadder
{
    std::vector<ShiftPiReport> reports;
    double laplacian_spread = 0.0;  ///< max / min of the scaled Laplacian
    double gradient_spread = 0.0;
    double limit = 1.5;
    bool pass = false;  ///< support, inner bound and both spreads
};

ShiftPiLadder check_shift_pi(int d, const std::vector<std::int64_t>& sizes, double epsilon,
                             ShiftPiShape shape = ShiftPiShape::wide);

}  // namespace msre
