#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msre/disorder.hpp"
#include "msre/solvers.hpp"

namespace msre {

//---------------------------------------------------------------------------//
// Replica runs
//---------------------------------------------------------------------------//

struct ExperimentConfig
{
    int d = 1;
    int n = 1;
    /// Disorder family; the seed is replaced by a per-replica seed.
    DisorderParams disorder;
    double lambda = 1.0;
    /// Unit vector in R^n; empty means e_1.
    Point direction;
    std::vector<std::int64_t> sizes{8, 16, 32, 64, 128, 256};
    std::size_t replicas = 30;
    std::uint64_t seed = 0;
    SolverOptions solver;

    bool band_maxima = true;   ///< M_k for k = 2^j (d = 1 only)
    bool profile = true;       ///< per-vertex norms
    bool keep_surfaces = false;
    /// Every replica uses the same disorder seed.
    bool freeze_disorder = false;
    /// Fits ignore sizes below this.
    std::int64_t fit_floor = 0;

    /// Refuse runs whose estimated cost exceeds this many node-seconds.
    std::optional<double> budget_node_seconds;
    unsigned threads = 0;

    Point unit_direction() const;
};

/// Throws ParameterError naming the offending field.
void validate(const ExperimentConfig& config);

/// Disorder seed of replica r at size L.
std::uint64_t replica_seed(const ExperimentConfig& config, std::int64_t L, std::size_t r);

/*!
 * Estimated cost in node-seconds: the number of (vertex, height level)
 * states summed over sizes and replicas, times a nominal per-state time.
 */
double estimated_cost(const ExperimentConfig& config);

struct ReplicaResult
{
    std::int64_t L = 0;
    std::size_t replica = 0;
    std::uint64_t disorder_seed = 0;
    double ge = 0.0;
    double center_projection = 0.0;  ///< |phi_0 . e|
    double center_norm = 0.0;        ///< ||phi_0||
    std::vector<double> band_max;    ///< M_{2^j}, j = 0..ceil(log2 L)
    std::vector<double> norms;       ///< ||phi_v|| per box vertex
    double gradient2 = 0.0;          ///< ||grad phi||^2 over edges meeting the box
    std::size_t volume = 0;
    bool window_hit = false;
    std::string solver;
    std::optional<Surface> surface;
};

/// M_k = max over L - k <= |v| <= L of |phi_v . e| for a d = 1 cube surface.
double band_maximum(const Surface& phi, std::span<const double> e, std::int64_t k);

/// The box and disorder of replica r at size L.
EnergyModel replica_model(const ExperimentConfig& config, std::int64_t L, std::size_t r);

/*!
 * Solve every (size, replica) pair. Results are ordered by size, then
 * replica, and do not depend on the thread count. Infeasibility is rethrown
 * with the size and replica attached; a run over budget is refused before
 * any work (BudgetError).
 */
std::vector<ReplicaResult> run_replicas(const ExperimentConfig& config);

//---------------------------------------------------------------------------//
// Exponent fits
//---------------------------------------------------------------------------//

struct ExponentFit
{
    std::string statistic;
    int d = 0;
    int n = 0;
    std::string disorder;
    double lambda = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double r2 = 0.0;
    std::vector<std::int64_t> sizes;
    std::vector<double> values;     ///< per-size statistic
    std::vector<double> values_se;
    std::int64_t window_lo = 0;
    std::int64_t window_hi = 0;
};

/*!
 * Least-squares slope of log(value) against log(L) with delta-method
 * errors se / value. Sizes below `floor` are dropped. PreconditionError for
 * fewer than two sizes or a non-positive value (naming the size).
 */
ExponentFit fit_loglog(std::string statistic, const std::vector<std::int64_t>& sizes,
                       const std::vector<double>& values,
                       const std::vector<double>& values_se, std::int64_t floor = 0);

enum class HeightStatistic
{
    projection,  ///< |phi_0 . e|
    norm         ///< ||phi_0||
};

/// Results grouped by size, sizes ascending.
std::vector<std::vector<const ReplicaResult*>>
group_by_size(const std::vector<ReplicaResult>& results);

/// xi: slope of log E|phi_0 . e| (or E||phi_0||) against log L.
ExponentFit estimate_transversal(const std::vector<ReplicaResult>& results,
                                 const ExperimentConfig& config,
                                 HeightStatistic statistic = HeightStatistic::projection);

/// chi: slope of log std(GE) against log L, jackknife errors.
ExponentFit estimate_energy_fluct(const std::vector<ReplicaResult>& results,
                                  const ExperimentConfig& config);

struct ScalingReport
{
    double xi = 0.0;
    double chi = 0.0;
    double gap = 0.0;  ///< chi - (2 xi + d - 2)
    double combined_se = 0.0;
    double tolerance = 0.0;  ///< max(0.1, 3 se)
    bool pass = false;
};

/// ContractError if the fits come from different model families.
ScalingReport check_scaling_relation(const ExponentFit& xi, const ExponentFit& chi, int d);

//---------------------------------------------------------------------------//
// d = 1 standard-deviation sandwich
//---------------------------------------------------------------------------//

/// max_j 2^-j (E M_{2^j})^2.
double sandwich_lower_proxy(std::span<const double> mean_band_max);
/// sum_j 2^-j (1 + sqrt(E M_{2^j}^4)).
double sandwich_upper_proxy(std::span<const double> fourth_moment);

struct SandwichReport
{
    std::vector<std::int64_t> sizes;
    std::vector<double> std_ge;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> a;  ///< lower / std
    std::vector<double> b;  ///< std / upper
    double a_spread = 0.0;  ///< max a / min a
    double b_spread = 0.0;
    bool degenerate = false;  ///< no fluctuations at all
    bool pass = false;
};

/// `sizes` restricts the ladder (empty: all sizes present).
SandwichReport check_d1_sandwich(const std::vector<ReplicaResult>& results,
                                 const ExperimentConfig& config,
                                 const std::vector<std::int64_t>& sizes = {});

//---------------------------------------------------------------------------//
// d = 1 limit shape
//---------------------------------------------------------------------------//

struct LimitShapePoint
{
    double x = 0.0;
    double gap = 0.0;  ///< mu(x) - mu(0) - x^2 / 2
    double se = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct LimitShapeReport
{
    std::vector<std::int64_t> sizes;  ///< sizes pooled for the estimate
    std::vector<LimitShapePoint> points;
    double max_identity_residual = 0.0;
    std::size_t identity_checks = 0;
    double identity_tolerance = 1e-9;
    double relative_tolerance = 0.05;
    bool pass = false;
};

/*!
 * Boundary data 0 at 0 and x L e at L around I_L = {1, ..., L - 1}. For
 * every replica the effect-of-boundary identity is checked exactly, and
 * mu(x) - mu(0) is estimated from (GE^{x} - GE^{0}) / L on common disorder,
 * pooled over the two largest sizes of the config.
 */
LimitShapeReport check_limit_shape_d1(const ExperimentConfig& config,
                                      const std::vector<double>& x_ladder);

//---------------------------------------------------------------------------//
// Profiles and delocalization
//---------------------------------------------------------------------------//

struct ProfileReport
{
    std::vector<std::int64_t> sizes;
    /// Per size: r = 1..L+1 and E||phi_v|| averaged over vertices at that r.
    std::vector<std::vector<double>> mean_norm;
    double exponent = 0.0;    ///< (4 - d) / 4
    double ratio_sup = 0.0;   ///< over the upper half of the bins, all sizes
    double ratio_inf = 0.0;
    double slope = 0.0;       ///< log-log slope in r over the upper bins
    std::size_t empty_bins = 0;
    double limit = 1.5;
    bool pass = false;
};

ProfileReport localization_profile(const std::vector<ReplicaResult>& results,
                                   const ExperimentConfig& config);

struct DelocalizationReport
{
    std::int64_t L = 0;
    std::vector<double> h;
    std::vector<double> fraction;  ///< E |{v : ||phi_v|| >= h}| / |box|
    double h_half_median = 0.0;    ///< half the median of ||phi_0||
    double fraction_at_half_median = 0.0;
    double floor = 0.05;
    bool pass = false;
};

/// Uses the largest size present.
DelocalizationReport delocalization_fraction(const std::vector<ReplicaResult>& results,
                                             const ExperimentConfig& config,
                                             const std::vector<double>& h_ladder);

//---------------------------------------------------------------------------//
// Concentration
//---------------------------------------------------------------------------//

struct ConcentrationReport
{
    std::vector<std::int64_t> sizes;
    std::vector<double> volume;
    std::vector<double> variance;
    std::vector<double> gradient_per_volume;
    double variance_slope = 0.0;  ///< log Var(GE) against log |box|
    double gradient_slope = 0.0;  ///< log E||grad phi||^2/|box| against log L
    double exceed2 = 0.0;         ///< frequency of |GE - mean| >= 2 std
    double exceed3 = 0.0;
    bool pass = false;
};

ConcentrationReport check_concentration(const std::vector<ReplicaResult>& results,
                                        const ExperimentConfig& config);

}  // namespace msre
