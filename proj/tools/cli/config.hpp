#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msre/experiments.hpp"
#include "msre/shift_pi.hpp"

namespace msre::cli {

inline constexpr int kSchemaVersion = 1;

/// Parse, validation and version errors. The message names the key or the
/// line and column.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Command
{
    identity_check,
    solve,
    greens,
    exponents,
    scaling,
    limit_shape,
    profile,
    concentration,
    shiftpi,
    disorder_dump
};

Command parse_command(const std::string& name);
std::string to_string(Command c);
const std::vector<std::string>& command_names();

enum class GreensMode
{
    exact,
    mc,
    bounds,
    walks
};

struct Thresholds
{
    double identity = 1e-9;
    std::optional<std::pair<double, double>> xi;   // null: table value for d = 1
    std::optional<std::pair<double, double>> chi;
    double scaling_gap = 0.1;
    double stability = 1.5;
};

struct RunConfig
{
    int schema_version = kSchemaVersion;
    Command kind = Command::identity_check;
    std::uint64_t seed = 0;

    // model
    int d = 1;
    int n = 1;
    double lambda = 1.0;
    std::int64_t L = 4;
    Point direction;

    // disorder; seed unset means the master seed
    DisorderParams disorder;
    std::optional<std::uint64_t> disorder_seed;
    double hurst = 0.5;

    // solver
    SolverOptions solver;

    // statistics
    std::vector<std::int64_t> sizes{8, 16, 32, 64, 128, 256};
    std::size_t replicas = 30;
    std::int64_t fit_floor = 0;
    HeightStatistic statistic = HeightStatistic::projection;
    std::size_t instances = 100;
    std::vector<double> h_ladder{0.5, 1.0, 2.0, 4.0};
    std::vector<double> x_ladder{0.5, 1.0};
    std::vector<int> n_sweep;
    double epsilon = 0.5;
    ShiftPiShape pi_shape = ShiftPiShape::wide;
    Thresholds thresholds;

    // greens
    GreensMode greens_mode = GreensMode::exact;
    std::optional<Vertex> source;  // box centre if unset
    std::optional<Vertex> target;  // source if unset
    std::size_t walkers = 20000;
    std::size_t samples = 16;
    std::size_t trials = 100000;

    // disorder dump
    double dump_window = 2.0;
    double dump_step = 0.0625;

    // output and budget
    std::string out_dir = "msre-out";
    bool csv = true;
    bool plot = true;
    bool surface = false;
    std::optional<double> budget_node_seconds;
};

/// Defaults filled, every key checked. Throws ConfigError.
RunConfig from_json(const nlohmann::json& j);
/// Complete canonical form; from_json(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);
/// to_json(from_json(j)).
nlohmann::json normalize(const nlohmann::json& j);

/// JSON text to a config; parse errors carry line and column.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Replica-run view of a config.
ExperimentConfig experiment_config(const RunConfig& c, unsigned threads);

}  // namespace msre::cli
