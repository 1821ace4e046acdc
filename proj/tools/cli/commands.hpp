#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "report.hpp"

namespace msre::cli {

enum ExitCode : int
{
    exit_pass = 0,
    exit_usage = 1,
    exit_assertion = 2,
    exit_infeasible = 3,
    exit_budget = 4
};

struct Envelope
{
    nlohmann::json config;  ///< normalized
    std::string command;
    std::vector<Assertion> assertions;
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::string> advisories;
    nlohmann::json manifest = nlohmann::json::array();
    std::string error;
    double wall_clock_ms = 0.0;
    int exit_code = exit_pass;
};

nlohmann::json to_json(const Envelope& e);

/// Rough cost of a run in node-seconds; always positive.
double estimated_run_cost(const RunConfig& c);

/*!
 * Run the command of the config, write its tables, plot scripts and
 * report.json into the output directory and return the envelope. Library
 * errors are mapped to exit codes instead of propagating.
 */
Envelope dispatch(const RunConfig& c, unsigned threads);

}  // namespace msre::cli
