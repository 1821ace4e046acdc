#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "msre/parallel.hpp"

using nlohmann::json;
using namespace msre::cli;

namespace {

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("msre");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("MSRE_LOG");
    const std::string level = env ? env : "info";
    if (level == "error")
        spdlog::set_level(spdlog::level::err);
    else if (level == "debug")
        spdlog::set_level(spdlog::level::debug);
    else
    {
        if (level != "info")
            spdlog::warn("MSRE_LOG={} is not one of error, info, debug; using info", level);
        spdlog::set_level(spdlog::level::info);
    }
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    // parse through the config reader first for line/column messages
    try
    {
        return json::parse(ss.str());
    }
    catch (const json::parse_error&)
    {
        parse_config_text(ss.str());
        throw;
    }
}

struct Overrides
{
    std::string config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> budget;
    std::optional<int> d, n;
    std::optional<std::int64_t> L;
    std::vector<std::int64_t> source;
    std::optional<std::string> mode;
    bool surface_out = false;
    bool print_config = false;
};

json merge_overrides(const std::string& command, const Overrides& o)
{
    json j = o.config.empty() ? json::object() : read_json(o.config);
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    if (!j.contains("kind"))
        j["kind"] = command;
    else if (j["kind"] != command)
        throw ConfigError("config kind '" + j["kind"].dump() + "' does not match subcommand '"
                          + command + "'");
    auto model = [&]() -> json& {
        if (!j.contains("model") || j["model"].is_null())
            j["model"] = json::object();
        return j["model"];
    };
    // command-line values replace both spellings of d and n
    if (o.d)
    {
        j.erase("d");
        model()["d"] = *o.d;
    }
    if (o.n)
    {
        j.erase("n");
        model()["n"] = *o.n;
    }
    if (o.L)
        model()["L"] = *o.L;
    if (o.seed)
        j["seed"] = *o.seed;
    if (o.out_dir)
        j["output"]["dir"] = *o.out_dir;
    if (o.budget)
        j["budget"]["max_node_seconds"] = *o.budget;
    if (!o.source.empty())
        j["greens"]["source"] = o.source;
    if (o.mode)
        j["greens"]["mode"] = *o.mode;
    if (o.surface_out)
        j["output"]["surface"] = true;
    return j;
}

void print_summary(const Envelope& env)
{
    for (const auto& a : env.assertions)
        std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << " value=" << a.value.dump()
                  << " threshold=" << a.threshold.dump() << "\n";
    for (const auto& s : env.advisories)
        std::cout << "advisory: " << s << "\n";
    if (!env.error.empty())
        std::cout << "error: " << env.error << "\n";
    std::cout << "exit " << env.exit_code << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    setup_logging();
    CLI::App app{"Minimal surfaces in a random environment: solvers and checks"};
    app.require_subcommand(1);

    Overrides o;
    unsigned threads = msre::default_threads();
    app.add_option("--config", o.config, "JSON run config")->check(CLI::ExistingFile);
    app.add_option("--out-dir", o.out_dir, "output directory");
    app.add_option("--seed", o.seed, "master seed (overrides the config)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--budget-node-seconds", o.budget, "refuse runs estimated above this");
    app.add_option("--d", o.d, "lattice dimension");
    app.add_option("--n", o.n, "number of height components");
    app.add_option("--L", o.L, "box half-width");
    app.add_flag("--print-config", o.print_config, "print the normalized config and exit");

    for (const auto& name : command_names())
    {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        if (name == "greens")
        {
            sub->add_option("--source", o.source, "source vertex");
            sub->add_option("--mode", o.mode, "exact, mc, bounds or walks");
        }
        if (name == "solve")
            sub->add_flag("--surface", o.surface_out, "also write surface.bin");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig config;
    try
    {
        config = from_json(merge_overrides(command, o));
    }
    catch (const std::exception& e)
    {
        spdlog::error("{}", e.what());
        return exit_usage;
    }
    if (o.print_config)
    {
        std::cout << to_json(config).dump(2) << "\n";
        return exit_pass;
    }

    const Envelope env = dispatch(config, threads);
    if (!env.error.empty())
        spdlog::error("{}", env.error);
    print_summary(env);
    return env.exit_code;
}
