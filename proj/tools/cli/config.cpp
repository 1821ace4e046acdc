#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace msre::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<Command, std::string>>& command_table()
{
    static const std::vector<std::pair<Command, std::string>> t{
        {Command::identity_check, "identity-check"},
        {Command::solve, "solve"},
        {Command::greens, "greens"},
        {Command::exponents, "exponents"},
        {Command::scaling, "scaling"},
        {Command::limit_shape, "limit-shape"},
        {Command::profile, "profile"},
        {Command::concentration, "concentration"},
        {Command::shiftpi, "shiftpi"},
        {Command::disorder_dump, "disorder-dump"},
    };
    return t;
}

const char* mode_name(GreensMode m)
{
    switch (m)
    {
    case GreensMode::exact: return "exact";
    case GreensMode::mc: return "mc";
    case GreensMode::bounds: return "bounds";
    case GreensMode::walks: return "walks";
    }
    return "exact";
}

// One JSON object being read; remembers which keys were consumed so the
// rest can be reported as unknown.
class Block
{
  public:
    Block(const json* j, std::string path) : j_(j), path_(std::move(path))
    {
        if (j_ && !j_->is_null() && !j_->is_object())
            throw ConfigError(where() + " must be an object");
        if (j_ && j_->is_null())
            j_ = nullptr;
    }

    std::string key_path(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* get(const std::string& key)
    {
        seen_.insert(key);
        if (!j_)
            return nullptr;
        auto it = j_->find(key);
        if (it == j_->end() || it->is_null())
            return nullptr;
        return &*it;
    }

    Block child(const std::string& key) { return Block(get(key), key_path(key)); }

    void finish() const
    {
        if (!j_)
            return;
        for (auto it = j_->begin(); it != j_->end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError("unknown key '" + key_path(it.key()) + "'");
    }

    ConfigError bad(const std::string& key, const std::string& what) const
    {
        return ConfigError("'" + key_path(key) + "' " + what);
    }

    void read(const std::string& key, double& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number())
                throw bad(key, "must be a number");
            out = v->get<double>();
        }
    }

    void read(const std::string& key, std::optional<double>& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number())
                throw bad(key, "must be a number or null");
            out = v->get<double>();
        }
        else
            out.reset();
    }

    template<class I>
        requires std::is_integral_v<I>
    void read(const std::string& key, I& out)
    {
        if (const json* v = get(key))
            out = integer<I>(key, *v);
    }

    void read(const std::string& key, bool& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_boolean())
                throw bad(key, "must be true or false");
            out = v->get<bool>();
        }
    }

    void read(const std::string& key, std::string& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_string())
                throw bad(key, "must be a string");
            out = v->get<std::string>();
        }
    }

    template<class T>
    void read(const std::string& key, std::vector<T>& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_array())
                throw bad(key, "must be an array");
            out.clear();
            for (const auto& x : *v)
            {
                if constexpr (std::is_integral_v<T>)
                    out.push_back(integer<T>(key, x));
                else
                {
                    if (!x.is_number())
                        throw bad(key, "must hold numbers");
                    out.push_back(x.get<T>());
                }
            }
        }
    }

    void read(const std::string& key, std::optional<std::pair<double, double>>& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number()
                || !(*v)[1].is_number())
                throw bad(key, "must be [lo, hi] or null");
            out = std::pair((*v)[0].get<double>(), (*v)[1].get<double>());
            if (!(out->first <= out->second))
                throw bad(key, "needs lo <= hi");
        }
        else
            out.reset();
    }

    void read(const std::string& key, std::optional<Vertex>& out)
    {
        if (const json* v = get(key))
        {
            Vertex x;
            read_into(key, *v, x);
            out = std::move(x);
        }
        else
            out.reset();
    }

  private:
    template<class I>
    I integer(const std::string& key, const json& v) const
    {
        if (!v.is_number_integer())
            throw bad(key, "must be an integer");
        if constexpr (std::is_unsigned_v<I>)
        {
            if (v.is_number_unsigned())
                return static_cast<I>(v.get<std::uint64_t>());
            if (v.get<std::int64_t>() < 0)
                throw bad(key, "must be non-negative");
            return static_cast<I>(v.get<std::int64_t>());
        }
        else
            return static_cast<I>(v.get<std::int64_t>());
    }

    void read_into(const std::string& key, const json& v, Vertex& out) const
    {
        if (!v.is_array())
            throw bad(key, "must be an array of integers");
        for (const auto& x : v)
            out.push_back(integer<std::int64_t>(key, x));
    }

    std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

    const json* j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok)
        throw ConfigError("'" + key + "' " + what);
}

void validate(const RunConfig& c)
{
    require(c.d >= 1 && c.d <= 4, "model.d", "must lie in 1..4");
    require(c.n >= 1 && c.n <= 4, "model.n", "must lie in 1..4");
    require(c.lambda > 0.0 && std::isfinite(c.lambda), "model.lambda", "must be positive");
    require(c.L >= 1, "model.L", "must be at least 1");
    if (!c.direction.empty())
    {
        require(static_cast<int>(c.direction.size()) == c.n, "model.direction",
                "must have n entries");
        double s = 0.0;
        for (double x : c.direction)
            s += x * x;
        require(std::abs(std::sqrt(s) - 1.0) <= 1e-12, "model.direction", "must be a unit vector");
    }
    require(c.disorder.delta > 0.0, "disorder.delta", "must be positive");
    require(c.disorder.intensity > 0.0, "disorder.intensity", "must be positive");
    require(c.hurst == 0.5, "disorder.hurst", "only 0.5 is supported");
    require(c.solver.local.restarts >= 1, "solver.restarts", "must be at least 1");
    require(c.solver.local.sweeps >= 1, "solver.sweeps", "must be at least 1");
    require(!c.solver.window || *c.solver.window > 0.0, "solver.window", "must be positive");
    require(!c.solver.step || *c.solver.step > 0.0, "solver.step", "must be positive");
    require(!c.sizes.empty(), "statistics.sizes", "must not be empty");
    for (std::size_t k = 0; k < c.sizes.size(); ++k)
    {
        require(c.sizes[k] >= 1, "statistics.sizes", "must be positive");
        require(k == 0 || c.sizes[k] > c.sizes[k - 1], "statistics.sizes",
                "must be strictly increasing");
    }
    require(c.replicas >= 1, "statistics.replicas", "must be at least 1");
    require(c.fit_floor >= 0, "statistics.fit_floor", "must be non-negative");
    require(c.instances >= 1, "statistics.instances", "must be at least 1");
    for (double h : c.h_ladder)
        require(h > 0.0, "statistics.h_ladder", "must hold positive values");
    for (double x : c.x_ladder)
        require(x >= 0.0 && std::isfinite(x), "statistics.x_ladder",
                "must hold non-negative values");
    for (int m : c.n_sweep)
        require(m >= 1 && m <= 4, "statistics.n_sweep", "must hold values in 1..4");
    require(c.epsilon > 0.0 && c.epsilon < 1.0, "statistics.epsilon", "must lie in (0, 1)");
    require(c.thresholds.identity > 0.0, "statistics.thresholds.identity", "must be positive");
    require(c.thresholds.scaling_gap > 0.0, "statistics.thresholds.scaling_gap",
            "must be positive");
    require(c.thresholds.stability >= 1.0, "statistics.thresholds.stability",
            "must be at least 1");
    for (const auto* v : {&c.source, &c.target})
        if (*v)
            require(static_cast<int>((*v)->size()) == c.d, "greens.source/target",
                    "must have d entries");
    require(c.walkers >= 100, "greens.walkers", "must be at least 100");
    require(c.samples >= 1, "greens.samples", "must be at least 1");
    require(c.trials >= 1, "greens.trials", "must be at least 1");
    require(c.dump_window > 0.0, "dump.window", "must be positive");
    require(c.dump_step > 0.0, "dump.step", "must be positive");
    require(!c.out_dir.empty(), "output.dir", "must not be empty");
    require(!c.budget_node_seconds || *c.budget_node_seconds >= 0.0,
            "budget.max_node_seconds", "must be non-negative");
}

template<class E, class F>
E parse_enum(const std::string& key, const std::string& value, F&& parse)
{
    try
    {
        return parse(value);
    }
    catch (const std::exception&)
    {
        throw ConfigError("'" + key + "' has unknown value '" + value + "'");
    }
}

json nullable(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json nullable(const std::optional<std::pair<double, double>>& x)
{
    return x ? json::array({x->first, x->second}) : json(nullptr);
}

json nullable(const std::optional<Vertex>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

Command parse_command(const std::string& name)
{
    for (const auto& [c, s] : command_table())
        if (s == name)
            return c;
    throw ConfigError("unknown command '" + name + "'");
}

std::string to_string(Command c)
{
    for (const auto& [k, s] : command_table())
        if (k == c)
            return s;
    return "?";
}

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [c, s] : command_table())
            v.push_back(s);
        return v;
    }();
    return names;
}

RunConfig from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    RunConfig c;
    Block top(&j, "");

    top.read("schema_version", c.schema_version);
    if (c.schema_version != kSchemaVersion)
        throw ConfigError("schema_version " + std::to_string(c.schema_version)
                          + " is not supported (expected "
                          + std::to_string(kSchemaVersion) + ")");

    std::string kind;
    top.read("kind", kind);
    if (kind.empty())
        throw ConfigError("missing required key 'kind'");
    c.kind = parse_enum<Command>("kind", kind, parse_command);
    top.read("seed", c.seed);

    // d and n may sit at the top level or in the model block
    std::optional<int> d_top, n_top;
    if (top.get("d"))
    {
        int v = 0;
        top.read("d", v);
        d_top = v;
    }
    if (top.get("n"))
    {
        int v = 0;
        top.read("n", v);
        n_top = v;
    }
    {
        Block m = top.child("model");
        std::optional<int> d_m, n_m;
        if (m.get("d"))
        {
            int v = 0;
            m.read("d", v);
            d_m = v;
        }
        if (m.get("n"))
        {
            int v = 0;
            m.read("n", v);
            n_m = v;
        }
        if (d_top && d_m && *d_top != *d_m)
            throw ConfigError("'d' and 'model.d' disagree");
        if (n_top && n_m && *n_top != *n_m)
            throw ConfigError("'n' and 'model.n' disagree");
        if (!d_top && !d_m)
            throw ConfigError("missing required key 'd'");
        if (!n_top && !n_m)
            throw ConfigError("missing required key 'n'");
        c.d = d_top ? *d_top : *d_m;
        c.n = n_top ? *n_top : *n_m;
        m.read("lambda", c.lambda);
        m.read("L", c.L);
        m.read("direction", c.direction);
        m.finish();
    }
    {
        Block b = top.child("disorder");
        std::string kind_name = to_string(c.disorder.kind);
        b.read("kind", kind_name);
        c.disorder.kind = parse_enum<DisorderKind>("disorder.kind", kind_name,
                                                   parse_disorder_kind);
        std::optional<std::uint64_t> seed;
        if (b.get("seed"))
        {
            std::uint64_t s = 0;
            b.read("seed", s);
            seed = s;
        }
        c.disorder_seed = seed;
        b.read("delta", c.disorder.delta);
        b.read("intensity", c.disorder.intensity);
        b.read("hurst", c.hurst);
        b.read("zero_linear", c.disorder.zero_linear);
        Block bump = b.child("bump");
        std::string profile = to_string(c.disorder.bump);
        bump.read("profile", profile);
        c.disorder.bump = parse_enum<BumpProfile>("disorder.bump.profile", profile,
                                                  parse_bump_profile);
        int bn = c.n;
        bump.read("n", bn);
        if (bn != c.n)
            throw ConfigError("'disorder.bump.n' must equal n");
        bump.finish();
        b.finish();
        c.disorder.n = c.n;
    }
    {
        Block s = top.child("solver");
        std::string name = to_string(c.solver.kind);
        s.read("name", name);
        c.solver.kind = parse_enum<SolverKind>("solver.name", name, parse_solver_kind);
        s.read("window", c.solver.window);
        s.read("step", c.solver.step);
        s.read("retry_window", c.solver.retry_window);
        s.read("restarts", c.solver.local.restarts);
        s.read("sweeps", c.solver.local.sweeps);
        s.finish();
    }
    {
        Block s = top.child("statistics");
        s.read("sizes", c.sizes);
        s.read("replicas", c.replicas);
        s.read("fit_floor", c.fit_floor);
        std::string stat = c.statistic == HeightStatistic::projection ? "projection" : "norm";
        s.read("statistic", stat);
        if (stat == "projection")
            c.statistic = HeightStatistic::projection;
        else if (stat == "norm")
            c.statistic = HeightStatistic::norm;
        else
            throw ConfigError("'statistics.statistic' must be projection or norm");
        s.read("instances", c.instances);
        s.read("h_ladder", c.h_ladder);
        s.read("x_ladder", c.x_ladder);
        s.read("n_sweep", c.n_sweep);
        s.read("epsilon", c.epsilon);
        std::string shape = c.pi_shape == ShiftPiShape::wide ? "wide" : "plateau";
        s.read("pi_shape", shape);
        if (shape == "wide")
            c.pi_shape = ShiftPiShape::wide;
        else if (shape == "plateau")
            c.pi_shape = ShiftPiShape::plateau;
        else
            throw ConfigError("'statistics.pi_shape' must be wide or plateau");
        Block t = s.child("thresholds");
        t.read("identity", c.thresholds.identity);
        t.read("xi", c.thresholds.xi);
        t.read("chi", c.thresholds.chi);
        t.read("scaling_gap", c.thresholds.scaling_gap);
        t.read("stability", c.thresholds.stability);
        t.finish();
        s.finish();
    }
    {
        Block g = top.child("greens");
        std::string mode = mode_name(c.greens_mode);
        g.read("mode", mode);
        if (mode == "exact")
            c.greens_mode = GreensMode::exact;
        else if (mode == "mc")
            c.greens_mode = GreensMode::mc;
        else if (mode == "bounds")
            c.greens_mode = GreensMode::bounds;
        else if (mode == "walks")
            c.greens_mode = GreensMode::walks;
        else
            throw ConfigError("'greens.mode' must be exact, mc, bounds or walks");
        g.read("source", c.source);
        g.read("target", c.target);
        g.read("walkers", c.walkers);
        g.read("samples", c.samples);
        g.read("trials", c.trials);
        g.finish();
    }
    {
        Block b = top.child("dump");
        b.read("window", c.dump_window);
        b.read("step", c.dump_step);
        b.finish();
    }
    {
        Block o = top.child("output");
        o.read("dir", c.out_dir);
        o.read("csv", c.csv);
        o.read("plot", c.plot);
        o.read("surface", c.surface);
        o.finish();
    }
    {
        Block b = top.child("budget");
        b.read("max_node_seconds", c.budget_node_seconds);
        b.finish();
    }
    top.finish();
    validate(c);
    return c;
}

json to_json(const RunConfig& c)
{
    json j;
    j["schema_version"] = c.schema_version;
    j["kind"] = to_string(c.kind);
    j["seed"] = c.seed;
    j["model"] = {{"d", c.d},
                  {"n", c.n},
                  {"lambda", c.lambda},
                  {"L", c.L},
                  {"direction", c.direction.empty() ? json(nullptr) : json(c.direction)}};
    j["disorder"] = {{"kind", to_string(c.disorder.kind)},
                     {"seed", c.disorder_seed ? json(*c.disorder_seed) : json(nullptr)},
                     {"delta", c.disorder.delta},
                     {"intensity", c.disorder.intensity},
                     {"hurst", c.hurst},
                     {"zero_linear", c.disorder.zero_linear},
                     {"bump", {{"profile", to_string(c.disorder.bump)}, {"n", c.n}}}};
    j["solver"] = {{"name", to_string(c.solver.kind)},
                   {"window", nullable(c.solver.window)},
                   {"step", nullable(c.solver.step)},
                   {"retry_window", c.solver.retry_window},
                   {"restarts", c.solver.local.restarts},
                   {"sweeps", c.solver.local.sweeps}};
    j["statistics"] = {
        {"sizes", c.sizes},
        {"replicas", c.replicas},
        {"fit_floor", c.fit_floor},
        {"statistic", c.statistic == HeightStatistic::projection ? "projection" : "norm"},
        {"instances", c.instances},
        {"h_ladder", c.h_ladder},
        {"x_ladder", c.x_ladder},
        {"n_sweep", c.n_sweep},
        {"epsilon", c.epsilon},
        {"pi_shape", c.pi_shape == ShiftPiShape::wide ? "wide" : "plateau"},
        {"thresholds",
         {{"identity", c.thresholds.identity},
          {"xi", nullable(c.thresholds.xi)},
          {"chi", nullable(c.thresholds.chi)},
          {"scaling_gap", c.thresholds.scaling_gap},
          {"stability", c.thresholds.stability}}}};
    j["greens"] = {{"mode", mode_name(c.greens_mode)},
                   {"source", nullable(c.source)},
                   {"target", nullable(c.target)},
                   {"walkers", c.walkers},
                   {"samples", c.samples},
                   {"trials", c.trials}};
    j["dump"] = {{"window", c.dump_window}, {"step", c.dump_step}};
    j["output"] = {{"dir", c.out_dir}, {"csv", c.csv}, {"plot", c.plot}, {"surface", c.surface}};
    j["budget"] = {{"max_node_seconds", nullable(c.budget_node_seconds)}};
    return j;
}

json normalize(const json& j) { return to_json(from_json(j)); }

RunConfig parse_config_text(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        // byte offset to line and column
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                col = 1;
            }
            else
                ++col;
        }
        throw ConfigError("parse error at line " + std::to_string(line) + ", column "
                          + std::to_string(col) + ": " + e.what());
    }
    return from_json(j);
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig experiment_config(const RunConfig& c, unsigned threads)
{
    ExperimentConfig e;
    e.d = c.d;
    e.n = c.n;
    e.disorder = c.disorder;
    e.lambda = c.lambda;
    e.direction = c.direction;
    e.sizes = c.sizes;
    e.replicas = c.replicas;
    e.seed = c.seed;
    e.solver = c.solver;
    e.solver.local.seed = c.seed;
    e.band_maxima = c.d == 1;
    e.profile = c.kind == Command::profile;
    e.fit_floor = c.fit_floor;
    e.budget_node_seconds = c.budget_node_seconds;
    e.threads = threads;
    return e;
}

}  // namespace msre::cli
