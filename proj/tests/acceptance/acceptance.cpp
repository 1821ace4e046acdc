// Acceptance suite: one PASS/FAIL line per criterion, one JSON report per
// criterion in the output directory, then a full re-run whose reports must
// match byte for byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msre/errors.hpp"
#include "msre/experiments.hpp"
#include "msre/greens.hpp"
#include "msre/identities.hpp"
#include "msre/parallel.hpp"
#include "msre/rng.hpp"
#include "msre/shift_pi.hpp"
#include "msre/solvers.hpp"
#include "oracles/brute_force.hpp"

using namespace msre;
using nlohmann::json;

namespace {

struct Outcome
{
    explicit Outcome(std::string n) : name(std::move(n)) {}

    std::string name;
    bool pass = false;
    json report;
    std::string summary;
};

DisorderField field(DisorderKind kind, int n, std::uint64_t seed)
{
    DisorderParams p;
    p.kind = kind;
    p.n = n;
    p.seed = seed;
    return DisorderField(p);
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

//---------------------------------------------------------------------------//
// Shared replica runs
//---------------------------------------------------------------------------//
struct Shared
{
    unsigned threads = 1;
    std::optional<ExperimentConfig> white_config;
    std::vector<ReplicaResult> white;

    const std::vector<ReplicaResult>& white_d1()
    {
        if (!white_config)
        {
            ExperimentConfig c;
            c.d = 1;
            c.n = 1;
            c.lambda = 1.0;
            c.sizes = {16, 32, 64, 128, 256};
            c.replicas = 200;
            c.seed = 2024;
            c.solver.kind = SolverKind::dp;
            c.fit_floor = 16;
            c.band_maxima = true;
            c.profile = false;
            c.threads = threads;
            white_config = c;
            white = run_replicas(c);
        }
        return white;
    }
};

//---------------------------------------------------------------------------//
// Criteria
//---------------------------------------------------------------------------//
Outcome main_identity(Shared&)
{
    Outcome o("main_identity");
    double worst = 0.0;
    std::size_t count = 0;
    json per_combo = json::array();
    const double lambdas[] = {0.25, 1.0, 4.0};
    for (int d = 1; d <= 2; ++d)
        for (int n = 1; n <= 2; ++n)
            for (double lambda : lambdas)
            {
                double combo_worst = 0.0;
                const auto dom = BoxDomain::cube(d, 4);
                for (int k = 0; k < 84; ++k)
                {
                    if (count == 1000)
                        break;
                    const std::uint64_t seed = derive_seed(11, count);
                    SequentialRng rng(seed);
                    Surface phi(dom, n), s(dom, n);
                    for (double& x : phi.interior())
                        x = rng.uniform(-2.0, 2.0);
                    for (double& x : phi.shell())
                        x = rng.uniform(-2.0, 2.0);
                    for (double& x : s.interior())
                        x = rng.gaussian();
                    for (double& x : s.shell())
                        x = rng.gaussian();
                    const auto r = verify_main_identity(field(DisorderKind::white, n, seed),
                                                        lambda, phi, s);
                    const double rel = r.comparable ? r.residual / (1.0 + std::abs(r.energy))
                                                    : kInfinity;
                    combo_worst = std::max(combo_worst, rel);
                    ++count;
                }
                worst = std::max(worst, combo_worst);
                per_combo.push_back({{"d", d}, {"n", n}, {"lambda", lambda},
                                     {"max_relative_residual", combo_worst}});
            }
    o.pass = count == 1000 && worst <= 1e-9;
    o.report = {{"instances", count}, {"max_relative_residual", worst},
                {"threshold", 1e-9}, {"combinations", per_combo}};
    o.summary = "instances=" + std::to_string(count) + " max_rel=" + fmt(worst);
    return o;
}

Outcome boundary_shift(Shared&)
{
    Outcome o("boundary_shift");
    double worst_linear = 0.0, worst_dp = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i)
    {
        const int d = 1 + static_cast<int>(i % 2);
        const int n = 1 + static_cast<int>((i / 2) % 2);
        SequentialRng rng(derive_seed(12, i));
        Surface tau(BoxDomain::cube(d, d == 1 ? 8 : 4), n);
        for (double& x : tau.shell())
            x = rng.uniform(-3.0, 3.0);
        const EnergyModel m(field(DisorderKind::linear, n, derive_seed(13, i)),
                            rng.uniform(0.25, 4.0), tau);
        const auto r = verify_boundary_shift(m, SolverKind::closed_form);
        worst_linear = std::max({worst_linear, r.surface_residual, r.energy_residual});
    }
    const std::int64_t L = 8;
    const double step = 0.25;
    for (std::uint64_t i = 0; i < 100; ++i)
    {
        SequentialRng rng(derive_seed(14, i));
        const auto k = static_cast<std::int64_t>(rng.below(7)) - 3;
        Surface tau(BoxDomain::cube(1, L), 1);
        tau.set(Vertex{L + 1},
                std::vector<double>{static_cast<double>(k) * step * static_cast<double>(2 * L + 2)});
        const EnergyModel m(field(DisorderKind::white, 1, derive_seed(15, i)), 1.0, tau);
        const auto r = verify_boundary_shift(m, SolverKind::dp, HeightGrid::symmetric(1, 6.0, step));
        worst_dp = std::max({worst_dp, r.surface_residual, r.energy_residual});
    }
    o.pass = worst_linear <= 1e-9 && worst_dp <= 1e-9;
    o.report = {{"linear_closed_form", {{"instances", 100}, {"max_residual", worst_linear}}},
                {"d1_dp_grid_aligned", {{"instances", 100}, {"max_residual", worst_dp}}},
                {"threshold", 1e-9}};
    o.summary = "linear=" + fmt(worst_linear) + " dp=" + fmt(worst_dp);
    return o;
}

Outcome solver_oracles(Shared&)
{
    Outcome o("solver_oracles");
    std::size_t dp_ok = 0, mc_ok = 0, cross_ok = 0;
    const std::size_t dp_n = 20, mc_n = 10, cross_n = 50;
    for (std::uint64_t i = 0; i < dp_n; ++i)
    {
        const EnergyModel m(BoxDomain::cube(1, 2), field(DisorderKind::white, 1, derive_seed(21, i)),
                            1.0);
        const auto grid = HeightGrid::symmetric(1, 0.5, 0.25);
        const auto brute = oracle::brute_force_minimum(m, grid);
        const auto gs = solve_dp_1d(m, grid);
        if (brute.configurations == 3125 && gs.surface == brute.surface
            && std::abs(gs.energy - brute.energy) <= 1e-12 * (1.0 + std::abs(brute.energy)))
            ++dp_ok;
    }
    HeightGrid four;
    four.lo = {-0.75};
    four.hi = {0.75};
    four.step = 0.5;
    four.counts = {4};
    for (std::uint64_t i = 0; i < mc_n; ++i)
    {
        const EnergyModel m(BoxDomain::cube(2, 1), field(DisorderKind::white, 1, derive_seed(22, i)),
                            1.0);
        const auto brute = oracle::brute_force_minimum(m, four);
        const auto gs = solve_mincut(m, four);
        if (brute.configurations == 262144 && gs.surface == brute.surface
            && std::abs(gs.energy - brute.energy) <= 1e-9 * (1.0 + std::abs(brute.energy)))
            ++mc_ok;
    }
    for (std::uint64_t i = 0; i < cross_n; ++i)
    {
        const std::int64_t L = 4 + static_cast<std::int64_t>(i % 13);
        const EnergyModel m(BoxDomain::cube(1, L), field(DisorderKind::white, 1, derive_seed(23, i)),
                            1.0);
        const auto grid = HeightGrid::policy(1, 1, L, 1.0);
        const auto a = solve_mincut(m, grid);
        const auto b = solve_dp_1d(m, grid);
        if (std::abs(a.energy - b.energy) <= 1e-9 * (1.0 + std::abs(b.energy)))
            ++cross_ok;
    }
    o.pass = dp_ok == dp_n && mc_ok == mc_n && cross_ok == cross_n;
    o.report = {{"dp_vs_brute_force", {{"instances", dp_n}, {"exact", dp_ok}, {"configurations", 3125}}},
                {"mincut_vs_brute_force",
                 {{"instances", mc_n}, {"exact", mc_ok}, {"configurations", 262144}}},
                {"mincut_vs_dp", {{"instances", cross_n}, {"exact", cross_ok}}}};
    o.summary = "dp=" + std::to_string(dp_ok) + "/" + std::to_string(dp_n) + " mincut="
                + std::to_string(mc_ok) + "/" + std::to_string(mc_n) + " cross="
                + std::to_string(cross_ok) + "/" + std::to_string(cross_n);
    return o;
}

Outcome linear_closed_form(Shared& sh)
{
    Outcome o("linear_closed_form");
    double worst = 0.0;
    const auto grid = HeightGrid::symmetric(2, 8.0, 0.25);
    for (std::uint64_t i = 0; i < 20; ++i)
    {
        const EnergyModel m(BoxDomain::cube(2, 8), field(DisorderKind::linear, 2, derive_seed(31, i)),
                            1.0);
        const auto exact = solve_linear_closed_form(m);
        SequentialRng rng(derive_seed(32, i));
        std::vector<double> init(m.domain().size() * 2);
        for (double& x : init)
            x = rng.uniform(-4.0, 4.0);
        LocalOptions opt;
        opt.restarts = 1;
        opt.sweeps = 5000;
        opt.initial = {init};
        const auto gs = solve_local(m, grid, opt);
        worst = std::max(worst, max_abs_difference(gs.surface, exact.surface));
    }

    ExperimentConfig c;
    c.d = 1;
    c.n = 1;
    c.disorder.kind = DisorderKind::linear;
    c.sizes = {16, 32, 64, 128, 256};
    c.replicas = 200;
    c.seed = 33;
    c.solver.kind = SolverKind::closed_form;
    c.band_maxima = false;
    c.profile = false;
    c.threads = sh.threads;
    const auto xi = estimate_transversal(run_replicas(c), c);
    const bool xi_ok = xi.slope >= 1.45 && xi.slope <= 1.55;
    o.pass = worst <= 1e-6 && xi_ok;
    o.report = {{"local_vs_closed_form", {{"instances", 20}, {"max_norm", worst}, {"threshold", 1e-6}}},
                {"xi_linear", {{"value", xi.slope}, {"se", xi.slope_se}, {"window", {1.45, 1.55}},
                               {"sizes", xi.sizes}, {"means", xi.values}}}};
    o.summary = "local_max=" + fmt(worst) + " xi=" + fmt(xi.slope) + "+-" + fmt(xi.slope_se);
    return o;
}

Outcome exponents(Shared& sh)
{
    Outcome o("exponents_d1_white");
    const auto& res = sh.white_d1();
    const auto& c = *sh.white_config;
    const auto xi = estimate_transversal(res, c);
    const auto chi = estimate_energy_fluct(res, c);
    const double gap = chi.slope - (2.0 * xi.slope - 1.0);
    const bool xi_ok = xi.slope >= 0.55 && xi.slope <= 0.80;
    const bool chi_ok = chi.slope >= 0.20 && chi.slope <= 0.45;
    const bool gap_ok = std::abs(gap) <= 0.1;
    std::size_t hits = 0;
    for (const auto& r : res)
        hits += r.window_hit ? 1 : 0;
    o.pass = xi_ok && chi_ok && gap_ok;
    o.report = {{"xi", {{"value", xi.slope}, {"se", xi.slope_se}, {"window", {0.55, 0.80}},
                        {"pass", xi_ok}, {"sizes", xi.sizes}, {"means", xi.values}}},
                {"chi", {{"value", chi.slope}, {"se", chi.slope_se}, {"window", {0.20, 0.45}},
                         {"pass", chi_ok}, {"std_ge", chi.values}}},
                {"scaling_gap", {{"value", gap}, {"threshold", 0.1}, {"pass", gap_ok}}},
                {"replicas", c.replicas},
                {"window_hits", hits}};
    o.summary = "xi=" + fmt(xi.slope) + " chi=" + fmt(chi.slope) + " gap=" + fmt(gap);
    return o;
}

Outcome sandwich(Shared& sh)
{
    Outcome o("sandwich_d1");
    const auto rep = check_d1_sandwich(sh.white_d1(), *sh.white_config, {32, 64, 128});
    o.pass = rep.pass && rep.a_spread <= 2.0 && rep.b_spread <= 2.0;
    o.report = {{"sizes", rep.sizes},   {"std_ge", rep.std_ge}, {"lower", rep.lower},
                {"upper", rep.upper},   {"a", rep.a},           {"b", rep.b},
                {"a_spread", rep.a_spread}, {"b_spread", rep.b_spread}, {"threshold", 2.0}};
    o.summary = "a_spread=" + fmt(rep.a_spread) + " b_spread=" + fmt(rep.b_spread);
    return o;
}

Outcome limit_shape(Shared& sh)
{
    Outcome o("limit_shape_d1");
    ExperimentConfig c;
    c.d = 1;
    c.n = 1;
    c.sizes = {64, 128};
    c.replicas = 200;
    c.seed = 41;
    c.solver.kind = SolverKind::dp;
    c.threads = sh.threads;
    const auto rep = check_limit_shape_d1(c, {0.5, 1.0});
    json pts = json::array();
    std::string s;
    for (const auto& p : rep.points)
    {
        pts.push_back({{"x", p.x}, {"gap", p.gap}, {"se", p.se}, {"tolerance", p.tolerance},
                       {"pass", p.pass}});
        s += " gap(" + fmt(p.x) + ")=" + fmt(p.gap) + "/" + fmt(p.tolerance);
    }
    o.pass = rep.pass;
    o.report = {{"sizes", rep.sizes},
                {"replicas", c.replicas},
                {"points", pts},
                {"max_identity_residual", rep.max_identity_residual},
                {"identity_checks", rep.identity_checks},
                {"identity_threshold", rep.identity_tolerance}};
    o.summary = "identity=" + fmt(rep.max_identity_residual) + s;
    return o;
}

Outcome green_bounds(Shared& sh)
{
    Outcome o("green_bounds");
    bool pass = true;
    json bounds = json::object();

    const auto r1 = check_green_bounds(1, {8, 32, 128}, 16, 51, sh.threads);
    const auto& diag = r1.get("diag_over_r");
    const double diag_max = *std::max_element(diag.empirical_sup.begin(), diag.empirical_sup.end());
    pass = pass && diag_max <= 2.0;
    bounds["d1_diag_over_r"] = {{"sizes", diag.sizes}, {"sup", diag.empirical_sup},
                                {"threshold", 2.0}};
    for (const auto& rep : {check_green_bounds(2, {8, 16, 32}, 12, 52, sh.threads),
                            check_green_bounds(3, {4, 8, 16}, 8, 53, sh.threads)})
        for (const auto& s : rep.bounds)
        {
            pass = pass && s.stable();
            bounds["d" + std::to_string(rep.d) + "_" + s.name] = {
                {"sizes", s.sizes},       {"sup", s.empirical_sup}, {"growth", s.growth()},
                {"skipped", s.skipped},   {"violations", s.violations},
                {"threshold", s.stability_limit}};
        }

    json ruin = json::array();
    for (auto [n, m] : {std::pair<std::int64_t, std::int64_t>{5, 5}, {1, 9}})
    {
        const auto g = gambler_ruin_check(n, m, 100000, 54 + static_cast<std::uint64_t>(n),
                                          sh.threads);
        pass = pass && g.within(3.0);
        ruin.push_back({{"n", n}, {"m", m}, {"estimate", g.estimate}, {"expected", g.expected},
                        {"se", g.standard_error}, {"within_3se", g.within(3.0)}});
    }

    const auto dom = BoxDomain::cube(2, 6);
    SequentialRng rng(55);
    std::size_t agree = 0;
    json pairs = json::array();
    for (std::uint64_t k = 0; k < 20; ++k)
    {
        const Vertex v{static_cast<std::int64_t>(rng.below(13)) - 6,
                       static_cast<std::int64_t>(rng.below(13)) - 6};
        const Vertex x{static_cast<std::int64_t>(rng.below(13)) - 6,
                       static_cast<std::int64_t>(rng.below(13)) - 6};
        const double exact = green_exact(dom, v)(x);
        const auto mc = green_mc(dom, v, x, 20000, derive_seed(56, k), sh.threads);
        const bool ok = std::abs(mc.estimate - exact) <= 3.0 * mc.standard_error;
        agree += ok ? 1 : 0;
        pairs.push_back({{"v", v}, {"x", x}, {"exact", exact}, {"mc", mc.estimate},
                         {"se", mc.standard_error}, {"pass", ok}});
    }
    pass = pass && agree == 20;
    o.pass = pass;
    o.report = {{"bounds", bounds}, {"gambler_ruin", ruin}, {"mc_vs_exact", pairs}};
    o.summary = "d1_diag_max=" + fmt(diag_max) + " mc_agree=" + std::to_string(agree) + "/20";
    return o;
}

Outcome concentration(Shared& sh)
{
    Outcome o("concentration");
    const auto r1 = check_concentration(sh.white_d1(), *sh.white_config);

    ExperimentConfig c;
    c.d = 2;
    c.n = 1;
    c.sizes = {2, 4, 8};
    c.replicas = 40;
    c.seed = 61;
    c.solver.kind = SolverKind::mincut;
    c.band_maxima = false;
    c.profile = false;
    c.threads = sh.threads;
    const auto r2 = check_concentration(run_replicas(c), c);

    auto block = [](const ConcentrationReport& r) {
        return json{{"sizes", r.sizes},
                    {"variance", r.variance},
                    {"gradient_per_volume", r.gradient_per_volume},
                    {"variance_slope", r.variance_slope},
                    {"gradient_slope", r.gradient_slope},
                    {"exceed2", r.exceed2},
                    {"exceed3", r.exceed3}};
    };
    auto ok = [](const ConcentrationReport& r) {
        return r.variance_slope <= 1.1 && r.gradient_slope <= 0.1;
    };
    o.pass = ok(r1) && ok(r2);
    o.report = {{"d1", block(r1)}, {"d2", block(r2)},
                {"thresholds", {{"variance_slope", 1.1}, {"gradient_slope", 0.1}}}};
    o.summary = "d1 var=" + fmt(r1.variance_slope) + " grad=" + fmt(r1.gradient_slope)
                + " d2 var=" + fmt(r2.variance_slope) + " grad=" + fmt(r2.gradient_slope);
    return o;
}

Outcome shift_pi(Shared&)
{
    Outcome o("shift_pi");
    bool pass = true;
    json per_d = json::array();
    std::string s;
    for (int d = 1; d <= 3; ++d)
    {
        const auto lad = check_shift_pi(d, {16, 32, 64}, 0.5);
        pass = pass && lad.pass;
        json rows = json::array();
        for (const auto& r : lad.reports)
            rows.push_back({{"L", r.L}, {"support_ok", r.support_ok},
                            {"min_on_inner", r.min_on_inner}, {"scale", r.scale},
                            {"laplacian_scaled", r.laplacian_scaled},
                            {"gradient_scaled", r.gradient_scaled}});
        per_d.push_back({{"d", d}, {"laplacian_spread", lad.laplacian_spread},
                         {"gradient_spread", lad.gradient_spread}, {"threshold", lad.limit},
                         {"pass", lad.pass}, {"sizes", rows}});
        s += " d" + std::to_string(d) + "=" + fmt(lad.laplacian_spread) + "/"
             + fmt(lad.gradient_spread);
    }
    o.pass = pass;
    o.report = {{"epsilon", 0.5}, {"dimensions", per_d}};
    o.summary = "spreads" + s;
    return o;
}

struct Criterion
{
    std::string name;
    std::function<Outcome(Shared&)> run;
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> all{
        {"main_identity", main_identity},
        {"boundary_shift", boundary_shift},
        {"solver_oracles", solver_oracles},
        {"linear_closed_form", linear_closed_form},
        {"exponents_d1_white", exponents},
        {"sandwich_d1", sandwich},
        {"limit_shape_d1", limit_shape},
        {"green_bounds", green_bounds},
        {"concentration", concentration},
        {"shift_pi", shift_pi}};
    return all;
}

Outcome guarded(const Criterion& c, Shared& sh)
{
    try
    {
        return c.run(sh);
    }
    catch (const std::exception& e)
    {
        Outcome o(c.name);
        o.report = {{"error", e.what()}};
        o.summary = e.what();
        return o;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance suite"};
    std::string out_dir = "acceptance-reports";
    unsigned threads = default_threads();
    bool skip_rerun = false;
    std::vector<std::string> only;
    app.add_option("--out-dir", out_dir, "directory for the JSON reports");
    app.add_option("--threads", threads, "worker threads of the first pass");
    app.add_flag("--no-rerun", skip_rerun, "skip the determinism re-run");
    app.add_option("--only", only, "run only the named criteria");
    CLI11_PARSE(app, argc, argv);

    std::vector<Criterion> selected;
    for (const auto& c : criteria())
        if (only.empty() || std::find(only.begin(), only.end(), c.name) != only.end())
            selected.push_back(c);

    std::filesystem::create_directories(out_dir);
    Shared first;
    first.threads = threads;
    std::vector<std::string> dumps;
    std::size_t failed = 0;
    for (const auto& f : selected)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = guarded(f, first);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const json doc = {{"criterion", o.name}, {"pass", o.pass}, {"report", o.report}};
        dumps.push_back(doc.dump(2));
        std::ofstream(std::filesystem::path(out_dir) / (o.name + ".json")) << dumps.back() << '\n';
        std::printf("%s %-22s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", o.name.c_str(),
                    o.summary.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }

    if (!skip_rerun)
    {
        // same seeds, different worker count
        Shared second;
        second.threads = threads == 1 ? 2 : 1;
        std::size_t identical = 0;
        json mismatched = json::array();
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t k = 0; k < selected.size(); ++k)
        {
            Outcome o = guarded(selected[k], second);
            const json doc = {{"criterion", o.name}, {"pass", o.pass}, {"report", o.report}};
            if (doc.dump(2) == dumps[k])
                ++identical;
            else
                mismatched.push_back(o.name);
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = identical == selected.size();
        const json doc = {{"criterion", "determinism"},
                          {"pass", pass},
                          {"report", {{"reports", selected.size()},
                                      {"identical", identical},
                                      {"mismatched", mismatched}}}};
        std::ofstream(std::filesystem::path(out_dir) / "determinism.json") << doc.dump(2) << '\n';
        std::printf("%s %-22s identical=%zu/%zu (%.1f s)\n", pass ? "PASS" : "FAIL", "determinism",
                    identical, selected.size(), secs);
        failed += pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
