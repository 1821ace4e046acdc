#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "msre/errors.hpp"
#include "msre/greens.hpp"
#include "msre/identities.hpp"
#include "msre/rng.hpp"
#include "msre/stats.hpp"
#include "msre/surface_io.hpp"

namespace msre::cli {

using nlohmann::json;

namespace {

constexpr double kSecondsPerState = 1e-7;

struct Run
{
    const RunConfig& c;
    unsigned threads;
    OutputDir& out;
    Envelope& env;

    void assert_that(std::string name, json value, json threshold, bool pass)
    {
        env.assertions.push_back({std::move(name), std::move(value), std::move(threshold), pass});
    }

    void table(const std::string& stem, const Csv& csv)
    {
        if (c.csv)
            out.write(stem + ".csv", csv.str());
    }

    void plot(const std::string& stem, const std::string& title,
              const std::vector<std::pair<int, int>>& cols,
              const std::vector<std::string>& labels, bool loglog)
    {
        if (c.csv && c.plot)
            out.write(stem + ".gp", gnuplot_script(stem + ".csv", title, cols, labels, loglog));
    }
};

json fit_json(const ExponentFit& f)
{
    return {{"statistic", f.statistic}, {"slope", f.slope},       {"slope_se", f.slope_se},
            {"intercept", f.intercept}, {"r2", f.r2},             {"sizes", f.sizes},
            {"values", f.values},       {"values_se", f.values_se}, {"window", {f.window_lo, f.window_hi}}};
}

json window_json(const std::pair<double, double>& w) { return json::array({w.first, w.second}); }

bool inside(double x, const std::pair<double, double>& w) { return x >= w.first && x <= w.second; }

std::uint64_t single_seed(const RunConfig& c) { return c.disorder_seed ? *c.disorder_seed : c.seed; }

DisorderParams single_disorder(const RunConfig& c)
{
    DisorderParams p = c.disorder;
    p.seed = single_seed(c);
    return p;
}

void add_vertex(Csv& csv, std::span<const std::int64_t> v)
{
    for (auto x : v)
        csv << x;
}

std::vector<std::string> coord_header(const char* prefix, int k)
{
    std::vector<std::string> h;
    for (int a = 0; a < k; ++a)
        h.push_back(prefix + std::to_string(a));
    return h;
}

//---------------------------------------------------------------------------//

void identity_check(Run& run)
{
    const RunConfig& c = run.c;
    const BoxDomain dom = BoxDomain::cube(c.d, c.L);
    Csv csv({"instance", "residual", "relative", "rescaling_relative"});
    double worst = 0.0, worst_rescale = 0.0;
    std::size_t compared = 0;
    for (std::size_t i = 0; i < c.instances; ++i)
    {
        DisorderParams p = c.disorder;
        p.seed = derive_seed(c.seed, i);
        DisorderField eta(p);
        SequentialRng rng(c.seed, Stream::sampling, i);
        Surface phi(dom, c.n), s(dom, c.n);
        for (double& x : phi.interior())
            x = rng.uniform(-2.0, 2.0);
        for (double& x : phi.shell())
            x = rng.uniform(-2.0, 2.0);
        for (double& x : s.interior())
            x = 0.5 * rng.gaussian();
        for (double& x : s.shell())
            x = 0.5 * rng.gaussian();
        const auto r = verify_main_identity(eta, c.lambda, phi, s);
        if (!r.comparable)
            continue;
        ++compared;
        const double rel = r.residual / (1.0 + std::abs(r.energy));
        const double resc = rescaling_residual(eta, c.lambda, phi) / (1.0 + std::abs(r.energy));
        worst = std::max(worst, rel);
        worst_rescale = std::max(worst_rescale, resc);
        csv << static_cast<std::int64_t>(i) << r.residual << rel << resc;
        csv.end_row();
    }
    run.env.results["instances"] = c.instances;
    run.env.results["compared"] = compared;
    run.assert_that("main_identity_relative_residual", worst, c.thresholds.identity,
                    compared > 0 && worst <= c.thresholds.identity);
    run.assert_that("lambda_rescaling_relative_residual", worst_rescale, c.thresholds.identity,
                    compared > 0 && worst_rescale <= c.thresholds.identity);

    // the boundary-condition identity where an exact solver exists
    const bool linear = c.disorder.kind == DisorderKind::linear;
    const bool dp = c.d == 1 && c.n == 1 && !linear;
    if (linear || dp)
    {
        const std::size_t count = std::min<std::size_t>(c.instances, 100);
        double worst_shift = 0.0;
        for (std::size_t i = 0; i < count; ++i)
        {
            DisorderParams p = c.disorder;
            p.seed = derive_seed(c.seed, i, 1);
            DisorderField eta(p);
            SequentialRng rng(c.seed, Stream::sampling, c.instances + i);
            Surface tau(dom, c.n);
            if (linear)
            {
                for (double& x : tau.shell())
                    x = rng.gaussian();
                const auto b = verify_boundary_shift(EnergyModel(eta, c.lambda, tau),
                                                     SolverKind::closed_form);
                worst_shift = std::max({worst_shift, b.surface_residual, b.energy_residual});
            }
            else
            {
                // the harmonic extension is linear; keep it on the grid
                EnergyModel probe(dom, eta, c.lambda);
                const double step = grid_for(probe, c.solver).step;
                const double k = static_cast<double>(static_cast<std::int64_t>(rng.below(7)) - 3);
                const Point end{k * step * static_cast<double>(2 * c.L + 2)};
                tau.set(Vertex{c.L + 1}, end);
                const auto b = verify_boundary_shift(EnergyModel(eta, c.lambda, tau),
                                                     SolverKind::dp);
                worst_shift = std::max({worst_shift, b.surface_residual, b.energy_residual});
            }
        }
        run.env.results["boundary_shift_instances"] = count;
        run.assert_that("boundary_shift_residual", worst_shift, c.thresholds.identity,
                        worst_shift <= c.thresholds.identity);
    }
    run.table("identity", csv);
}

void solve_command(Run& run)
{
    const RunConfig& c = run.c;
    const BoxDomain dom = BoxDomain::cube(c.d, c.L);
    EnergyModel model(dom, DisorderField(single_disorder(c)), c.lambda);
    SolverOptions opt = c.solver;
    opt.local.seed = c.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const GroundState gs = solve(model, opt);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    json grid = nullptr;
    if (gs.exactness != Exactness::exact)
    {
        const HeightGrid g = grid_for(model, opt);
        grid = {{"W", g.hi[0]}, {"step", g.step}, {"M", g.points_per_site()}};
    }
    run.env.results = {{"solver", gs.solver},
                       {"exactness", to_string(gs.exactness)},
                       {"energy", gs.energy},
                       {"grid", grid},
                       {"wall_time_ms", ms},
                       {"seed", single_seed(c)},
                       {"window_hit", gs.window_hit},
                       {"clipped", gs.clipped},
                       {"iterations", gs.iterations}};
    run.assert_that("finite_energy", gs.energy, nullptr, std::isfinite(gs.energy));

    auto header = coord_header("v", c.d);
    header.push_back("r");
    for (auto& h : coord_header("phi", c.n))
        header.push_back(h);
    header.push_back("site_energy");
    Csv csv(header);
    const auto site = site_energies(model, gs.surface);
    Vertex v(c.d);
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        add_vertex(csv, v);
        csv << dom.boundary_distance(i);
        for (double x : gs.surface.at(i))
            csv << x;
        csv << site[i];
        csv.end_row();
    }
    run.table("surface", csv);
    if (c.surface)
    {
        std::ostringstream bin;
        write_surface(bin, gs.surface);
        run.out.write("surface.bin", bin.str());
    }
}

void greens_command(Run& run)
{
    const RunConfig& c = run.c;
    const BoxDomain dom = BoxDomain::cube(c.d, c.L);
    const Vertex src = c.source ? *c.source : dom.center();
    switch (c.greens_mode)
    {
    case GreensMode::exact: {
        if (!dom.contains(src))
            throw PreconditionError("the source lies outside the box");
        const GreenTable g = green_exact(dom, src);
        auto header = coord_header("x", c.d);
        header.push_back("G");
        Csv csv(header);
        Vertex x(c.d);
        for (std::size_t i = 0; i < dom.size(); ++i)
        {
            dom.vertex(i, x);
            add_vertex(csv, x);
            csv << g.at(i);
            csv.end_row();
        }
        run.table("greens", csv);
        run.env.results = {{"source", src}, {"G_vv", g(src)}, {"iterations", g.iterations()}};
        run.assert_that("cg_residual", g.residual(), 1e-10, g.residual() <= 1e-10);
        break;
    }
    case GreensMode::mc: {
        const Vertex x = c.target ? *c.target : src;
        const McEstimate mc = green_mc(dom, src, x, c.walkers, c.seed, run.threads);
        const double exact = green_exact(dom, src)(x);
        const double dev = std::abs(mc.estimate - exact);
        auto header = coord_header("x", c.d);
        for (const char* h : {"exact", "mc", "mc_se"})
            header.push_back(h);
        Csv csv(header);
        add_vertex(csv, x);
        csv << exact << mc.estimate << mc.standard_error;
        csv.end_row();
        run.table("greens", csv);
        run.env.results = {{"source", src}, {"target", x}, {"exact", exact},
                           {"mc", mc.estimate}, {"mc_se", mc.standard_error},
                           {"walkers", mc.samples}};
        run.assert_that("mc_within_3_sigma", dev, 3.0 * mc.standard_error,
                        dev <= 3.0 * mc.standard_error);
        break;
    }
    case GreensMode::bounds: {
        const GreenBoundReport rep = check_green_bounds(c.d, c.sizes, c.samples, c.seed,
                                                        run.threads);
        Csv csv({"bound", "L", "empirical_sup", "evaluated", "skipped"});
        json bounds = json::array();
        for (const auto& b : rep.bounds)
        {
            bounds.push_back({{"bound_name", b.name},
                              {"sizes", b.sizes},
                              {"empirical_sup", b.empirical_sup}});
            for (std::size_t k = 0; k < b.sizes.size(); ++k)
            {
                csv << b.name << b.sizes[k] << b.empirical_sup[k]
                    << static_cast<std::uint64_t>(b.evaluated[k])
                    << static_cast<std::uint64_t>(b.skipped[k]);
                csv.end_row();
            }
            const double growth = b.growth();
            run.assert_that(b.name + "_growth", growth, c.thresholds.stability,
                            growth <= c.thresholds.stability && b.violations == 0);
            if (b.name == "diag_over_r")
            {
                double sup = 0.0;
                for (double x : b.empirical_sup)
                    sup = std::max(sup, x);
                run.assert_that("diag_over_r_constant", sup, 2.0, sup <= 2.0);
            }
        }
        run.out.write("bounds.json", bounds.dump(2) + "\n");
        run.table("bounds", csv);
        run.env.results["bounds"] = bounds;
        break;
    }
    case GreensMode::walks: {
        Csv csv({"n", "m", "trials", "estimate", "se", "expected"});
        for (auto [n, m] : {std::pair<std::int64_t, std::int64_t>{5, 5}, {1, 9}, {3, 7}})
        {
            const auto g = gambler_ruin_check(n, m, c.trials, derive_seed(c.seed, n, m),
                                              run.threads);
            csv << n << m << static_cast<std::uint64_t>(g.trials) << g.estimate
                << g.standard_error << g.expected;
            csv.end_row();
            run.assert_that("gambler_ruin_" + std::to_string(n) + "_" + std::to_string(m),
                            g.deviation, 3.0 * g.standard_error, g.within(3.0));
        }
        run.table("ruin", csv);
        const auto tail = exit_time_tail_check(8, {16, 64, 256, 1024, 4096}, c.trials / 10 + 1,
                                               c.seed, run.threads);
        Csv t({"t", "probability", "se", "scaled"});
        for (std::size_t k = 0; k < tail.times.size(); ++k)
        {
            t << tail.times[k] << tail.probability[k] << tail.standard_error[k] << tail.scaled[k];
            t.end_row();
        }
        run.table("exit_tail", t);
        run.plot("exit_tail", "P(tau >= t)", {{1, 2}}, {"P(tau >= t)"}, true);
        run.env.results["exit_tail_constant"] = tail.constant;
        run.assert_that("exit_tail_monotone", tail.monotone, true, tail.monotone);
        break;
    }
    }
}

//---------------------------------------------------------------------------//

std::optional<std::pair<double, double>> xi_window(const RunConfig& c)
{
    if (c.thresholds.xi)
        return c.thresholds.xi;
    if (c.d == 1)
        return std::pair(0.55, 0.80);
    return std::nullopt;
}

std::optional<std::pair<double, double>> chi_window(const RunConfig& c)
{
    if (c.thresholds.chi)
        return c.thresholds.chi;
    if (c.d == 1)
        return std::pair(0.20, 0.45);
    return std::nullopt;
}

Csv size_table(const std::vector<ReplicaResult>& results)
{
    Csv csv({"L", "replicas", "mean_projection", "se_projection", "mean_norm", "se_norm",
             "mean_ge", "std_ge", "std_ge_se"});
    for (const auto& g : group_by_size(results))
    {
        std::vector<double> p, nm, ge;
        for (const auto* r : g)
        {
            p.push_back(r->center_projection);
            nm.push_back(r->center_norm);
            ge.push_back(r->ge);
        }
        csv << g.front()->L << static_cast<std::uint64_t>(g.size()) << mean(p)
            << standard_error(p) << mean(nm) << standard_error(nm) << mean(ge) << sample_std(ge)
            << jackknife_std_error(ge);
        csv.end_row();
    }
    return csv;
}

std::vector<ReplicaResult> replicas(Run& run, const ExperimentConfig& ec)
{
    if (ec.sizes.size() < 2 && run.c.kind != Command::profile)
        throw PreconditionError("an exponent fit needs at least two sizes; got "
                                + std::to_string(ec.sizes.size()));
    spdlog::info("solving {} sizes x {} replicas", ec.sizes.size(), ec.replicas);
    auto results = run_replicas(ec);
    std::size_t hits = 0;
    for (const auto& r : results)
        hits += r.window_hit ? 1 : 0;
    run.env.results["window_hits"] = hits;
    if (hits > 0)
        run.env.advisories.push_back(std::to_string(hits)
                                     + " solves touched the widened height window");
    return results;
}

void exponents_command(Run& run)
{
    const RunConfig& c = run.c;
    const ExperimentConfig ec = experiment_config(c, run.threads);
    const auto results = replicas(run, ec);
    const ExponentFit xi = estimate_transversal(results, ec, c.statistic);
    const ExponentFit chi = estimate_energy_fluct(results, ec);
    run.env.results["xi"] = fit_json(xi);
    run.env.results["chi"] = fit_json(chi);
    if (auto w = xi_window(c))
        run.assert_that("xi_in_window", xi.slope, window_json(*w), inside(xi.slope, *w));
    if (auto w = chi_window(c))
        run.assert_that("chi_in_window", chi.slope, window_json(*w), inside(chi.slope, *w));

    if (!c.n_sweep.empty())
    {
        // reported only; no rate is known to assert against
        json sweep = json::array();
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (int m : c.n_sweep)
        {
            ExperimentConfig e = ec;
            e.n = m;
            e.disorder.n = m;
            e.direction.clear();
            const ExponentFit f = estimate_transversal(replicas(run, e), e, HeightStatistic::norm);
            monotone = monotone && f.slope <= prev;
            prev = f.slope;
            sweep.push_back({{"n", m}, {"xi", f.slope}, {"xi_se", f.slope_se}});
        }
        run.env.results["n_sweep"] = {{"fits", sweep}, {"non_increasing", monotone}};
    }
    run.table("exponents", size_table(results));
    run.plot("exponents", "per-size statistics", {{1, 3}, {1, 8}}, {"E|phi_0.e|", "std(GE)"}, true);
}

void scaling_command(Run& run)
{
    const RunConfig& c = run.c;
    const ExperimentConfig ec = experiment_config(c, run.threads);
    const auto results = replicas(run, ec);
    const ExponentFit xi = estimate_transversal(results, ec, c.statistic);
    const ExponentFit chi = estimate_energy_fluct(results, ec);
    const ScalingReport s = check_scaling_relation(xi, chi, c.d);
    run.env.results["xi"] = fit_json(xi);
    run.env.results["chi"] = fit_json(chi);
    run.env.results["scaling"] = {{"gap", s.gap}, {"combined_se", s.combined_se},
                                  {"within_3_se_or_0.1", s.pass}};
    run.assert_that("scaling_gap", std::abs(s.gap), c.thresholds.scaling_gap,
                    std::abs(s.gap) <= c.thresholds.scaling_gap);

    if (c.d == 1)
    {
        const SandwichReport sw = check_d1_sandwich(results, ec);
        run.env.results["sandwich"] = {{"sizes", sw.sizes}, {"std_ge", sw.std_ge},
                                       {"lower", sw.lower}, {"upper", sw.upper},
                                       {"a", sw.a},         {"b", sw.b},
                                       {"degenerate", sw.degenerate}};
        run.assert_that("sandwich_a_spread", sw.a_spread, 2.0, sw.a_spread <= 2.0);
        run.assert_that("sandwich_b_spread", sw.b_spread, 2.0, sw.b_spread <= 2.0);
        Csv csv({"L", "std_ge", "lower", "upper", "a", "b"});
        for (std::size_t k = 0; k < sw.sizes.size(); ++k)
        {
            csv << sw.sizes[k] << sw.std_ge[k] << sw.lower[k] << sw.upper[k] << sw.a[k]
                << sw.b[k];
            csv.end_row();
        }
        run.table("sandwich", csv);
        run.plot("sandwich", "std(GE) and proxies", {{1, 2}, {1, 3}, {1, 4}},
                 {"std(GE)", "lower", "upper"}, true);
    }
    run.table("scaling", size_table(results));
    run.plot("scaling", "per-size statistics", {{1, 3}, {1, 8}}, {"E|phi_0.e|", "std(GE)"}, true);
}

void limit_shape_command(Run& run)
{
    const RunConfig& c = run.c;
    const ExperimentConfig ec = experiment_config(c, run.threads);
    const LimitShapeReport rep = check_limit_shape_d1(ec, c.x_ladder);
    Csv csv({"x", "gap", "se", "tolerance"});
    json pts = json::array();
    for (const auto& p : rep.points)
    {
        csv << p.x << p.gap << p.se << p.tolerance;
        csv.end_row();
        pts.push_back({{"x", p.x}, {"gap", p.gap}, {"se", p.se}});
        run.assert_that("limit_shape_gap_x=" + format_double(p.x), std::abs(p.gap), p.tolerance,
                        p.pass);
    }
    run.env.results = {{"sizes", rep.sizes}, {"points", pts},
                       {"identity_checks", rep.identity_checks}};
    run.assert_that("boundary_identity_residual", rep.max_identity_residual,
                    rep.identity_tolerance, rep.max_identity_residual <= rep.identity_tolerance);
    run.table("limit_shape", csv);
    run.plot("limit_shape", "mu(x) - mu(0) - x^2/2", {{1, 2}}, {"gap"}, false);
}

void profile_command(Run& run)
{
    const RunConfig& c = run.c;
    const ExperimentConfig ec = experiment_config(c, run.threads);
    const auto results = replicas(run, ec);
    const ProfileReport p = localization_profile(results, ec);
    Csv csv({"L", "r", "mean_norm"});
    for (std::size_t k = 0; k < p.sizes.size(); ++k)
        for (std::size_t r = 0; r < p.mean_norm[k].size(); ++r)
        {
            csv << p.sizes[k] << static_cast<std::int64_t>(r + 1) << p.mean_norm[k][r];
            csv.end_row();
        }
    run.table("profile", csv);
    run.plot("profile", "E||phi_v|| against r_v", {{2, 3}}, {"mean norm"}, true);
    run.env.results["profile"] = {{"exponent", p.exponent}, {"ratio_sup", p.ratio_sup},
                                  {"ratio_inf", p.ratio_inf}, {"slope", p.slope},
                                  {"empty_bins", p.empty_bins}};
    const double ratio = p.ratio_inf > 0.0 ? p.ratio_sup / p.ratio_inf
                                           : std::numeric_limits<double>::infinity();
    run.assert_that("profile_ratio_stability", ratio, p.limit, p.pass);

    if (!c.h_ladder.empty())
    {
        const DelocalizationReport dl = delocalization_fraction(results, ec, c.h_ladder);
        Csv t({"h", "fraction"});
        for (std::size_t k = 0; k < dl.h.size(); ++k)
        {
            t << dl.h[k] << dl.fraction[k];
            t.end_row();
        }
        run.table("delocalization", t);
        run.env.results["delocalization"] = {{"L", dl.L}, {"h", dl.h}, {"fraction", dl.fraction},
                                             {"h_half_median", dl.h_half_median}};
        if (c.d <= 3)
            run.assert_that("delocalized_fraction", dl.fraction_at_half_median, dl.floor, dl.pass);
    }
}

void concentration_command(Run& run)
{
    const RunConfig& c = run.c;
    const ExperimentConfig ec = experiment_config(c, run.threads);
    const auto results = replicas(run, ec);
    const ConcentrationReport r = check_concentration(results, ec);
    Csv csv({"L", "volume", "var_ge", "gradient_per_volume"});
    for (std::size_t k = 0; k < r.sizes.size(); ++k)
    {
        csv << r.sizes[k] << r.volume[k] << r.variance[k] << r.gradient_per_volume[k];
        csv.end_row();
    }
    run.table("concentration", csv);
    run.plot("concentration", "Var(GE) against |box|", {{2, 3}}, {"Var(GE)"}, true);
    run.env.results = {{"variance_slope", r.variance_slope},
                       {"gradient_slope", r.gradient_slope},
                       {"exceed2", r.exceed2},
                       {"exceed3", r.exceed3}};
    run.assert_that("variance_slope", r.variance_slope, 1.1, r.variance_slope <= 1.1);
    run.assert_that("gradient_slope", r.gradient_slope, 0.1, r.gradient_slope <= 0.1);
    run.assert_that("tail_2_sigma", r.exceed2, 0.10, r.exceed2 <= 0.10);
    run.assert_that("tail_3_sigma", r.exceed3, 0.02, r.exceed3 <= 0.02);
}

void shiftpi_command(Run& run)
{
    const RunConfig& c = run.c;
    const ShiftPiLadder lad = check_shift_pi(c.d, c.sizes, c.epsilon, c.pi_shape);
    Csv csv({"L", "scale", "min_on_inner", "center", "laplacian_scaled", "gradient_scaled"});
    bool support = true;
    double min_inner = std::numeric_limits<double>::infinity();
    for (const auto& r : lad.reports)
    {
        csv << r.L << r.scale << r.min_on_inner << r.center << r.laplacian_scaled
            << r.gradient_scaled;
        csv.end_row();
        support = support && r.support_ok;
        min_inner = std::min(min_inner, r.min_on_inner);
    }
    run.table("shiftpi", csv);
    run.plot("shiftpi", "scaled Laplacian and gradient of pi", {{1, 5}, {1, 6}},
             {"max|Lap pi| L^2", "||grad pi||^2 / L^(d-2)"}, true);
    run.assert_that("support", support, true, support);
    run.assert_that("min_on_inner", min_inner, 1.0, min_inner >= 1.0);
    run.assert_that("laplacian_spread", lad.laplacian_spread, c.thresholds.stability,
                    lad.laplacian_spread <= c.thresholds.stability);
    run.assert_that("gradient_spread", lad.gradient_spread, c.thresholds.stability,
                    lad.gradient_spread <= c.thresholds.stability);
}

void disorder_dump(Run& run)
{
    const RunConfig& c = run.c;
    const BoxDomain dom = BoxDomain::cube(c.d, c.L);
    const DisorderField eta(single_disorder(c));
    const HeightGrid g = HeightGrid::symmetric(c.n, c.dump_window, c.dump_step);
    auto header = coord_header("v", c.d);
    for (auto& h : coord_header("t", c.n))
        header.push_back(h);
    header.push_back("value");
    Csv csv(header);
    Vertex v(c.d);
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        const auto site = eta.at(v);
        const auto pts = g.site_points(i);
        std::vector<double> val(pts.size() / c.n);
        site.eval_many(pts, val);
        for (std::size_t k = 0; k < val.size(); ++k)
        {
            add_vertex(csv, v);
            for (int a = 0; a < c.n; ++a)
                csv << pts[k * c.n + a];
            csv << val[k];
            csv.end_row();
        }
    }
    // the dump is the product; it is written even with csv disabled
    run.out.write("disorder.csv", csv.str());
    run.env.results = {{"seed", single_seed(c)}, {"points_per_site", g.points_per_site()}};
}

}  // namespace

nlohmann::json to_json(const Envelope& e)
{
    json a = json::array();
    for (const auto& x : e.assertions)
        a.push_back(to_json(x));
    return {{"artifact", "msre"},
            {"version", "0.1.0"},
            {"command", e.command},
            {"config", e.config},
            {"wall_clock_ms", e.wall_clock_ms},
            {"assertions", a},
            {"results", e.results},
            {"advisories", e.advisories},
            {"error", e.error.empty() ? json(nullptr) : json(e.error)},
            {"exit_code", e.exit_code},
            {"manifest", e.manifest}};
}

double estimated_run_cost(const RunConfig& c)
{
    const double box = static_cast<double>(BoxDomain::cube(c.d, c.L).size());
    switch (c.kind)
    {
    case Command::identity_check:
        return box * static_cast<double>(c.instances) * 4.0 * kSecondsPerState;
    case Command::solve: {
        if (c.disorder.kind == DisorderKind::linear && c.solver.kind == SolverKind::closed_form)
            return box * kSecondsPerState;
        EnergyModel probe(BoxDomain::cube(c.d, c.L), DisorderField(c.disorder), c.lambda);
        return box * static_cast<double>(grid_for(probe, c.solver).points_per_site())
               * kSecondsPerState;
    }
    case Command::greens: {
        double s = 0.0;
        if (c.greens_mode == GreensMode::bounds)
            for (auto L : c.sizes)
            {
                const double b = static_cast<double>(BoxDomain::cube(c.d, L).size());
                s += b * static_cast<double>(2 * L + 2) * static_cast<double>(c.samples + 1);
            }
        else if (c.greens_mode == GreensMode::walks)
            s = static_cast<double>(c.trials) * 100.0;
        else
            s = box * static_cast<double>(2 * c.L + 2)
                + static_cast<double>(c.walkers) * static_cast<double>(c.L * c.L + 1);
        return s * kSecondsPerState;
    }
    case Command::exponents:
    case Command::scaling:
    case Command::profile:
    case Command::concentration:
    case Command::limit_shape: {
        ExperimentConfig ec = experiment_config(c, 1);
        ec.budget_node_seconds.reset();
        double cost = estimated_cost(ec);
        if (c.kind == Command::limit_shape)
            cost *= static_cast<double>(2 * c.x_ladder.size() + 1);
        if (c.kind == Command::exponents)
            for (int m : c.n_sweep)
            {
                ExperimentConfig e = ec;
                e.n = m;
                e.disorder.n = m;
                e.direction.clear();
                cost += estimated_cost(e);
            }
        return cost;
    }
    case Command::shiftpi: {
        double s = 0.0;
        for (auto L : c.sizes)
            s += static_cast<double>(BoxDomain::cube(c.d, L).size());
        return s * kSecondsPerState;
    }
    case Command::disorder_dump: {
        const auto g = HeightGrid::symmetric(c.n, c.dump_window, c.dump_step);
        return box * static_cast<double>(g.points_per_site()) * kSecondsPerState;
    }
    }
    return kSecondsPerState;
}

Envelope dispatch(const RunConfig& c, unsigned threads)
{
    Envelope env;
    env.config = to_json(c);
    env.command = to_string(c.kind);
    OutputDir out(c.out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    if (c.d == 4)
        env.advisories.push_back("d = 4: the predicted behaviour is logarithmic and cannot be "
                                 "told apart at these sizes; no exponent window applies");
    try
    {
        const double cost = estimated_run_cost(c);
        env.results["estimated_node_seconds"] = cost;
        if (c.budget_node_seconds && cost > *c.budget_node_seconds)
            throw BudgetError("estimated cost " + format_double(cost)
                              + " node-seconds exceeds the budget of "
                              + format_double(*c.budget_node_seconds));
        Run run{c, threads, out, env};
        switch (c.kind)
        {
        case Command::identity_check: identity_check(run); break;
        case Command::solve: solve_command(run); break;
        case Command::greens: greens_command(run); break;
        case Command::exponents: exponents_command(run); break;
        case Command::scaling: scaling_command(run); break;
        case Command::limit_shape: limit_shape_command(run); break;
        case Command::profile: profile_command(run); break;
        case Command::concentration: concentration_command(run); break;
        case Command::shiftpi: shiftpi_command(run); break;
        case Command::disorder_dump: disorder_dump(run); break;
        }
        env.exit_code = exit_pass;
        for (const auto& a : env.assertions)
            if (!a.pass)
                env.exit_code = exit_assertion;
    }
    catch (const ResourceError& e)
    {
        env.error = e.what();
        env.exit_code = exit_budget;
    }
    catch (const InfeasibleError& e)
    {
        env.error = e.what();
        env.exit_code = exit_infeasible;
    }
    catch (const PreconditionError& e)
    {
        env.error = e.what();
        env.exit_code = exit_infeasible;
    }
    catch (const ContractError& e)
    {
        env.error = e.what();
        env.exit_code = exit_infeasible;
    }
    catch (const Error& e)
    {
        env.error = e.what();
        env.exit_code = exit_usage;
    }
    env.wall_clock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    env.manifest = out.manifest();
    out.write("report.json", to_json(env).dump(2) + "\n");
    return env;
}

}  // namespace msre::cli
