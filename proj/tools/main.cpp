// jumpdyn: config-driven front end for the jump-process toolkit.
//
// One binary, six subcommands:
//   check-kernels  stability analysis + model constants table
//   simulate       kinetic Monte Carlo replicas, density and g(r) estimates
//   solve          truncated hierarchy integration (method of lines, RK4)
//   picard         Duhamel/Picard iteration with majorant diagnostics
//   bounds         closed-form horizon / operator-norm / envelope bounds
//   compare        MC pair correlation vs hierarchy k^(2) with SE bands
//
// Everything physical lives in the JSON config; flags cover only paths,
// thread count and verbosity.  Every run writes a manifest (config hash,
// seed, version, horizons) so outputs are reproducible byte-for-byte.
//
// Exit codes: 0 success, 1 usage/config error, 2 model-level negative
// verdict (unbounded kernels, failed comparison), 3 numerical failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "jumpdyn/bounds.hpp"
#include "jumpdyn/errors.hpp"
#include "jumpdyn/hierarchy.hpp"
#include "jumpdyn/report_io.hpp"
#include "jumpdyn/run_config.hpp"
#include "jumpdyn/simulator.hpp"

namespace {

using namespace jumpdyn;

struct CliArgs {
    std::string config_path;
    std::string out_dir = ".";
    int threads = -1;          // -1: take the config value
    bool quiet = false;
};

std::string outpath(const CliArgs& args, const std::string& name) {
    return (std::filesystem::path(args.out_dir) / name).string();
}

std::string hash_hex(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(bytes));
    return std::string(buf);
}

// Manifest entries shared by every subcommand.
void base_manifest(Manifest& m, const std::string& command,
                   const CliArgs& args, const RunConfig& cfg) {
    m.set("command", command);
    m.set("version", std::string(JUMPDYN_VERSION));
    m.set("config", args.config_path);
    m.set("config_hash", hash_hex(cfg.raw));
}

ClosureRule closure_of(const RunConfig& cfg) { return cfg.hierarchy.closure; }

std::string closure_name(ClosureRule c) {
    return c == ClosureRule::ZeroTail ? "zero_tail" : "mean_field";
}

// Initial correlation vector shared by solve / picard / compare.
ReducedVector initial_state(const RunConfig& cfg) {
    if (cfg.hierarchy.tabulated_initial) {
        ReducedVector k = ReducedVector::zero(cfg.domain);
        k.k0 = 1.0;
        k.rho = cfg.hierarchy.rho0;
        k.q = cfg.hierarchy.q0;
        return k;
    }
    return ReducedVector::poisson(cfg.domain, cfg.hierarchy.kappa);
}

// The allowance entering horizons comes from the stability analysis unless
// the bounds section pins it explicitly.
double resolve_omega(const RunConfig& cfg, const KernelModel& model,
                     Manifest& m) {
    if (cfg.bounds.omega) {
        m.set("omega_source", std::string("config"));
        return *cfg.bounds.omega;
    }
    StabilityReport rep = stability_check(model, cfg.stability);
    if (rep.unbounded)
        throw NumericalError("no finite stability allowance: the model is "
                             "unbounded (run check-kernels for evidence)");
    m.set("omega_source", rep.fourier_ok ? std::string("fourier_certified")
                                         : std::string("empirical"));
    return rep.effective_omega();
}

//----------------------------------------------------------------------------
// check-kernels
//----------------------------------------------------------------------------
int cmd_check_kernels(const CliArgs& args, const RunConfig& cfg) {
    KernelModel model = build_model(cfg);
    StabilityReport rep = stability_check(model, cfg.stability);

    CsvWriter constants(outpath(args, "constants.csv"), {"quantity", "value"});
    auto put = [&](const std::string& name, double v) {
        constants.raw_row({name, format_full(v)});
    };
    put("dimension", cfg.domain.dim());
    put("side", cfg.domain.side());
    put("resolution", cfg.domain.res());
    put("m_a", model.m_a());
    put("mean_b", model.mean_b());
    put("sup_b", model.sup_b());
    put("mass_kappa1", model.mass_kappa1());
    put("mass_kappa2", model.mass_kappa2());
    put("mass_phi_minus", model.mass_phi_minus());
    put("phi_plus_at_0", model.phi_plus_table().empty()
                             ? 0.0 : model.phi_plus_table()[0]);
    put("phi_minus_at_0", model.phi_minus_table().empty()
                              ? 0.0 : model.phi_minus_table()[0]);

    Manifest report;
    describe_stability(report, "stability", rep, cfg.domain.dim());
    report.write(outpath(args, "stability.txt"));

    Manifest m;
    base_manifest(m, "check-kernels", args, cfg);
    m.set("verdict", rep.unbounded ? std::string("unbounded")
                                   : std::string("stable"));
    m.set("omega", rep.omega);
    m.set("omega_certified", rep.omega_certified);
    m.set("fourier_ok", rep.fourier_ok);
    m.write(outpath(args, "manifest.txt"));

    if (!args.quiet) {
        if (rep.unbounded)
            std::cout << "check-kernels: verdict = unbounded (growth slope "
                      << format_full(rep.growth_slope) << ")\n";
        else
            std::cout << "check-kernels: verdict = stable, omega = "
                      << format_full(rep.omega) << ", certified allowance = "
                      << format_full(rep.omega_certified) << "\n";
    }
    return rep.unbounded ? 2 : 0;
}

//----------------------------------------------------------------------------
// simulate
//----------------------------------------------------------------------------
int cmd_simulate(const CliArgs& args, const RunConfig& cfg) {
    KernelModel model = build_model(cfg);
    RunOptions opts = cfg.simulate;
    if (args.threads >= 0) opts.threads = args.threads;

    RunResult res = run_replicas(model, opts);

    CsvWriter dens(outpath(args, "density.csv"),
                   {"time", "density", "density_se", "mean_pairs"});
    CsvWriter gr(outpath(args, "gr.csv"),
                 {"time", "bin_left", "bin_center", "g", "g_se"});
    for (const CorrelationEstimate& est : res.estimates) {
        dens.row({est.time, est.density, est.density_se, est.mean_pairs});
        for (std::size_t b = 0; b < est.g.size(); ++b)
            gr.row({est.time, est.bin_left[b], est.bin_center[b], est.g[b],
                    est.g_se[b]});
    }

    Manifest m;
    base_manifest(m, "simulate", args, cfg);
    m.set("seed", static_cast<long long>(opts.seed));
    m.set("replicas", static_cast<long long>(opts.replicas));
    m.set("t_end", opts.t_end);
    m.set("bins", static_cast<long long>(opts.bins));
    m.set("total_events", static_cast<long long>(res.total_events));
    m.set("audit", opts.sim.audit);
    m.set("audit_failures", static_cast<long long>(res.audit_failures));
    m.set("partial", res.budget_exhausted);
    if (res.budget_exhausted)
        m.set("min_reached_time", res.min_reached_time);
    m.write(outpath(args, "manifest.txt"));

    if (!args.quiet) {
        for (const CorrelationEstimate& est : res.estimates)
            std::cout << "simulate: t = " << format_full(est.time)
                      << "  density = " << format_full(est.density)
                      << " +- " << format_full(est.density_se) << "\n";
        if (res.budget_exhausted)
            std::cout << "simulate: warning: event budget exhausted before "
                         "t_end in at least one replica; results are partial "
                         "(flagged in the manifest)\n";
    }
    if (opts.sim.audit && res.audit_failures > 0) {
        std::cerr << "simulate: rate-cache audit failed "
                  << res.audit_failures << " times\n";
        return 3;
    }
    return 0;
}

//----------------------------------------------------------------------------
// solve
//----------------------------------------------------------------------------
int cmd_solve(const CliArgs& args, const RunConfig& cfg) {
    KernelModel model = build_model(cfg);
    ReducedVector k0 = initial_state(cfg);

    Manifest m;
    base_manifest(m, "solve", args, cfg);
    double omega = resolve_omega(cfg, model, m);

    IntegrateOptions io;
    io.t_end = cfg.hierarchy.t_end;
    io.dt = cfg.hierarchy.dt;
    io.closure = closure_of(cfg);
    io.theta_track = cfg.hierarchy.theta_track;
    io.output_stride = cfg.hierarchy.output_stride;
    io.omega_for_horizon = omega;
    if (io.theta_track.empty())
        io.theta_track = {extract_theta0(k0) + 1.0};

    Trajectory<ReducedVector> traj = integrate(model, k0, io);

    CsvWriter norms(outpath(args, "norms.csv"),
                    {"time", "theta", "norm", "bound"});
    for (const NormSample& s : traj.norms)
        norms.row({s.time, s.theta, s.norm, s.bound});

    const ReducedVector& kf = traj.states.back();
    const TorusGrid& g = cfg.domain;
    if (g.dim() == 1) {
        CsvWriter corr(outpath(args, "correlation.csv"), {"sep", "k2"});
        for (std::size_t i = 0; i < kf.q.size(); ++i)
            corr.row({g.coord(i)[0], kf.q[i]});
    } else {
        CsvWriter corr(outpath(args, "correlation.csv"),
                       {"sep_x", "sep_y", "k2"});
        for (std::size_t i = 0; i < kf.q.size(); ++i)
            corr.row({g.coord(i)[0], g.coord(i)[1], kf.q[i]});
    }

    m.set("closure", closure_name(io.closure));
    m.set("dt", io.dt);
    m.set("t_end", io.t_end);
    m.set("omega", omega);
    m.set("theta0", traj.theta0);
    m.set("horizon_used", traj.horizon_used);
    m.set("horizon_warning", traj.horizon_warning);
    m.set("rho_final", kf.rho);
    m.set("k0_final", kf.k0);
    m.write(outpath(args, "manifest.txt"));

    if (!args.quiet) {
        std::cout << "solve: integrated to t = " << format_full(io.t_end)
                  << ", rho = " << format_full(kf.rho) << "\n";
        if (traj.horizon_warning)
            std::cout << "solve: warning: t_end exceeds the guaranteed "
                         "horizon T = " << format_full(traj.horizon_used)
                      << "; norm bounds past it are not certified\n";
    }
    return 0;
}

//----------------------------------------------------------------------------
// picard
//----------------------------------------------------------------------------
int cmd_picard(const CliArgs& args, const RunConfig& cfg) {
    KernelModel model = build_model(cfg);
    ReducedVector k0 = initial_state(cfg);

    Manifest m;
    base_manifest(m, "picard", args, cfg);
    double omega = resolve_omega(cfg, model, m);

    double theta0 = extract_theta0(k0);
    PicardOptions po;
    po.theta = cfg.picard.theta.value_or(theta0 + 1.0);
    po.omega = omega;
    po.n_terms = cfg.picard.terms;
    po.time_steps = cfg.picard.time_steps;
    po.closure = cfg.picard.closure;
    po.ladder_l = cfg.picard.ladder_l;
    po.delta_fraction = cfg.picard.delta_fraction;
    HorizonParams hp(theta0, po.theta, omega, model.mean_b(), model.sup_b());
    po.t = cfg.picard.t.value_or(0.5 * horizon(hp));

    PicardResult res = picard_solve(model, k0, po);

    CsvWriter diffs(outpath(args, "picard.csv"),
                    {"term", "diff_norm", "majorant"});
    for (std::size_t n = 0; n < res.diff_norms.size(); ++n)
        diffs.row({static_cast<double>(n + 1), res.diff_norms[n],
                   n < res.majorant.size() ? res.majorant[n] : 0.0});

    m.set("theta0", theta0);
    m.set("theta", po.theta);
    m.set("omega", omega);
    m.set("t", po.t);
    m.set("horizon", res.horizon);
    m.set("horizon_delta", res.horizon_delta);
    m.set("terms_used", static_cast<long long>(res.terms_used));
    m.set("fitted_constant", res.fitted_constant);
    if (!res.diff_norms.empty())
        m.set("last_diff", res.diff_norms.back());
    m.write(outpath(args, "manifest.txt"));

    if (!args.quiet) {
        std::cout << "picard: t = " << format_full(po.t) << ", "
                  << res.terms_used << " terms, last difference = "
                  << (res.diff_norms.empty()
                          ? std::string("n/a")
                          : format_full(res.diff_norms.back()))
                  << "\n";
    }
    return 0;
}

//----------------------------------------------------------------------------
// bounds
//----------------------------------------------------------------------------
int cmd_bounds(const CliArgs& args, const RunConfig& cfg) {
    KernelModel model = build_model(cfg);

    Manifest m;
    base_manifest(m, "bounds", args, cfg);

    double theta0 = cfg.bounds.theta0
                        ? *cfg.bounds.theta0
                        : extract_theta0(initial_state(cfg));
    double omega = resolve_omega(cfg, model, m);
    double mean_b = cfg.bounds.mean_b.value_or(model.mean_b());
    double sup_b = cfg.bounds.sup_b.value_or(model.sup_b());
    double theta = cfg.bounds.theta.value_or(theta0 + 1.0);
    double theta_pp = cfg.bounds.theta_pp.value_or(theta0);

    HorizonParams p(theta0, theta, omega, mean_b, sup_b);
    double T = horizon(p);
    OptimalScale opt = optimal(theta0, omega, mean_b);
    double argmax = argmax_horizon_theta(theta0, omega, mean_b, 1e-4);
    OperatorNormBounds onb = operator_norm_bounds(p, theta_pp);

    CsvWriter table(outpath(args, "bounds.csv"), {"quantity", "value"});
    auto put = [&](const std::string& name, double v) {
        table.raw_row({name, format_full(v)});
    };
    put("theta0", theta0);
    put("theta", theta);
    put("omega", omega);
    put("mean_b", mean_b);
    put("sup_b", sup_b);
    put("horizon_T", T);
    put("theta_star", opt.theta_star);
    put("tau", opt.tau);
    put("argmax_theta", argmax);
    put("L_bound", onb.L_bound);
    put("C_shift_bound", onb.C_shift_bound);
    put("D_bound", onb.D_bound);
    if (cfg.bounds.t) {
        if (*cfg.bounds.t < T)
            put("q_norm_bound", q_norm_bound(*cfg.bounds.t, T));
        else
            table.raw_row({"q_norm_bound", "beyond_horizon"});
    }

    m.set("theta0", theta0);
    m.set("theta", theta);
    m.set("omega", omega);
    m.set("horizon_T", T);
    m.set("tau", opt.tau);
    m.write(outpath(args, "manifest.txt"));

    if (!args.quiet) {
        std::cout << "bounds: T(" << format_full(theta) << ", "
                  << format_full(theta0) << ") = " << format_full(T) << "\n";
        std::cout << "bounds: theta* = " << format_full(opt.theta_star)
                  << ", tau = " << format_full(opt.tau) << "\n";
    }
    return 0;
}

//----------------------------------------------------------------------------
// compare
//----------------------------------------------------------------------------
int cmd_compare(const CliArgs& args, const RunConfig& cfg) {
    KernelModel model = build_model(cfg);

    Manifest m;
    base_manifest(m, "compare", args, cfg);
    double omega = resolve_omega(cfg, model, m);

    // Monte Carlo side.
    RunOptions opts = cfg.simulate;
    if (args.threads >= 0) opts.threads = args.threads;
    RunResult res = run_replicas(model, opts);
    const CorrelationEstimate& est = res.estimates.back();

    // Hierarchy side: same Poisson start as the simulator, integrated to the
    // compared sample time.
    ReducedVector k0 = ReducedVector::poisson(cfg.domain, opts.density);
    IntegrateOptions io;
    io.t_end = est.time;
    io.dt = cfg.hierarchy.dt;
    io.closure = closure_of(cfg);
    io.omega_for_horizon = omega;
    io.theta_track = {extract_theta0(k0) + 1.0};
    Trajectory<ReducedVector> traj = integrate(model, k0, io);
    const ReducedVector& kf = traj.states.back();

    CsvWriter out(outpath(args, "compare.csv"),
                  {"bin_center", "g_mc", "g_se", "k2_hierarchy", "abs_diff",
                   "within_3se"});
    int within = 0;
    const int nb = static_cast<int>(est.g.size());
    for (int b = 0; b < nb; ++b) {
        double r = est.bin_center[b];
        double k2 = interp_periodic(cfg.domain, kf.q, Point{r, 0.0});
        double diff = std::abs(est.g[b] - k2);
        bool ok = diff <= 3.0 * est.g_se[b] + 1e-12;
        within += ok ? 1 : 0;
        out.row({r, est.g[b], est.g_se[b], k2, diff, ok ? 1.0 : 0.0});
    }
    double fraction = nb > 0 ? static_cast<double>(within) / nb : 0.0;
    bool pass = fraction >= 0.95;

    m.set("seed", static_cast<long long>(opts.seed));
    m.set("replicas", static_cast<long long>(opts.replicas));
    m.set("time", est.time);
    m.set("omega", omega);
    m.set("density", opts.density);
    m.set("closure", closure_name(io.closure));
    m.set("horizon_used", traj.horizon_used);
    m.set("horizon_warning", traj.horizon_warning);
    m.set("partial", res.budget_exhausted);
    m.set("bins", static_cast<long long>(nb));
    m.set("bins_within_3se", static_cast<long long>(within));
    m.set("fraction_within", fraction);
    m.set("status", pass ? std::string("PASS") : std::string("FAIL"));
    m.write(outpath(args, "manifest.txt"));

    if (!args.quiet)
        std::cout << "compare: t = " << format_full(est.time) << ", "
                  << within << "/" << nb
                  << " bins within 3 standard errors, status = "
                  << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jumpdyn: jump-process stability, simulation and hierarchy "
                 "toolkit"};
    app.set_version_flag("--version", JUMPDYN_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    CliArgs args;
    app.add_option("-c,--config", args.config_path, "JSON config file")
        ->required();
    app.add_option("-o,--out", args.out_dir,
                   "output directory (created if missing)");
    app.add_option("--threads", args.threads,
                   "worker pool size (overrides the config)");
    app.add_flag("-q,--quiet", args.quiet, "suppress the stdout summary");

    CLI::App* c_check = app.add_subcommand(
        "check-kernels", "stability verdict + model constants");
    CLI::App* c_sim = app.add_subcommand(
        "simulate", "kinetic Monte Carlo replicas");
    CLI::App* c_solve = app.add_subcommand(
        "solve", "integrate the truncated hierarchy");
    CLI::App* c_picard = app.add_subcommand(
        "picard", "Duhamel/Picard iteration diagnostics");
    CLI::App* c_bounds = app.add_subcommand(
        "bounds", "closed-form horizon and operator-norm bounds");
    CLI::App* c_compare = app.add_subcommand(
        "compare", "MC pair correlation vs hierarchy k2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        std::filesystem::create_directories(args.out_dir);
        RunConfig cfg = load_config(args.config_path);
        if (c_check->parsed()) return cmd_check_kernels(args, cfg);
        if (c_sim->parsed()) return cmd_simulate(args, cfg);
        if (c_solve->parsed()) return cmd_solve(args, cfg);
        if (c_picard->parsed()) return cmd_picard(args, cfg);
        if (c_bounds->parsed()) return cmd_bounds(args, cfg);
        if (c_compare->parsed()) return cmd_compare(args, cfg);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ResolutionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
