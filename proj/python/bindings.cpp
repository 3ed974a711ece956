// Python bindings: the main operations behind one JSON-config entry point
// each, mirroring the CLI subcommands, plus the closed-form bound formulas
// as plain functions.  Configs arrive as JSON text; the package __init__
// accepts dicts and serializes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jumpdyn/bounds.hpp"
#include "jumpdyn/errors.hpp"
#include "jumpdyn/hierarchy.hpp"
#include "jumpdyn/run_config.hpp"
#include "jumpdyn/simulator.hpp"

namespace py = pybind11;
using namespace jumpdyn;

namespace {

RunConfig parse(const std::string& text) {
    return parse_config(text, "<config>");
}

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

double resolve_omega(const RunConfig& cfg, const KernelModel& model) {
    if (cfg.bounds.omega) return *cfg.bounds.omega;
    StabilityReport rep = stability_check(model, cfg.stability);
    if (rep.unbounded)
        throw NumericalError("no finite stability allowance: the model is "
                             "unbounded");
    return rep.effective_omega();
}

py::dict py_stability(const std::string& config) {
    RunConfig cfg = parse(config);
    KernelModel model = build_model(cfg);
    StabilityReport rep = stability_check(model, cfg.stability);
    py::dict d;
    d["stable"] = rep.stable();
    d["unbounded"] = rep.unbounded;
    d["fourier_ok"] = rep.fourier_ok;
    d["min_product"] = rep.min_product;
    d["omega"] = rep.omega;
    d["omega_certified"] = rep.omega_certified;
    d["effective_omega"] = rep.effective_omega();
    d["omega_is_empirical"] = rep.omega_is_empirical;
    d["pointwise_dominance_ok"] = rep.pointwise_dominance_ok;
    d["max_pointwise_gap"] = rep.max_pointwise_gap;
    d["growth_slope"] = rep.growth_slope;
    d["omega_by_size"] = rep.omega_by_size;
    return d;
}

py::dict py_constants(const std::string& config) {
    RunConfig cfg = parse(config);
    KernelModel model = build_model(cfg);
    py::dict d;
    d["dimension"] = cfg.domain.dim();
    d["side"] = cfg.domain.side();
    d["resolution"] = cfg.domain.res();
    d["h"] = cfg.domain.h();
    d["m_a"] = model.m_a();
    d["mean_b"] = model.mean_b();
    d["sup_b"] = model.sup_b();
    d["mass_kappa1"] = model.mass_kappa1();
    d["mass_kappa2"] = model.mass_kappa2();
    d["mass_phi_minus"] = model.mass_phi_minus();
    return d;
}

py::dict py_simulate(const std::string& config) {
    RunConfig cfg = parse(config);
    KernelModel model = build_model(cfg);
    RunResult res = run_replicas(model, cfg.simulate);
    py::list estimates;
    for (const CorrelationEstimate& est : res.estimates) {
        py::dict e;
        e["time"] = est.time;
        e["replicas"] = est.replicas;
        e["density"] = est.density;
        e["density_se"] = est.density_se;
        e["bin_center"] = est.bin_center;
        e["g"] = est.g;
        e["g_se"] = est.g_se;
        estimates.append(e);
    }
    py::dict d;
    d["estimates"] = estimates;
    d["total_events"] = res.total_events;
    d["audit_failures"] = res.audit_failures;
    d["partial"] = res.budget_exhausted;
    return d;
}

py::dict py_solve(const std::string& config) {
    RunConfig cfg = parse(config);
    KernelModel model = build_model(cfg);
    ReducedVector k0 = initial_state(cfg);
    IntegrateOptions io;
    io.t_end = cfg.hierarchy.t_end;
    io.dt = cfg.hierarchy.dt;
    io.closure = cfg.hierarchy.closure;
    io.theta_track = cfg.hierarchy.theta_track;
    io.output_stride = cfg.hierarchy.output_stride;
    io.omega_for_horizon = resolve_omega(cfg, model);
    if (io.theta_track.empty())
        io.theta_track = {extract_theta0(k0) + 1.0};
    Trajectory<ReducedVector> traj = integrate(model, k0, io);
    const ReducedVector& kf = traj.states.back();

    py::list norms;
    for (const NormSample& s : traj.norms) {
        py::dict n;
        n["time"] = s.time;
        n["theta"] = s.theta;
        n["norm"] = s.norm;
        n["bound"] = s.bound;
        norms.append(n);
    }
    std::vector<double> sep(kf.q.size());
    for (std::size_t i = 0; i < sep.size(); ++i)
        sep[i] = cfg.domain.coord(i)[0];

    py::dict d;
    d["theta0"] = traj.theta0;
    d["horizon_used"] = traj.horizon_used;
    d["horizon_warning"] = traj.horizon_warning;
    d["times"] = traj.times;
    d["norms"] = norms;
    d["rho_final"] = kf.rho;
    d["k0_final"] = kf.k0;
    d["sep"] = sep;
    d["k2_final"] = kf.q;
    return d;
}

py::dict py_picard(const std::string& config) {
    RunConfig cfg = parse(config);
    KernelModel model = build_model(cfg);
    ReducedVector k0 = initial_state(cfg);
    double omega = resolve_omega(cfg, model);
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
    py::dict d;
    d["t"] = po.t;
    d["theta"] = po.theta;
    d["theta0"] = theta0;
    d["omega"] = omega;
    d["diff_norms"] = res.diff_norms;
    d["majorant"] = res.majorant;
    d["fitted_constant"] = res.fitted_constant;
    d["horizon"] = res.horizon;
    d["horizon_delta"] = res.horizon_delta;
    d["terms_used"] = res.terms_used;
    return d;
}

double py_horizon(double theta0, double theta, double omega, double mean_b,
                  double sup_b) {
    return horizon(HorizonParams(theta0, theta, omega, mean_b, sup_b));
}

py::tuple py_optimal(double theta0, double omega, double mean_b) {
    OptimalScale o = optimal(theta0, omega, mean_b);
    return py::make_tuple(o.theta_star, o.tau);
}

py::dict py_operator_norm_bounds(double theta0, double theta, double omega,
                                 double mean_b, double sup_b,
                                 double theta_pp) {
    OperatorNormBounds b = operator_norm_bounds(
        HorizonParams(theta0, theta, omega, mean_b, sup_b), theta_pp);
    py::dict d;
    d["L_bound"] = b.L_bound;
    d["C_shift_bound"] = b.C_shift_bound;
    d["D_bound"] = b.D_bound;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "jump-process stability, simulation and hierarchy toolkit";
    m.attr("__version__") = JUMPDYN_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ResolutionError>(m, "ResolutionError",
                                            PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError",
                                           PyExc_RuntimeError);

    m.def("stability", &py_stability, py::arg("config"),
          "Balance-condition verdict for the configured kernels");
    m.def("model_constants", &py_constants, py::arg("config"),
          "Derived kernel constants (masses, sups, grid geometry)");
    m.def("simulate", &py_simulate, py::arg("config"),
          "Kinetic Monte Carlo replicas: density and pair-correlation "
          "estimates with standard errors");
    m.def("solve", &py_solve, py::arg("config"),
          "Integrate the truncated correlation hierarchy (RK4)");
    m.def("picard", &py_picard, py::arg("config"),
          "Duhamel/Picard iteration with successive-difference diagnostics");

    m.def("horizon", &py_horizon, py::arg("theta0"), py::arg("theta"),
          py::arg("omega"), py::arg("mean_b"), py::arg("sup_b") = 0.0,
          "Guaranteed existence horizon T(theta, theta0)");
    m.def("optimal", &py_optimal, py::arg("theta0"), py::arg("omega"),
          py::arg("mean_b"),
          "(theta*, tau): maximizer of T(., theta0) and its value");
    m.def("q_norm_bound", &q_norm_bound, py::arg("t"), py::arg("T"),
          "Norm-growth envelope T / (T - t)");
    m.def("ladder", &ladder, py::arg("theta1"), py::arg("theta"),
          py::arg("l"), py::arg("delta"),
          "Interpolating scale ladder between theta1 and theta");
    m.def("majorant_terms", &majorant_terms, py::arg("T"),
          py::arg("T_delta"), py::arg("n_max"),
          "Successive-difference majorant terms (1/n!)(n/e)^n (T/T_delta)^n");
    m.def("operator_norm_bounds", &py_operator_norm_bounds,
          py::arg("theta0"), py::arg("theta"), py::arg("omega"),
          py::arg("mean_b"), py::arg("sup_b"), py::arg("theta_pp"),
          "Closed-form bounds for the L, C^omega and D operator norms");
}
