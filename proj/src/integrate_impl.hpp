#ifndef JUMPDYN_SRC_INTEGRATE_IMPL_HPP
#define JUMPDYN_SRC_INTEGRATE_IMPL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jumpdyn/errors.hpp"
#include "jumpdyn/hierarchy.hpp"

namespace jumpdyn {
namespace detail {

// Classical RK4 with a fixed step (last step shortened to land on t_end),
// shared between the reduced and tensor representations.  `rhs(state)`
// evaluates the closed right-hand side, `axpy(a, c, b)` returns a + c*b,
// `max_abs` the largest entry magnitude (blow-up detector).
template <typename State, typename RhsFn, typename AxpyFn, typename MaxAbsFn>
Trajectory<State> integrate_impl(const KernelModel& m, const State& k0,
                                 const IntegrateOptions& opts, RhsFn&& rhs,
                                 AxpyFn&& axpy, MaxAbsFn&& max_abs) {
    if (!(opts.t_end > 0.0))
        throw ConfigError("hierarchy.t_end: must be > 0");
    if (!(opts.dt > 0.0))
        throw ConfigError("hierarchy.dt: must be > 0");
    if (opts.output_stride < 0)
        throw ConfigError("hierarchy.output_stride: must be >= 0");

    Trajectory<State> traj;
    traj.theta0 = extract_theta0(k0);
    const double k0_norm = norm_theta(k0, traj.theta0);

    // Horizon per tracked scale (only scales above theta0 get one).
    std::vector<double> T_for(opts.theta_track.size(), 0.0);
    if (opts.omega_for_horizon) {
        const double om = *opts.omega_for_horizon;
        if (!(om >= 0.0))
            throw ConfigError("hierarchy: omega for the horizon check "
                              "must be >= 0");
        const double denom = om + 2.0 * m.mean_b();
        double tmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < opts.theta_track.size(); ++i) {
            const double th = opts.theta_track[i];
            if (th > traj.theta0 && denom > 0.0) {
                T_for[i] = (th - traj.theta0) * std::exp(-th) / denom;
                tmin = std::min(tmin, T_for[i]);
            }
        }
        if (std::isfinite(tmin)) {
            traj.horizon_used = tmin;
            if (opts.t_end >= tmin) traj.horizon_warning = true;
        }
    }

    auto record = [&](double t, const State& s) {
        traj.times.push_back(t);
        traj.states.push_back(s);
        for (std::size_t i = 0; i < opts.theta_track.size(); ++i) {
            NormSample ns;
            ns.time = t;
            ns.theta = opts.theta_track[i];
            ns.norm = norm_theta(s, ns.theta);
            ns.bound = (T_for[i] > 0.0 && t < T_for[i])
                           ? T_for[i] / (T_for[i] - t) * k0_norm
                           : 0.0;
            traj.norms.push_back(ns);
        }
    };

    const long n_steps = std::max<long>(
        1, static_cast<long>(std::ceil(opts.t_end / opts.dt - 1e-9)));
    State y = k0;
    record(0.0, y);
    for (long s = 1; s <= n_steps; ++s) {
        const double t0 = std::min((s - 1) * opts.dt, opts.t_end);
        const double t1 = (s == n_steps)
                              ? opts.t_end
                              : std::min(s * opts.dt, opts.t_end);
        const double hstep = t1 - t0;
        State f1 = rhs(y);
        State f2 = rhs(axpy(y, 0.5 * hstep, f1));
        State f3 = rhs(axpy(y, 0.5 * hstep, f2));
        State f4 = rhs(axpy(y, hstep, f3));
        y = axpy(y, hstep / 6.0, f1);
        y = axpy(y, hstep / 3.0, f2);
        y = axpy(y, hstep / 3.0, f3);
        y = axpy(y, hstep / 6.0, f4);
        if (max_abs(y) > opts.blowup_threshold) {
            std::ostringstream err;
            err << "hierarchy integration: correlation entries exceeded "
                << opts.blowup_threshold << " at t = " << t1
                << " (blow-up)";
            throw NumericalError(err.str());
        }
        if (s == n_steps)
            record(opts.t_end, y);
        else if (opts.output_stride > 0 && s % opts.output_stride == 0)
            record(t1, y);
    }
    return traj;
}

} // namespace detail
} // namespace jumpdyn

#endif
