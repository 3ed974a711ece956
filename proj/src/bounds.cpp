#include "jumpdyn/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

HorizonParams::HorizonParams(double th0, double th, double om, double mb,
                             double sb)
    : theta0(th0), theta(th), omega(om), mean_b(mb), sup_b(sb) {
    validate();
}

void HorizonParams::validate() const {
    std::ostringstream err;
    if (!(theta > theta0))
        err << "bounds: theta (" << theta << ") must exceed theta0 ("
            << theta0 << ")";
    else if (!(omega >= 0.0))
        err << "bounds: omega must be >= 0";
    else if (!(mean_b >= 0.0) || !(sup_b >= 0.0))
        err << "bounds: <b> and bbar must be >= 0";
    else if (!(omega + 2.0 * mean_b > 0.0))
        err << "bounds: omega + 2<b> must be > 0 (horizon is infinite "
               "for the pure free motion; nothing to bound)";
    else
        return;
    throw ConfigError(err.str());
}

double horizon(const HorizonParams& p) {
    p.validate();
    return (p.theta - p.theta0) * std::exp(-p.theta) /
           (p.omega + 2.0 * p.mean_b);
}

OptimalScale optimal(double theta0, double omega, double mean_b) {
    if (!(omega >= 0.0) || !(mean_b >= 0.0) || !(omega + 2.0 * mean_b > 0.0))
        throw ConfigError("bounds: need omega >= 0, <b> >= 0 and "
                          "omega + 2<b> > 0");
    OptimalScale s;
    s.theta_star = theta0 + 1.0;
    s.tau = std::exp(-theta0) / (std::exp(1.0) * (omega + 2.0 * mean_b));
    return s;
}

double argmax_horizon_theta(double theta0, double omega, double mean_b,
                            double step) {
    if (!(step > 0.0)) throw ConfigError("bounds: step must be > 0");
    double best_theta = theta0 + step;
    double best = -std::numeric_limits<double>::infinity();
    const long n = static_cast<long>(std::llround(5.0 / step));
    for (long i = 1; i <= n; ++i) {
        const double th = theta0 + i * step;
        const double T = (th - theta0) * std::exp(-th) /
                         (omega + 2.0 * mean_b);
        if (T > best) {
            best = T;
            best_theta = th;
        }
    }
    return best_theta;
}

double q_norm_bound(double t, double T) {
    if (!(T > 0.0)) throw ConfigError("bounds: horizon T must be > 0");
    if (!(t >= 0.0) || !(t < T))
        throw ConfigError("bounds: time must satisfy 0 <= t < T");
    return T / (T - t);
}

OperatorNormBounds operator_norm_bounds(const HorizonParams& p,
                                        double theta_pp) {
    p.validate();
    if (!(theta_pp < p.theta))
        throw ConfigError("bounds: theta'' must be < theta");
    const double gap = p.theta - theta_pp;
    const double e1 = std::exp(1.0);
    OperatorNormBounds b;
    b.L_bound = 2.0 * ((1.0 + p.mean_b) / (e1 * gap) +
                       4.0 * p.sup_b / (e1 * e1 * gap * gap));
    b.C_shift_bound =
        (p.omega + p.mean_b) * std::exp(p.theta) / (e1 * gap);
    b.D_bound = p.mean_b * std::exp(p.theta) / (e1 * gap);
    return b;
}

std::vector<double> ladder(double theta1, double theta, int l, double delta) {
    if (l < 1) throw ConfigError("bounds: ladder depth l must be >= 1");
    if (!(delta > 0.0) || !(delta < theta - theta1))
        throw ConfigError(
            "bounds: ladder offset delta must satisfy 0 < delta < "
            "theta - theta1");
    const double eps = (theta - theta1 - delta) / l;
    std::vector<double> rungs(2 * l + 2);
    for (int s = 0; s <= l; ++s) {
        rungs[2 * s] = theta1 + (double(s) / (l + 1)) * delta + s * eps;
        rungs[2 * s + 1] =
            theta1 + (double(s + 1) / (l + 1)) * delta + s * eps;
    }
    // The closed forms reproduce the endpoints only to roundoff; pin them.
    rungs.front() = theta1;
    rungs.back() = theta;
    for (std::size_t i = 1; i < rungs.size(); ++i)
        if (!(rungs[i] > rungs[i - 1]))
            throw NumericalError("bounds: ladder rungs failed to increase");
    return rungs;
}

std::vector<double> majorant_terms(double T, double T_delta, int n_max) {
    if (!(T > 0.0) || !(T < T_delta))
        throw ConfigError("bounds: majorant needs 0 < T < T_delta");
    if (n_max < 1) throw ConfigError("bounds: n_max must be >= 1");
    std::vector<double> terms(n_max);
    const double r = T / T_delta;
    for (int n = 1; n <= n_max; ++n) {
        // (1/n!) (n/e)^n r^n, accumulated in logs to dodge overflow.
        double lg = -std::lgamma(n + 1.0) +
                    n * (std::log(double(n)) - 1.0 + std::log(r));
        terms[n - 1] = std::exp(lg);
    }
    return terms;
}

EnvelopeReport envelope_check(const std::vector<double>& times,
                              const std::vector<double>& norms,
                              double k0_norm_theta0, double T, double slack) {
    if (times.size() != norms.size())
        throw ConfigError("bounds: times/norms size mismatch");
    if (!(k0_norm_theta0 > 0.0))
        throw ConfigError("bounds: initial norm must be > 0");
    EnvelopeReport rep;
    rep.slack = slack;
    rep.ratios.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!(t >= 0.0) || !(t < T))
            throw ConfigError("bounds: envelope time outside [0, T)");
        const double bound = q_norm_bound(t, T) * k0_norm_theta0;
        const double ratio = norms[i] / bound;
        rep.ratios.push_back(ratio);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.max_ratio_time = t;
        }
    }
    rep.ok = rep.max_ratio <= 1.0 + slack;
    return rep;
}

} // namespace jumpdyn
