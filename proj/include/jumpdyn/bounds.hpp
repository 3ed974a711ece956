#ifndef JUMPDYN_BOUNDS_HPP
#define JUMPDYN_BOUNDS_HPP

#include <vector>

namespace jumpdyn {

//============================================================================
// Closed-form scale-of-Banach-spaces bounds.  Throughout:
//   theta0  initial scale (ln of the initial Ruelle constant)
//   theta   target scale > theta0
//   omega   stability allowance
//   mean_b  <b>, sup_b  bbar
// and the time horizon
//   T(theta, theta0) = (theta - theta0) e^{-theta} / (omega + 2 <b>).
//============================================================================

struct HorizonParams {
    double theta0 = 0.0;
    double theta = 1.0;
    double omega = 0.0;
    double mean_b = 0.0;
    double sup_b = 0.0;

    HorizonParams() = default;
    HorizonParams(double th0, double th, double om, double mb, double sb);
    void validate() const;   // theta > theta0, omega,<b>,bbar >= 0,
                             // omega + 2<b> > 0
};

// T(theta, theta0).
double horizon(const HorizonParams& p);

// Maximizer of T(., theta0): theta* = theta0 + 1 and tau(theta0) =
// e^{-theta0} / (e (omega + 2<b>)).
struct OptimalScale {
    double theta_star;
    double tau;
};
OptimalScale optimal(double theta0, double omega, double mean_b);

// Grid search for the maximizer of T(., theta0) over (theta0, theta0 + 5]
// with the given step (diagnostic; must land on theta0 + 1).
double argmax_horizon_theta(double theta0, double omega, double mean_b,
                            double step = 1e-6);

// Norm-growth envelope T / (T - t); requires 0 <= t < T.
double q_norm_bound(double t, double T);

// Operator-norm bounds between scales theta'' < theta:
//   L_bound = 2 ( (1 + <b>) / (e (theta - theta'')) +
//                 4 bbar   / (e^2 (theta - theta'')^2) )
//   C_shift_bound = (omega + <b>) e^theta / (e (theta - theta''))
//   D_bound       =          <b>  e^theta / (e (theta - theta''))
struct OperatorNormBounds {
    double L_bound;
    double C_shift_bound;
    double D_bound;
};
OperatorNormBounds operator_norm_bounds(const HorizonParams& p,
                                        double theta_pp);

// Scale ladder: the 2l+2 intermediate scales
//   theta^{2s}   = theta1 + (s/(l+1)) delta + s eps
//   theta^{2s+1} = theta1 + ((s+1)/(l+1)) delta + s eps,   s = 0..l,
// with eps = (theta - theta1 - delta)/l; strictly increasing from theta1 to
// theta.  Requires l >= 1 and 0 < delta < theta - theta1.
std::vector<double> ladder(double theta1, double theta, int l, double delta);

// Successive-difference majorant terms (1/n!) (n/e)^n (T/T_delta)^n for
// n = 1..n_max; requires 0 < T < T_delta.
std::vector<double> majorant_terms(double T, double T_delta, int n_max);

// Envelope comparison: measured norms ||k_t||_theta against the theoretical
// envelope q_norm_bound(t, T) * ||k0||_theta0.
struct EnvelopeReport {
    double max_ratio = 0.0;
    double max_ratio_time = 0.0;
    bool ok = true;              // max_ratio <= 1 + slack
    double slack = 0.05;         // truncation slack (engineering tolerance,
                                 // not part of the continuum bound)
    std::vector<double> ratios;
};
EnvelopeReport envelope_check(const std::vector<double>& times,
                              const std::vector<double>& norms,
                              double k0_norm_theta0, double T,
                              double slack = 0.05);

} // namespace jumpdyn

#endif
