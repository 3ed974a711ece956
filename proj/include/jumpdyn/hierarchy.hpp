#ifndef JUMPDYN_HIERARCHY_HPP
#define JUMPDYN_HIERARCHY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jumpdyn/kernels.hpp"

namespace jumpdyn {

//============================================================================
// Truncated correlation-function hierarchy
//
//   d/dt k^(n) = (A k)^(n) + (B k)^(n) + (C k)^(n) + (D k)^(n),   n <= N
//
// A, B are diagonal in the order n; C, D consume order n+1.  At the top
// order the missing input comes from the closure rule:
//   zero-tail:   k^(N+1) := 0
//   mean-field:  k^(N+1)(eta u z) := k^(N)(eta) * k^(1)(z)
//
// Two storage schemes:
//   * ReducedVector — translation-invariant states: k^(0) scalar, k^(1) a
//     constant rho, k^(2) a function q of the separation vector.  Operators
//     reduce to circular convolutions (any d, fast path, N = 2).
//   * TensorVector — full grids k^(n) on (torus grid)^n for d = 1 and small
//     M, orders up to N <= 3.  Operators are direct quadrature loops; this
//     path cross-checks the reduced one and carries the dissipativity test.
//============================================================================

enum class ClosureRule { ZeroTail, MeanField };

//----------------------------------------------------------------------------
// Reduced representation
//----------------------------------------------------------------------------
struct ReducedVector {
    TorusGrid grid;
    double k0 = 1.0;   // k^(0); 1 for correlation vectors, 0 for the zero
                       // element of the Banach space
    double rho = 0.0;  // k^(1), spatially constant
    Field q;           // k^(2) as a function of the separation vector

    static ReducedVector poisson(const TorusGrid& g, double kappa);
    static ReducedVector zero(const TorusGrid& g);

    int max_order() const { return 2; }
};

// Per-order derivative pieces.  Order 1 pieces are scalars, order 2 pieces
// are fields; orders are independent except for the C/D coupling to n+1.
double reduced_apply_A1(const KernelModel& m, const ReducedVector& k);
Field  reduced_apply_A2(const KernelModel& m, const ReducedVector& k);
double reduced_apply_B1(const KernelModel& m, const ReducedVector& k,
                        double omega = 0.0);
Field  reduced_apply_B2(const KernelModel& m, const ReducedVector& k,
                        double omega = 0.0);
double reduced_apply_C1(const KernelModel& m, const ReducedVector& k,
                        double omega = 0.0);
Field  reduced_apply_C2(const KernelModel& m, const ReducedVector& k,
                        ClosureRule closure, double omega = 0.0);
double reduced_apply_D1(const KernelModel& m, const ReducedVector& k);
Field  reduced_apply_D2(const KernelModel& m, const ReducedVector& k,
                        ClosureRule closure);

// Full right-hand side (the omega shifts of B and C cancel in the sum, so
// apply_L needs no omega argument).
ReducedVector reduced_apply_L(const KernelModel& m, const ReducedVector& k,
                              ClosureRule closure);

double norm_theta(const ReducedVector& k, double theta);

//----------------------------------------------------------------------------
// Tensor representation (d = 1 only)
//----------------------------------------------------------------------------
struct TensorVector {
    TorusGrid grid;
    int N = 2;                           // top order
    std::vector<Field> k;                // k[n] has M^n entries, n = 0..N

    static TensorVector poisson(const TorusGrid& g, int N, double kappa);
    static TensorVector zero(const TorusGrid& g, int N);
    static TensorVector from_reduced(const ReducedVector& r);

    double& at(int n, const std::vector<int>& idx);
    double at(int n, const std::vector<int>& idx) const;
};

Field tensor_apply_A(const KernelModel& m, const TensorVector& k, int n);
Field tensor_apply_B(const KernelModel& m, const TensorVector& k, int n,
                     double omega = 0.0);
Field tensor_apply_C(const KernelModel& m, const TensorVector& k, int n,
                     ClosureRule closure, double omega = 0.0);
Field tensor_apply_D(const KernelModel& m, const TensorVector& k, int n,
                     ClosureRule closure);
TensorVector tensor_apply_L(const KernelModel& m, const TensorVector& k,
                            ClosureRule closure);

double norm_theta(const TensorVector& k, double theta);

// Largest pointwise violation of permutation symmetry over all orders.
double tensor_symmetry_defect(const TensorVector& k);

//----------------------------------------------------------------------------
// theta_0 extraction: least theta with norm_theta(k, theta) <= 1 + 1e-12
// (binary search; the norm is nonincreasing in theta).
//----------------------------------------------------------------------------
double extract_theta0(const ReducedVector& k);
double extract_theta0(const TensorVector& k);

//----------------------------------------------------------------------------
// Time integration (classical RK4, fixed step)
//----------------------------------------------------------------------------
struct IntegrateOptions {
    double t_end = 1.0;
    double dt = 1e-3;
    ClosureRule closure = ClosureRule::ZeroTail;
    std::vector<double> theta_track;        // norms recorded at these theta
    int output_stride = 0;                  // 0: record only t=0 and t_end
    double blowup_threshold = 1e12;
    // Optional horizon check: warn (flag, not error) when t_end exceeds the
    // smallest T(theta, theta0) over tracked thetas.
    std::optional<double> omega_for_horizon;
};

struct NormSample {
    double time;
    double theta;
    double norm;
    double bound;   // T/(T-t) * ||k0||_theta0 when a horizon applies, else 0
};

template <typename State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;              // at recorded times
    std::vector<NormSample> norms;
    bool horizon_warning = false;
    double horizon_used = 0.0;              // smallest applicable T
    double theta0 = 0.0;
};

Trajectory<ReducedVector> integrate(const KernelModel& m,
                                    const ReducedVector& k0,
                                    const IntegrateOptions& opts);
Trajectory<TensorVector> integrate(const KernelModel& m,
                                   const TensorVector& k0,
                                   const IntegrateOptions& opts);

//----------------------------------------------------------------------------
// Picard / Duhamel iteration (reduced representation)
//
//   k^(0)_t     = S(t) k0,              S = flow of A + B^omega
//   k^(i+1)_t   = S(t) k0 + int_0^t S(t-s) (C^omega + D) k^(i)_s ds
//
// S acts order by order: the order-1 factor is the scalar e^{-omega t}; the
// order-2 factor is a dense matrix exponential when M^{2d} <= 10^6 entries,
// else an inner RK4 on the stiff A+B part with step dt/10.
//----------------------------------------------------------------------------
struct PicardOptions {
    double t = 0.1;
    int n_terms = 8;
    ClosureRule closure = ClosureRule::ZeroTail;
    double omega = 0.0;
    int time_steps = 256;          // Duhamel quadrature sub-grid (even)
    double theta = 1.0;            // norm scale for the diagnostics
    // Ladder parameters feeding the majorant: theta1 = theta0(k0) and
    // theta2 = theta define the reduced horizon
    //   T_delta = (theta - theta1 - delta) e^{-theta} / (omega + 2<b>).
    int ladder_l = 3;
    double delta_fraction = 0.25;  // delta = fraction * (theta - theta1)
};

struct PicardResult {
    ReducedVector state;
    std::vector<double> diff_norms;      // ||k^(i) - k^(i-1)||_theta
    std::vector<double> majorant;        // theoretical majorant terms
    double fitted_constant = 0.0;        // max diff/majorant over early terms
    double horizon = 0.0;                // T(theta, theta0)
    double horizon_delta = 0.0;          // T_delta from the ladder
    int terms_used = 0;
};

PicardResult picard_solve(const KernelModel& m, const ReducedVector& k0,
                          const PicardOptions& opts);

//----------------------------------------------------------------------------
// Predual dissipativity check (tensor path, d = 1)
//
//   value = phi_theta( (Ahat + Bhat^omega) G ),
//   phi_theta(G) = G^(0) + sum_n (1/n!) h^n sum_grid G^(n) e^{theta n},
//
// where Ahat moves the jump out of the configuration (G(eta \ x u y)) and
// Bhat^omega = -Psi_omega G.  For G >= 0 and omega satisfying the balance
// condition the value is <= 0 (discrete dissipativity).
//----------------------------------------------------------------------------
double check_dissipativity(const KernelModel& m, const TensorVector& G,
                           double theta, double omega);

TensorVector dual_apply(const KernelModel& m, const TensorVector& G,
                        double omega);   // (Ahat + Bhat^omega) G

// Discrete dual norm phi_theta(|G|).
double dual_norm(const TensorVector& G, double theta);

// RK4 flow of dG/dt = (Ahat + Bhat^omega) G; returns dual-norm samples.
std::vector<std::pair<double, double>>
dual_flow_norms(const KernelModel& m, const TensorVector& G0, double theta,
                double omega, double t_end, double dt, int samples);

//----------------------------------------------------------------------------
// Measured operator norms of the truncated discrete operators (exact row-sum
// evaluation of the weighted sup-operator norm; the iteration it shortcut
// replaces converges to the same max row sum).  Tensor path, d = 1.
//----------------------------------------------------------------------------
struct MeasuredNorms {
    double L_norm = 0.0;        // || L ||_{theta'' -> theta}
    double C_shift_norm = 0.0;  // || C^omega ||
    double D_norm = 0.0;        // || D ||
};
MeasuredNorms measured_operator_norms(const KernelModel& m, int N,
                                      double theta, double theta_pp,
                                      double omega, ClosureRule closure);

} // namespace jumpdyn

#endif
