#include <cmath>

#include "jumpdyn/hierarchy.hpp"

#include "jumpdyn/errors.hpp"
#include "integrate_impl.hpp"
#include "theta_search.hpp"

namespace jumpdyn {

//============================================================================
// ReducedVector
//============================================================================

ReducedVector ReducedVector::poisson(const TorusGrid& g, double kappa) {
    if (!(kappa >= 0.0))
        throw ConfigError("poisson state: kappa must be >= 0");
    ReducedVector v;
    v.grid = g;
    v.k0 = 1.0;
    v.rho = kappa;
    v.q.assign(g.size(), kappa * kappa);
    return v;
}

ReducedVector ReducedVector::zero(const TorusGrid& g) {
    ReducedVector v;
    v.grid = g;
    v.k0 = 0.0;
    v.rho = 0.0;
    v.q.assign(g.size(), 0.0);
    return v;
}

//============================================================================
// Operators.  In the translation-invariant sector the hierarchy collapses to
//
//   order 1:  A = rho m_a,            B = -(m_a + omega) rho,
//             C = int phi_minus q + omega rho,   D = -int phi_minus q
//   order 2:  A = 2 [ (alpha*q) + (alpha*(kappa1 q)) + kappa2 (alpha*q) ]
//             B = -(2 m_a + 2 phi_minus + 2 omega) q
//             C = 2 omega q  (+ 2 rho <b> (alpha*q)   under mean-field)
//             D = 0          (- 2 rho mass(phi_minus) q  under mean-field)
//
// so the full right-hand side of order 1 cancels identically (particle
// number is conserved by jumps) and order 2 closes over convolutions.
//============================================================================

double reduced_apply_A1(const KernelModel& m, const ReducedVector& k) {
    return k.rho * m.m_a();
}

double reduced_apply_B1(const KernelModel& m, const ReducedVector& k,
                        double omega) {
    return -(m.m_a() + omega) * k.rho;
}

namespace {

double phi_minus_pairing(const KernelModel& m, const ReducedVector& k) {
    const Field& phi = m.phi_minus_table();
    double s = 0.0;
    for (std::size_t i = 0; i < k.q.size(); ++i) s += phi[i] * k.q[i];
    return s * m.grid().cell_volume();
}

} // namespace

double reduced_apply_C1(const KernelModel& m, const ReducedVector& k,
                        double omega) {
    return phi_minus_pairing(m, k) + omega * k.rho;
}

double reduced_apply_D1(const KernelModel& m, const ReducedVector& k) {
    return -phi_minus_pairing(m, k);
}

Field reduced_apply_A2(const KernelModel& m, const ReducedVector& k) {
    const Spectral& sp = m.spectral();
    const std::size_t n = k.q.size();
    Field aq = sp.convolve(m.alpha_table(), k.q);
    Field k1q(n);
    for (std::size_t i = 0; i < n; ++i) k1q[i] = m.kappa1_table()[i] * k.q[i];
    Field ak1q = sp.convolve(m.alpha_table(), k1q);
    Field out(n);
    const Field& k2 = m.kappa2_table();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = 2.0 * (aq[i] + ak1q[i] + k2[i] * aq[i]);
    return out;
}

Field reduced_apply_B2(const KernelModel& m, const ReducedVector& k,
                       double omega) {
    const Field& phi = m.phi_minus_table();
    Field out(k.q.size());
    for (std::size_t i = 0; i < k.q.size(); ++i)
        out[i] = -(2.0 * m.m_a() + 2.0 * phi[i] + 2.0 * omega) * k.q[i];
    return out;
}

Field reduced_apply_C2(const KernelModel& m, const ReducedVector& k,
                       ClosureRule closure, double omega) {
    Field out(k.q.size(), 0.0);
    if (closure == ClosureRule::MeanField) {
        Field aq = m.spectral().convolve(m.alpha_table(), k.q);
        const double c = 2.0 * k.rho * m.mean_b();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * aq[i];
    }
    if (omega != 0.0)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += 2.0 * omega * k.q[i];
    return out;
}

Field reduced_apply_D2(const KernelModel& m, const ReducedVector& k,
                       ClosureRule closure) {
    Field out(k.q.size(), 0.0);
    if (closure == ClosureRule::MeanField) {
        const double c = -2.0 * k.rho * m.mass_phi_minus();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * k.q[i];
    }
    return out;
}

ReducedVector reduced_apply_L(const KernelModel& m, const ReducedVector& k,
                              ClosureRule closure) {
    ReducedVector out;
    out.grid = k.grid;
    out.k0 = 0.0;
    out.rho = reduced_apply_A1(m, k) + reduced_apply_B1(m, k) +
              reduced_apply_C1(m, k) + reduced_apply_D1(m, k);
    Field a = reduced_apply_A2(m, k);
    Field b = reduced_apply_B2(m, k);
    Field c = reduced_apply_C2(m, k, closure);
    Field d = reduced_apply_D2(m, k, closure);
    out.q.resize(k.q.size());
    for (std::size_t i = 0; i < k.q.size(); ++i)
        out.q[i] = a[i] + b[i] + c[i] + d[i];
    return out;
}

//============================================================================
// Norms and scale extraction
//============================================================================

double norm_theta(const ReducedVector& k, double theta) {
    double qmax = 0.0;
    for (double v : k.q) qmax = std::max(qmax, std::abs(v));
    double n = std::abs(k.k0);
    n = std::max(n, std::exp(-theta) * std::abs(k.rho));
    n = std::max(n, std::exp(-2.0 * theta) * qmax);
    return n;
}

double extract_theta0(const ReducedVector& k) {
    return detail::least_theta(
        [&](double th) { return norm_theta(k, th); });
}

//============================================================================
// Time integration
//============================================================================

Trajectory<ReducedVector> integrate(const KernelModel& m,
                                    const ReducedVector& k0,
                                    const IntegrateOptions& opts) {
    if (!(k0.grid == m.grid()))
        throw ConfigError("hierarchy: state grid does not match the model");
    auto rhs = [&](const ReducedVector& y) {
        return reduced_apply_L(m, y, opts.closure);
    };
    auto axpy = [](const ReducedVector& a, double c, const ReducedVector& b) {
        ReducedVector r = a;
        r.k0 += c * b.k0;
        r.rho += c * b.rho;
        for (std::size_t i = 0; i < r.q.size(); ++i) r.q[i] += c * b.q[i];
        return r;
    };
    auto max_abs = [](const ReducedVector& y) {
        double v = std::max(std::abs(y.k0), std::abs(y.rho));
        for (double x : y.q) v = std::max(v, std::abs(x));
        return v;
    };
    return detail::integrate_impl(m, k0, opts, rhs, axpy, max_abs);
}

} // namespace jumpdyn
