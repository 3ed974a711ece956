#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "jumpdyn/bounds.hpp"
#include "jumpdyn/errors.hpp"
#include "jumpdyn/hierarchy.hpp"

namespace jumpdyn {

namespace {

// Field arithmetic helpers local to the Duhamel machinery.
Field fadd(const Field& a, const Field& b) {
    Field r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Field fsub(const Field& a, const Field& b) {
    Field r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

double fmax_abs(const Field& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

//============================================================================
// picard_solve: Duhamel iteration
//
//   k^(i+1)(t) = S(t) k0 + int_0^t S(t-s) (C^omega + D) k^(i)(s) ds
//
// on the uniform grid t_j = j Delta.  With E = S(Delta) the integral obeys
// the one-step recurrence P_j = E P_{j-1} + (Delta/2)(E F_{j-1} + F_j)
// (trapezoid), so every iteration costs O(time_steps) propagator
// applications.  S splits over orders: scalar e^{-omega t} at order 1 and
// the flow of G2 = A2 - diag(2 m_a + 2 phi_minus + 2 omega) at order 2,
// realized as a dense matrix exponential when the matrix fits in 10^6
// entries and as an inner RK4 with step Delta/10 otherwise.
//============================================================================

PicardResult picard_solve(const KernelModel& m, const ReducedVector& k0,
                          const PicardOptions& opts) {
    const TorusGrid& g = m.grid();
    if (!(k0.grid == g))
        throw ConfigError("picard: state grid does not match the model");
    if (!(opts.t > 0.0)) throw ConfigError("picard.t: must be > 0");
    if (opts.n_terms < 1) throw ConfigError("picard.terms: must be >= 1");
    if (opts.time_steps < 2)
        throw ConfigError("picard.time_steps: must be >= 2");
    if (!(opts.omega >= 0.0)) throw ConfigError("picard.omega: must be >= 0");
    if (!(opts.delta_fraction > 0.0) || !(opts.delta_fraction < 1.0))
        throw ConfigError("picard.delta_fraction: must lie in (0, 1)");
    if (opts.ladder_l < 1)
        throw ConfigError("picard.ladder_l: must be >= 1");

    const double theta1 = extract_theta0(k0);
    if (!(opts.theta > theta1))
        throw ConfigError(
            "picard.theta: must exceed the initial scale theta0 of the "
            "starting state");

    const std::size_t nfield = g.size();
    const int J = opts.time_steps;
    const double dt = opts.t / J;
    const double e1 = std::exp(-opts.omega * dt);

    // --- one-step propagator at order 2 ------------------------------------
    std::function<Field(const Field&)> S2;
    Eigen::MatrixXd E2;
    const bool dense =
        static_cast<double>(nfield) * static_cast<double>(nfield) <= 1e6;
    if (dense) {
        const int M = g.res();
        auto sep_idx = [&](std::size_t i, std::size_t j) {
            if (g.dim() == 1)
                return g.index(static_cast<int>(i) - static_cast<int>(j));
            const int ri = static_cast<int>(i) / M, ci =
                static_cast<int>(i) % M;
            const int rj = static_cast<int>(j) / M, cj =
                static_cast<int>(j) % M;
            return g.index(ri - rj, ci - cj);
        };
        const Field& alpha = m.alpha_table();
        const Field& k1 = m.kappa1_table();
        const Field& k2 = m.kappa2_table();
        const Field& phi = m.phi_minus_table();
        const double h = g.cell_volume();
        Eigen::MatrixXd G2(nfield, nfield);
        for (std::size_t i = 0; i < nfield; ++i)
            for (std::size_t j = 0; j < nfield; ++j) {
                double v = 2.0 * h * alpha[sep_idx(i, j)] *
                           (1.0 + k1[j] + k2[i]);
                if (i == j)
                    v -= 2.0 * (m.m_a() + phi[i] + opts.omega);
                G2(i, j) = v;
            }
        E2 = (G2 * dt).exp();
        S2 = [&, nfield](const Field& q) {
            Eigen::Map<const Eigen::VectorXd> in(q.data(), nfield);
            Eigen::VectorXd out = E2 * in;
            return Field(out.data(), out.data() + nfield);
        };
    } else {
        // Inner RK4 on dq/dtau = A2 q - (2 m_a + 2 phi_minus + 2 omega) q
        // with 10 substeps per Duhamel step.
        S2 = [&, dt](const Field& q0) {
            auto rhs = [&](const Field& q) {
                ReducedVector tmp;
                tmp.grid = g;
                tmp.q = q;
                Field a = reduced_apply_A2(m, tmp);
                Field b = reduced_apply_B2(m, tmp, opts.omega);
                return fadd(a, b);
            };
            Field y = q0;
            const double sub = dt / 10.0;
            for (int s = 0; s < 10; ++s) {
                Field f1 = rhs(y);
                Field y2(y.size()), y3(y.size()), y4(y.size());
                for (std::size_t i = 0; i < y.size(); ++i)
                    y2[i] = y[i] + 0.5 * sub * f1[i];
                Field f2 = rhs(y2);
                for (std::size_t i = 0; i < y.size(); ++i)
                    y3[i] = y[i] + 0.5 * sub * f2[i];
                Field f3 = rhs(y3);
                for (std::size_t i = 0; i < y.size(); ++i)
                    y4[i] = y[i] + sub * f3[i];
                Field f4 = rhs(y4);
                for (std::size_t i = 0; i < y.size(); ++i)
                    y[i] += sub / 6.0 *
                            (f1[i] + 2.0 * f2[i] + 2.0 * f3[i] + f4[i]);
            }
            return y;
        };
    }

    // --- free trajectory S(t_j) k0 ------------------------------------------
    std::vector<double> base_rho(J + 1);
    std::vector<Field> base_q(J + 1);
    base_rho[0] = k0.rho;
    base_q[0] = k0.q;
    for (int j = 1; j <= J; ++j) {
        base_rho[j] = e1 * base_rho[j - 1];
        base_q[j] = S2(base_q[j - 1]);
    }

    // --- Duhamel iterations -------------------------------------------------
    PicardResult res;
    std::vector<double> prev_rho = base_rho;
    std::vector<Field> prev_q = base_q;
    const double stop_floor =
        1e-15 * std::max(1.0, norm_theta(k0, opts.theta));
    int growth_streak = 0;
    for (int it = 1; it <= opts.n_terms; ++it) {
        // Source F_j = (C^omega + D) applied to the previous iterate.
        std::vector<double> F1(J + 1);
        std::vector<Field> F2(J + 1);
        for (int j = 0; j <= J; ++j) {
            ReducedVector tmp;
            tmp.grid = g;
            tmp.k0 = k0.k0;
            tmp.rho = prev_rho[j];
            tmp.q = prev_q[j];
            F1[j] = reduced_apply_C1(m, tmp, opts.omega) +
                    reduced_apply_D1(m, tmp);
            F2[j] = fadd(reduced_apply_C2(m, tmp, opts.closure, opts.omega),
                         reduced_apply_D2(m, tmp, opts.closure));
        }
        std::vector<double> next_rho(J + 1);
        std::vector<Field> next_q(J + 1);
        double P1 = 0.0;
        Field P2(nfield, 0.0);
        next_rho[0] = base_rho[0];
        next_q[0] = base_q[0];
        for (int j = 1; j <= J; ++j) {
            Field SP2 = S2(P2);
            Field SF2 = S2(F2[j - 1]);
            P1 = e1 * P1 + 0.5 * dt * (e1 * F1[j - 1] + F1[j]);
            for (std::size_t i = 0; i < nfield; ++i)
                P2[i] = SP2[i] + 0.5 * dt * (SF2[i] + F2[j][i]);
            next_rho[j] = base_rho[j] + P1;
            next_q[j] = fadd(base_q[j], P2);
        }
        double diff = 0.0;
        for (int j = 0; j <= J; ++j) {
            diff = std::max(diff, std::exp(-opts.theta) *
                                      std::abs(next_rho[j] - prev_rho[j]));
            diff = std::max(diff, std::exp(-2.0 * opts.theta) *
                                      fmax_abs(fsub(next_q[j], prev_q[j])));
        }
        res.diff_norms.push_back(diff);
        res.terms_used = it;
        prev_rho = std::move(next_rho);
        prev_q = std::move(next_q);
        if (res.diff_norms.size() >= 2 &&
            diff > res.diff_norms[res.diff_norms.size() - 2]) {
            if (++growth_streak >= 3)
                throw NumericalError(
                    "picard: successive-difference norms grew three times "
                    "in a row; the run time exceeds the contraction "
                    "horizon for this scale");
        } else {
            growth_streak = 0;
        }
        if (diff < stop_floor) break;
    }

    // --- horizons and the theoretical majorant ------------------------------
    const double denom = opts.omega + 2.0 * m.mean_b();
    res.horizon = (opts.theta - theta1) * std::exp(-opts.theta) / denom;
    const double delta = opts.delta_fraction * (opts.theta - theta1);
    ladder(theta1, opts.theta, opts.ladder_l, delta);   // validates geometry
    res.horizon_delta =
        (opts.theta - theta1 - delta) * std::exp(-opts.theta) / denom;
    if (opts.t < res.horizon_delta) {
        res.majorant = majorant_terms(opts.t, res.horizon_delta,
                                      opts.n_terms);
        for (std::size_t i = 0; i < res.diff_norms.size(); ++i) {
            if (res.majorant[i] > 0.0)
                res.fitted_constant = std::max(
                    res.fitted_constant, res.diff_norms[i] / res.majorant[i]);
        }
    }

    res.state.grid = g;
    res.state.k0 = k0.k0;
    res.state.rho = prev_rho[J];
    res.state.q = prev_q[J];
    return res;
}

} // namespace jumpdyn
