#include <algorithm>
#include <cmath>

#include "jumpdyn/hierarchy.hpp"

#include "jumpdyn/errors.hpp"
#include "tensor_detail.hpp"

namespace jumpdyn {

using detail::mod_idx;
using detail::tensor_digits;
using detail::tensor_size;
using detail::tensor_strides;

//============================================================================
// Predual operators.  The dual of the free hierarchy flow moves the jump out
// of the configuration:
//
//   (Ahat G)(eta) = sum_{x_j in eta} h sum_y a(x_j, y)
//                       (1 + sum_{m != j} b(x_j, y | x_m)) G(eta \ x_j u y)
//   (Bhat^omega G)(eta) = -(n m_a + Phi_minus(eta) + omega n) G(eta)
//
// and the lambda-functional phi_theta(G) = G^(0) + sum_n (1/n!) h^n
// sum_grid G^(n) e^{theta n} turns dissipativity into the sign of
// phi_theta((Ahat + Bhat^omega) G).
//============================================================================

TensorVector dual_apply(const KernelModel& m, const TensorVector& G,
                        double omega) {
    if (!(omega >= 0.0))
        throw ConfigError("dissipativity: omega must be >= 0");
    const int M = G.grid.res();
    const double h = G.grid.h();
    const Field& alpha = m.alpha_table();
    const Field& k1 = m.kappa1_table();
    const Field& k2 = m.kappa2_table();
    const Field& phi = m.phi_minus_table();
    TensorVector out;
    out.grid = G.grid;
    out.N = G.N;
    out.k.resize(G.N + 1);
    out.k[0] = {0.0};
    for (int n = 1; n <= G.N; ++n) {
        const Field& gn = G.k[n];
        const auto str = tensor_strides(n, M);
        Field res(tensor_size(n, M), 0.0);
        std::vector<int> idx(n);
        for (std::size_t t = 0; t < res.size(); ++t) {
            tensor_digits(t, n, M, idx.data());
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const std::size_t base = t - idx[j] * str[j];
                // kappa1 part of b(x_j, y | x_m) ignores the target y.
                double b_const = 1.0;
                for (int mm = 0; mm < n; ++mm) {
                    if (mm == j) continue;
                    b_const += k1[mod_idx(idx[j] - idx[mm], M)];
                }
                for (int y = 0; y < M; ++y) {
                    const double w = alpha[mod_idx(y - idx[j], M)];
                    if (w == 0.0) continue;
                    double bsum = b_const;
                    for (int mm = 0; mm < n; ++mm) {
                        if (mm == j) continue;
                        bsum += k2[mod_idx(y - idx[mm], M)];
                    }
                    acc += w * bsum *
                           gn[base + static_cast<std::size_t>(y) * str[j]];
                }
            }
            double psi = n * (m.m_a() + omega);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    psi += phi[mod_idx(idx[i] - idx[j], M)];
                }
            res[t] = h * acc - psi * gn[t];
        }
        out.k[n] = std::move(res);
    }
    return out;
}

namespace {

double lambda_functional(const TensorVector& G, double theta, bool absolute) {
    const double h = G.grid.h();
    double total = absolute ? std::abs(G.k[0][0]) : G.k[0][0];
    double factorial = 1.0;
    double hpow = 1.0;
    for (int n = 1; n <= G.N; ++n) {
        factorial *= n;
        hpow *= h;
        double s = 0.0;
        for (double v : G.k[n]) s += absolute ? std::abs(v) : v;
        total += hpow / factorial * std::exp(theta * n) * s;
    }
    return total;
}

} // namespace

double check_dissipativity(const KernelModel& m, const TensorVector& G,
                           double theta, double omega) {
    TensorVector H = dual_apply(m, G, omega);
    return lambda_functional(H, theta, false);
}

double dual_norm(const TensorVector& G, double theta) {
    return lambda_functional(G, theta, true);
}

std::vector<std::pair<double, double>>
dual_flow_norms(const KernelModel& m, const TensorVector& G0, double theta,
                double omega, double t_end, double dt, int samples) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw ConfigError("dissipativity flow: need t_end > 0 and dt > 0");
    if (samples < 2)
        throw ConfigError("dissipativity flow: need at least 2 samples");
    auto axpy = [](const TensorVector& a, double c, const TensorVector& b) {
        TensorVector r = a;
        for (int n = 0; n <= r.N; ++n)
            for (std::size_t i = 0; i < r.k[n].size(); ++i)
                r.k[n][i] += c * b.k[n][i];
        return r;
    };
    const long n_steps = std::max<long>(
        1, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
    const long stride = std::max<long>(1, n_steps / (samples - 1));
    std::vector<std::pair<double, double>> out;
    TensorVector y = G0;
    out.emplace_back(0.0, dual_norm(y, theta));
    for (long s = 1; s <= n_steps; ++s) {
        const double t0 = std::min((s - 1) * dt, t_end);
        const double t1 = (s == n_steps) ? t_end : std::min(s * dt, t_end);
        const double hstep = t1 - t0;
        TensorVector f1 = dual_apply(m, y, omega);
        TensorVector f2 = dual_apply(m, axpy(y, 0.5 * hstep, f1), omega);
        TensorVector f3 = dual_apply(m, axpy(y, 0.5 * hstep, f2), omega);
        TensorVector f4 = dual_apply(m, axpy(y, hstep, f3), omega);
        y = axpy(y, hstep / 6.0, f1);
        y = axpy(y, hstep / 3.0, f2);
        y = axpy(y, hstep / 3.0, f3);
        y = axpy(y, hstep / 6.0, f4);
        if (s == n_steps || s % stride == 0)
            out.emplace_back(t1, dual_norm(y, theta));
    }
    return out;
}

} // namespace jumpdyn
