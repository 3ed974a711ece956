#include <cmath>

#include "jumpdyn/hierarchy.hpp"

#include "jumpdyn/errors.hpp"
#include "integrate_impl.hpp"
#include "tensor_detail.hpp"
#include "theta_search.hpp"

namespace jumpdyn {

using detail::mod_idx;
using detail::tensor_digits;
using detail::tensor_size;
using detail::tensor_strides;

//============================================================================
// TensorVector
//============================================================================

namespace {

void validate_tensor_shape(const TorusGrid& g, int N) {
    detail::require_tensor_grid(g);
    if (N < 1 || N > 3)
        throw ConfigError("tensor hierarchy: top order must be 1, 2 or 3");
}

} // namespace

TensorVector TensorVector::poisson(const TorusGrid& g, int N, double kappa) {
    validate_tensor_shape(g, N);
    if (!(kappa >= 0.0))
        throw ConfigError("poisson state: kappa must be >= 0");
    TensorVector v;
    v.grid = g;
    v.N = N;
    v.k.resize(N + 1);
    double p = 1.0;
    for (int n = 0; n <= N; ++n) {
        v.k[n].assign(tensor_size(n, g.res()), p);
        p *= kappa;
    }
    return v;
}

TensorVector TensorVector::zero(const TorusGrid& g, int N) {
    validate_tensor_shape(g, N);
    TensorVector v;
    v.grid = g;
    v.N = N;
    v.k.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        v.k[n].assign(tensor_size(n, g.res()), 0.0);
    return v;
}

TensorVector TensorVector::from_reduced(const ReducedVector& r) {
    validate_tensor_shape(r.grid, 2);
    const int M = r.grid.res();
    TensorVector v;
    v.grid = r.grid;
    v.N = 2;
    v.k.resize(3);
    v.k[0] = {r.k0};
    v.k[1].assign(M, r.rho);
    v.k[2].resize(tensor_size(2, M));
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            v.k[2][static_cast<std::size_t>(i) * M + j] =
                r.q[mod_idx(i - j, M)];
    return v;
}

double& TensorVector::at(int n, const std::vector<int>& idx) {
    detail::require_order(*this, n);
    const int M = grid.res();
    std::size_t flat = 0;
    for (int p = 0; p < n; ++p) flat = flat * M + mod_idx(idx[p], M);
    return k[n][flat];
}

double TensorVector::at(int n, const std::vector<int>& idx) const {
    return const_cast<TensorVector*>(this)->at(n, idx);
}

//============================================================================
// Operators (direct quadrature loops over full grids)
//============================================================================

Field tensor_apply_A(const KernelModel& m, const TensorVector& k, int n) {
    detail::require_order(k, n);
    const int M = k.grid.res();
    const double h = k.grid.h();
    const Field& alpha = m.alpha_table();
    const Field& k1 = m.kappa1_table();
    const Field& k2 = m.kappa2_table();
    const Field& kn = k.k[n];
    const auto str = tensor_strides(n, M);
    Field out(tensor_size(n, M), 0.0);
    std::vector<int> idx(std::max(n, 1));
    for (std::size_t t = 0; t < out.size(); ++t) {
        tensor_digits(t, n, M, idx.data());
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const std::size_t base = t - idx[j] * str[j];
            // The kappa2 part of b(x, x_j | x_m) ignores the source x.
            double b_const = 1.0;
            for (int mm = 0; mm < n; ++mm) {
                if (mm == j) continue;
                b_const += k2[mod_idx(idx[j] - idx[mm], M)];
            }
            for (int x = 0; x < M; ++x) {
                const double w = alpha[mod_idx(idx[j] - x, M)];
                if (w == 0.0) continue;
                double bsum = b_const;
                for (int mm = 0; mm < n; ++mm) {
                    if (mm == j) continue;
                    bsum += k1[mod_idx(x - idx[mm], M)];
                }
                acc += w * bsum *
                       kn[base + static_cast<std::size_t>(x) * str[j]];
            }
        }
        out[t] = h * acc;
    }
    return out;
}

Field tensor_apply_B(const KernelModel& m, const TensorVector& k, int n,
                     double omega) {
    detail::require_order(k, n);
    const int M = k.grid.res();
    const Field& phi = m.phi_minus_table();
    const Field& kn = k.k[n];
    Field out(tensor_size(n, M));
    std::vector<int> idx(std::max(n, 1));
    for (std::size_t t = 0; t < out.size(); ++t) {
        tensor_digits(t, n, M, idx.data());
        double psi = n * (m.m_a() + omega);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                psi += phi[mod_idx(idx[i] - idx[j], M)];
            }
        out[t] = -psi * kn[t];
    }
    return out;
}

Field tensor_apply_C(const KernelModel& m, const TensorVector& k, int n,
                     ClosureRule closure, double omega) {
    detail::require_order(k, n);
    const int M = k.grid.res();
    const double h = k.grid.h();
    const Field& alpha = m.alpha_table();
    const Field& k1 = m.kappa1_table();
    const Field& k2 = m.kappa2_table();
    const Field& kn = k.k[n];
    const auto str = tensor_strides(n, M);
    const bool top = (n == k.N);
    Field out(tensor_size(n, M), 0.0);
    std::vector<int> idx(std::max(n, 1));
    for (std::size_t t = 0; t < out.size(); ++t) {
        tensor_digits(t, n, M, idx.data());
        double acc = 0.0;
        if (!top || closure == ClosureRule::MeanField) {
            for (int j = 0; j < n; ++j) {
                const std::size_t base = t - idx[j] * str[j];
                for (int x = 0; x < M; ++x) {
                    const double w = alpha[mod_idx(idx[j] - x, M)];
                    if (w == 0.0) continue;
                    const std::size_t bjx =
                        base + static_cast<std::size_t>(x) * str[j];
                    double inner = 0.0;
                    for (int z = 0; z < M; ++z) {
                        const double b = k1[mod_idx(x - z, M)] +
                                         k2[mod_idx(idx[j] - z, M)];
                        const double up =
                            top ? kn[bjx] * k.k[1][z]
                                : k.k[n + 1][bjx * M + z];
                        inner += b * up;
                    }
                    acc += w * inner;
                }
            }
        }
        out[t] = h * h * acc + omega * n * kn[t];
    }
    return out;
}

Field tensor_apply_D(const KernelModel& m, const TensorVector& k, int n,
                     ClosureRule closure) {
    detail::require_order(k, n);
    const int M = k.grid.res();
    const double h = k.grid.h();
    const Field& phi = m.phi_minus_table();
    const Field& kn = k.k[n];
    const bool top = (n == k.N);
    Field out(tensor_size(n, M), 0.0);
    std::vector<int> idx(std::max(n, 1));
    for (std::size_t t = 0; t < out.size(); ++t) {
        tensor_digits(t, n, M, idx.data());
        double acc = 0.0;
        if (!top || closure == ClosureRule::MeanField) {
            for (int z = 0; z < M; ++z) {
                double phisum = 0.0;
                for (int j = 0; j < n; ++j)
                    phisum += phi[mod_idx(idx[j] - z, M)];
                const double up = top ? kn[t] * k.k[1][z]
                                      : k.k[n + 1][t * static_cast<
                                            std::size_t>(M) + z];
                acc += phisum * up;
            }
        }
        out[t] = -h * acc;
    }
    return out;
}

TensorVector tensor_apply_L(const KernelModel& m, const TensorVector& k,
                            ClosureRule closure) {
    TensorVector out;
    out.grid = k.grid;
    out.N = k.N;
    out.k.resize(k.N + 1);
    for (int n = 0; n <= k.N; ++n) {
        Field a = tensor_apply_A(m, k, n);
        Field b = tensor_apply_B(m, k, n);
        Field c = tensor_apply_C(m, k, n, closure);
        Field d = tensor_apply_D(m, k, n, closure);
        out.k[n].resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            out.k[n][i] = a[i] + b[i] + c[i] + d[i];
    }
    return out;
}

//============================================================================
// Norms, symmetry, scale extraction
//============================================================================

double norm_theta(const TensorVector& k, double theta) {
    double out = 0.0;
    for (int n = 0; n <= k.N; ++n) {
        double mx = 0.0;
        for (double v : k.k[n]) mx = std::max(mx, std::abs(v));
        out = std::max(out, std::exp(-theta * n) * mx);
    }
    return out;
}

double tensor_symmetry_defect(const TensorVector& k) {
    const int M = k.grid.res();
    double defect = 0.0;
    for (int n = 2; n <= k.N; ++n) {
        const auto str = tensor_strides(n, M);
        std::vector<int> idx(n);
        for (std::size_t t = 0; t < k.k[n].size(); ++t) {
            tensor_digits(t, n, M, idx.data());
            for (int p = 0; p + 1 < n; ++p) {
                // Adjacent transpositions generate the symmetric group.
                const auto delta =
                    static_cast<std::ptrdiff_t>(idx[p + 1] - idx[p]) *
                    (static_cast<std::ptrdiff_t>(str[p]) -
                     static_cast<std::ptrdiff_t>(str[p + 1]));
                const std::size_t swapped =
                    static_cast<std::size_t>(
                        static_cast<std::ptrdiff_t>(t) + delta);
                defect = std::max(defect,
                                  std::abs(k.k[n][t] - k.k[n][swapped]));
            }
        }
    }
    return defect;
}

double extract_theta0(const TensorVector& k) {
    return detail::least_theta(
        [&](double th) { return norm_theta(k, th); });
}

//============================================================================
// Time integration
//============================================================================

Trajectory<TensorVector> integrate(const KernelModel& m,
                                   const TensorVector& k0,
                                   const IntegrateOptions& opts) {
    if (!(k0.grid == m.grid()))
        throw ConfigError("hierarchy: state grid does not match the model");
    auto rhs = [&](const TensorVector& y) {
        return tensor_apply_L(m, y, opts.closure);
    };
    auto axpy = [](const TensorVector& a, double c, const TensorVector& b) {
        TensorVector r = a;
        for (int n = 0; n <= r.N; ++n)
            for (std::size_t i = 0; i < r.k[n].size(); ++i)
                r.k[n][i] += c * b.k[n][i];
        return r;
    };
    auto max_abs = [](const TensorVector& y) {
        double v = 0.0;
        for (int n = 0; n <= y.N; ++n)
            for (double x : y.k[n]) v = std::max(v, std::abs(x));
        return v;
    };
    return detail::integrate_impl(m, k0, opts, rhs, axpy, max_abs);
}

//============================================================================
// Measured operator norms.  The weighted sup-operator norm between scales is
// the max over rows of e^{-theta n_row} sum_cols |entry| e^{theta'' n_col};
// applying each one-signed component (A, -B, C^omega, -D) to the constant
// test vector k^(n) = e^{theta'' n} evaluates those row sums exactly.  The
// L figure adds the component row sums, i.e. it is the triangle-inequality
// bound on ||L|| that the closed-form estimate actually controls.
//============================================================================

MeasuredNorms measured_operator_norms(const KernelModel& m, int N,
                                      double theta, double theta_pp,
                                      double omega, ClosureRule closure) {
    if (!(theta_pp < theta))
        throw ConfigError("operator norms: theta'' must be < theta");
    if (!(omega >= 0.0))
        throw ConfigError("operator norms: omega must be >= 0");
    TensorVector w = TensorVector::poisson(m.grid(), N, std::exp(theta_pp));
    MeasuredNorms out;
    for (int n = 0; n <= N; ++n) {
        Field a = tensor_apply_A(m, w, n);
        Field b = tensor_apply_B(m, w, n);
        Field c0 = tensor_apply_C(m, w, n, closure);
        Field com = tensor_apply_C(m, w, n, closure, omega);
        Field d = tensor_apply_D(m, w, n, closure);
        const double wn = std::exp(-theta * n);
        double lmax = 0.0, cmax = 0.0, dmax = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            lmax = std::max(lmax, a[i] - b[i] + c0[i] - d[i]);
            cmax = std::max(cmax, com[i]);
            dmax = std::max(dmax, -d[i]);
        }
        out.L_norm = std::max(out.L_norm, wn * lmax);
        out.C_shift_norm = std::max(out.C_shift_norm, wn * cmax);
        out.D_norm = std::max(out.D_norm, wn * dmax);
    }
    return out;
}

} // namespace jumpdyn
