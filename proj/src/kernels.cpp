#include "jumpdyn/kernels.hpp"

#include <cmath>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

namespace {

// Rescale a table so its grid quadrature equals the declared mass exactly.
// Raw deviations are pure quadrature error (periodization conserves mass);
// a large one means the grid cannot resolve the profile.
double normalize_table(const TorusGrid& g, Field& tab, double target_mass,
                       const std::string& name) {
    const double raw = field_mass(g, tab);
    if (target_mass == 0.0) {
        if (raw != 0.0)
            throw ResolutionError(name + ": zero-mass profile with nonzero "
                                         "table");
        return 1.0;
    }
    if (std::abs(raw / target_mass - 1.0) > 1e-3)
        throw ResolutionError(
            name + ": grid too coarse (quadrature mass " +
            std::to_string(raw) + " vs declared " +
            std::to_string(target_mass) + ")");
    const double scale = target_mass / raw;
    for (double& v : tab) v *= scale;
    return scale;
}

} // namespace

KernelModel::KernelModel(TorusGrid grid, RadialProfile alpha,
                         RadialProfile kappa1, RadialProfile kappa2)
    : grid_(grid), alpha_(std::move(alpha)), kappa1_(std::move(kappa1)),
      kappa2_(std::move(kappa2)),
      spectral_(std::make_shared<Spectral>(grid_)) {
    if (alpha_.is_zero())
        throw ConfigError("alpha: jump kernel must not be zero");
    if (!alpha_.is_tabulated() && std::abs(alpha_.mass - 1.0) > 1e-8)
        throw ConfigError("alpha: jump kernel must have unit mass");

    alpha_tab_ = periodized_table(grid_, alpha_);
    k1_tab_ = periodized_table(grid_, kappa1_);
    k2_tab_ = periodized_table(grid_, kappa2_);

    if (alpha_.is_tabulated()) {
        // Tabulated jump kernel: grid mass must already be 1.
        m_a_ = field_mass(grid_, alpha_tab_);
        if (std::abs(m_a_ - 1.0) > 1e-8)
            throw ConfigError("alpha: tabulated jump kernel mass " +
                              std::to_string(m_a_) + " != 1");
    } else {
        alpha_scale_ = normalize_table(grid_, alpha_tab_, 1.0, "alpha");
        m_a_ = 1.0;
    }
    auto fix_mass = [this](const RadialProfile& p, Field& tab, double& mass,
                           double& scale, const char* name) {
        if (p.is_tabulated()) {
            mass = field_mass(grid_, tab);
        } else {
            scale = normalize_table(grid_, tab, p.mass, name);
            mass = p.mass;
        }
    };
    fix_mass(kappa1_, k1_tab_, mass_k1_, k1_scale_, "kappa1");
    fix_mass(kappa2_, k2_tab_, mass_k2_, k2_scale_, "kappa2");

    conv_a_k1_ = spectral_->convolve(alpha_tab_, k1_tab_);
    conv_a_k2_ = spectral_->convolve(alpha_tab_, k2_tab_);

    // Circular convolution preserves the mass product; a violation beyond
    // 1e-6 indicates a broken transform, not a physics issue.
    auto conv_mass_check = [this](const Field& conv, double expect,
                                  const char* name) {
        if (std::abs(field_mass(grid_, conv) - expect) > 1e-6)
            throw ResolutionError(std::string(name) +
                                  ": convolution mass deviates from the "
                                  "product of masses");
    };
    conv_mass_check(conv_a_k1_, m_a_ * mass_k1_, "alpha*kappa1");
    conv_mass_check(conv_a_k2_, m_a_ * mass_k2_, "alpha*kappa2");

    const std::size_t n = grid_.size();
    phi_plus_.resize(n);
    phi_minus_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi_plus_[i] = conv_a_k1_[i] + k2_tab_[i];
        phi_minus_[i] = k1_tab_[i] + conv_a_k2_[i];
    }

    mean_b_ = mass_k1_ + mass_k2_;
    sup_b_ = field_max(k1_tab_) + field_max(k2_tab_);
    sup_k2_ = field_max(k2_tab_);
    mass_phi_minus_ = field_mass(grid_, phi_minus_);

    // Rate bound 0 <= phi <= bbar must hold on the grid.
    const double tol = 1e-8 * (1.0 + sup_b_);
    for (std::size_t i = 0; i < n; ++i) {
        if (phi_plus_[i] < -tol || phi_minus_[i] < -tol ||
            phi_plus_[i] > sup_b_ + tol || phi_minus_[i] > sup_b_ + tol)
            throw ResolutionError("pair rates violate the 0 <= phi <= sup_b "
                                  "bound on the grid");
    }
}

double KernelModel::eval_a(const Point& x, const Point& y) const {
    Point s = grid_.separation(x, y);
    if (alpha_.is_tabulated()) return interp_periodic(grid_, alpha_tab_, s);
    return alpha_scale_ * alpha_.periodized(grid_, s);
}

double KernelModel::eval_b(const Point& x, const Point& y,
                           const Point& z) const {
    const Point sxz = grid_.separation(z, x);
    const Point syz = grid_.separation(z, y);
    double v = 0.0;
    if (kappa1_.is_tabulated()) v += interp_periodic(grid_, k1_tab_, sxz);
    else v += k1_scale_ * kappa1_.periodized(grid_, sxz);
    if (kappa2_.is_tabulated()) v += interp_periodic(grid_, k2_tab_, syz);
    else v += k2_scale_ * kappa2_.periodized(grid_, syz);
    return v;
}

double KernelModel::phi_plus(const Point& s) const {
    return interp_periodic(grid_, phi_plus_, s);
}

double KernelModel::phi_minus(const Point& s) const {
    return interp_periodic(grid_, phi_minus_, s);
}

double KernelModel::phi_plus(const Point& x, const Point& y) const {
    return phi_plus(grid_.separation(x, y));
}

double KernelModel::phi_minus(const Point& x, const Point& y) const {
    return phi_minus(grid_.separation(x, y));
}

double KernelModel::kappa1_part(const Point& s) const {
    return interp_periodic(grid_, k1_tab_, s);
}

double KernelModel::conv_alpha_kappa2_part(const Point& s) const {
    return interp_periodic(grid_, conv_a_k2_, s);
}

double KernelModel::kappa2_value(const Point& s) const {
    if (kappa2_.is_zero()) return 0.0;
    if (kappa2_.is_tabulated()) return interp_periodic(grid_, k2_tab_, s);
    return k2_scale_ * kappa2_.periodized(grid_, s);
}

Point KernelModel::sample_alpha(std::mt19937_64& rng) const {
    const int d = grid_.dim();
    Point u{0.0, 0.0};
    switch (alpha_.family) {
        case ProfileFamily::Gaussian: {
            std::normal_distribution<double> n(0.0, alpha_.sigma);
            u[0] = n(rng);
            if (d == 2) u[1] = n(rng);
            return u;
        }
        case ProfileFamily::Exponential: {
            // d=1: two-sided exponential; d=2: radius ~ Gamma(2, sigma)
            // (density proportional to r e^{-r/sigma}), uniform angle.
            std::exponential_distribution<double> e(1.0 / alpha_.sigma);
            if (d == 1) {
                std::bernoulli_distribution sign(0.5);
                u[0] = sign(rng) ? e(rng) : -e(rng);
            } else {
                const double r = e(rng) + e(rng);
                std::uniform_real_distribution<double> ang(0.0,
                    6.283185307179586476925286766559);
                const double t = ang(rng);
                u[0] = r * std::cos(t);
                u[1] = r * std::sin(t);
            }
            return u;
        }
        case ProfileFamily::Tophat: {
            std::uniform_real_distribution<double> un(0.0, 1.0);
            if (d == 1) {
                u[0] = (2.0 * un(rng) - 1.0) * alpha_.sigma;
            } else {
                const double r = alpha_.sigma * std::sqrt(un(rng));
                std::uniform_real_distribution<double> ang(0.0,
                    6.283185307179586476925286766559);
                const double t = ang(rng);
                u[0] = r * std::cos(t);
                u[1] = r * std::sin(t);
            }
            return u;
        }
        case ProfileFamily::Tabulated: {
            // Roulette over cells by table weight, uniform jitter in-cell.
            std::uniform_real_distribution<double> un(0.0, 1.0);
            double total = 0.0;
            for (double v : alpha_tab_) total += v;
            double target = un(rng) * total;
            std::size_t i = 0;
            for (; i + 1 < alpha_tab_.size(); ++i) {
                target -= alpha_tab_[i];
                if (target <= 0.0) break;
            }
            Point c = grid_.coord(i);
            u[0] = c[0] + un(rng) * grid_.h();
            if (d == 2) u[1] = c[1] + un(rng) * grid_.h();
            return u;
        }
        case ProfileFamily::Zero:
            throw std::logic_error("cannot sample from the zero profile");
    }
    return u;
}

} // namespace jumpdyn
