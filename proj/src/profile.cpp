#include "jumpdyn/profile.hpp"

#include <cmath>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Normalizing constant: integral over R^d of the unnormalized shape.
double shape_integral(ProfileFamily fam, double sigma, int d) {
    switch (fam) {
        case ProfileFamily::Gaussian:
            // exp(-r^2 / 2 sigma^2): (2 pi sigma^2)^{d/2}
            return std::pow(kTwoPi * sigma * sigma, 0.5 * d);
        case ProfileFamily::Exponential:
            // exp(-r / sigma): 2 sigma (d=1), 2 pi sigma^2 (d=2)
            return d == 1 ? 2.0 * sigma : kTwoPi * sigma * sigma;
        case ProfileFamily::Tophat:
            // indicator of |r| <= sigma: 2 sigma (d=1), pi sigma^2 (d=2)
            return d == 1 ? 2.0 * sigma : 0.5 * kTwoPi * sigma * sigma;
        default:
            return 1.0;
    }
}
} // namespace

RadialProfile RadialProfile::gaussian(double sigma, double mass) {
    if (!(sigma > 0.0)) throw ConfigError("profile sigma: must be > 0");
    if (mass < 0.0) throw ConfigError("profile mass: must be >= 0");
    return {ProfileFamily::Gaussian, sigma, mass, {}};
}

RadialProfile RadialProfile::exponential(double sigma, double mass) {
    if (!(sigma > 0.0)) throw ConfigError("profile sigma: must be > 0");
    if (mass < 0.0) throw ConfigError("profile mass: must be >= 0");
    return {ProfileFamily::Exponential, sigma, mass, {}};
}

RadialProfile RadialProfile::tophat(double sigma, double mass) {
    if (!(sigma > 0.0)) throw ConfigError("profile sigma: must be > 0");
    if (mass < 0.0) throw ConfigError("profile mass: must be >= 0");
    return {ProfileFamily::Tophat, sigma, mass, {}};
}

RadialProfile RadialProfile::tabulated(Field values) {
    for (double v : values)
        if (!(v >= 0.0))
            throw ConfigError("tabulated profile: entries must be >= 0");
    RadialProfile p;
    p.family = ProfileFamily::Tabulated;
    p.table = std::move(values);
    p.mass = 0.0;   // determined by grid quadrature at model build
    return p;
}

RadialProfile RadialProfile::zero() { return {}; }

double RadialProfile::value(double r, int d) const {
    switch (family) {
        case ProfileFamily::Gaussian:
            return mass * std::exp(-0.5 * r * r / (sigma * sigma)) /
                   shape_integral(family, sigma, d);
        case ProfileFamily::Exponential:
            return mass * std::exp(-r / sigma) /
                   shape_integral(family, sigma, d);
        case ProfileFamily::Tophat:
            return r <= sigma ? mass / shape_integral(family, sigma, d) : 0.0;
        case ProfileFamily::Zero:
            return 0.0;
        case ProfileFamily::Tabulated:
            throw std::logic_error("tabulated profile has no radial value()");
    }
    return 0.0;
}

double RadialProfile::tail_radius(int d) const {
    // Radius with relative tail mass < 1e-12 (closed-form, conservative).
    switch (family) {
        case ProfileFamily::Gaussian:
            // erfc(R / sigma sqrt(2)) < 1e-12 at R = 7.1 sigma; pad for d=2.
            return 9.0 * sigma;
        case ProfileFamily::Exponential:
            // (1 + R/sigma) e^{-R/sigma} < 1e-12 at R/sigma ~ 31.
            return 34.0 * sigma;
        case ProfileFamily::Tophat:
            return sigma;
        default:
            return 0.0;
    }
    (void)d;
}

double RadialProfile::periodized(const TorusGrid& g, const Point& s) const {
    if (family == ProfileFamily::Zero) return 0.0;
    if (family == ProfileFamily::Tabulated)
        return interp_periodic(g, table, s);
    const double L = g.side();
    const int K = static_cast<int>(
        std::ceil((tail_radius(g.dim()) + 0.5 * L) / L));
    double sum = 0.0;
    if (g.dim() == 1) {
        for (int m = -K; m <= K; ++m)
            sum += value(std::abs(s[0] + m * L), 1);
    } else {
        for (int mx = -K; mx <= K; ++mx)
            for (int my = -K; my <= K; ++my)
                sum += value(std::hypot(s[0] + mx * L, s[1] + my * L), 2);
    }
    return sum;
}

std::string RadialProfile::family_name() const {
    switch (family) {
        case ProfileFamily::Gaussian: return "gaussian";
        case ProfileFamily::Exponential: return "exponential";
        case ProfileFamily::Tophat: return "tophat";
        case ProfileFamily::Tabulated: return "tabulated";
        case ProfileFamily::Zero: return "zero";
    }
    return "?";
}

Field periodized_table(const TorusGrid& g, const RadialProfile& p) {
    Field out(g.size(), 0.0);
    if (p.family == ProfileFamily::Zero) return out;
    if (p.family == ProfileFamily::Tabulated) {
        if (p.table.size() != g.size())
            throw ConfigError("tabulated profile: expected " +
                              std::to_string(g.size()) + " entries, got " +
                              std::to_string(p.table.size()));
        return p.table;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        Point s = g.coord(i);
        // Evaluate at the minimum image so the wrapped sum is centered.
        s[0] = g.min_image(s[0]);
        if (g.dim() == 2) s[1] = g.min_image(s[1]);
        out[i] = p.periodized(g, s);
    }
    return out;
}

} // namespace jumpdyn
