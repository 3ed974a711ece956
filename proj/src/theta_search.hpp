#ifndef JUMPDYN_SRC_THETA_SEARCH_HPP
#define JUMPDYN_SRC_THETA_SEARCH_HPP

#include "jumpdyn/errors.hpp"

namespace jumpdyn {
namespace detail {

// Least theta with norm(theta) <= 1 + 1e-12, by bracketing + bisection.
// Relies on the scale norm being nonincreasing in theta.  Returns the
// documented floor (-1e4) when every scale already satisfies the target
// (degenerate near-zero states); throws when no scale up to 1e4 does.
template <typename NormFn>
double least_theta(NormFn&& norm_at) {
    const double target = 1.0 + 1e-12;
    double hi = 1.0;
    while (norm_at(hi) > target) {
        hi *= 2.0;
        if (hi > 1e4)
            throw NumericalError(
                "theta0 extraction: no scale up to 1e4 brings the norm "
                "under 1; the state is not of Ruelle type");
    }
    double lo = -1.0;
    while (norm_at(lo) <= target) {
        lo *= 2.0;
        if (lo < -1e4) return -1e4;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (norm_at(mid) <= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

} // namespace detail
} // namespace jumpdyn

#endif
