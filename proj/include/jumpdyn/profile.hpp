#ifndef JUMPDYN_PROFILE_HPP
#define JUMPDYN_PROFILE_HPP

#include <string>
#include <vector>

#include "jumpdyn/grid.hpp"

namespace jumpdyn {

//============================================================================
// RadialProfile: nonnegative radial function on R^d with finite mass, the
// building block for the jump kernel and both influence kernels.  Analytic
// families (gaussian, exponential, tophat) are normalized so that the
// continuum integral equals `mass`; a tabulated profile is given directly on
// the torus grid and its mass is whatever the grid quadrature says.
//============================================================================
enum class ProfileFamily { Gaussian, Exponential, Tophat, Tabulated, Zero };

struct RadialProfile {
    ProfileFamily family = ProfileFamily::Zero;
    double sigma = 1.0;    // width parameter (length units)
    double mass = 0.0;     // continuum integral (dimensionless)
    Field table;           // Tabulated only: values on the torus grid

    static RadialProfile gaussian(double sigma, double mass = 1.0);
    static RadialProfile exponential(double sigma, double mass = 1.0);
    static RadialProfile tophat(double sigma, double mass = 1.0);
    static RadialProfile tabulated(Field values);
    static RadialProfile zero();

    bool is_zero() const { return family == ProfileFamily::Zero; }
    bool is_tabulated() const { return family == ProfileFamily::Tabulated; }

    // Density value at radius r >= 0 in dimension d (analytic families).
    double value(double r, int d) const;

    // Radius beyond which the tail mass is below 1e-12 relative to `mass`;
    // controls how many wrapped images the periodization keeps.
    double tail_radius(int d) const;

    // Periodized evaluation at a separation vector: wrapped-image sum
    // truncated per tail_radius.  Tabulated profiles interpolate their table.
    double periodized(const TorusGrid& g, const Point& s) const;

    std::string family_name() const;
};

// Sample the periodized profile on the separation grid.  Entry i holds the
// value at separation coord(i); even symmetry comes out exact because the
// image sums match across s and -s.
Field periodized_table(const TorusGrid& g, const RadialProfile& p);

} // namespace jumpdyn

#endif
