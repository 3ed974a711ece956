#ifndef JUMPDYN_GRID_HPP
#define JUMPDYN_GRID_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace jumpdyn {

// A point on the torus.  Coordinate 1 is ignored when the domain is 1-d.
using Point = std::array<double, 2>;

//============================================================================
// TorusGrid: periodic box [0,L)^d with a uniform grid of M points per
// dimension.  All geometry (wrapping, minimum-image separations) lives here.
//============================================================================
class TorusGrid {
public:
    TorusGrid() = default;
    TorusGrid(int dimension, double side, int resolution);

    int dim() const { return d_; }
    double side() const { return L_; }
    int res() const { return M_; }
    double h() const { return h_; }            // grid spacing L/M
    double cell_volume() const;                // h^d
    double volume() const;                     // L^d
    std::size_t size() const { return size_; } // M^d grid points

    // Map a scalar coordinate into [0, L).
    double wrap(double x) const;
    // Minimum-image signed difference in [-L/2, L/2).
    double min_image(double dx) const;
    // Minimum-image separation vector y - x and Euclidean distance.
    Point separation(const Point& x, const Point& y) const;
    double distance(const Point& x, const Point& y) const;

    // Flat index <-> grid coordinates (row-major for d=2).
    std::size_t index(int i, int j = 0) const;
    Point coord(std::size_t idx) const;

    bool operator==(const TorusGrid& o) const {
        return d_ == o.d_ && L_ == o.L_ && M_ == o.M_;
    }

private:
    int d_ = 1;
    double L_ = 1.0;
    int M_ = 8;
    double h_ = 0.125;
    std::size_t size_ = 8;
};

//============================================================================
// Field: real scalar function sampled on the grid (flat storage, row-major).
// Used for kernel tables and for the separation-resolved pair function.
//============================================================================
using Field = std::vector<double>;

// Linear (d=1) / bilinear (d=2) interpolation of a periodic field at the
// separation vector s.  Exact at grid points.
double interp_periodic(const TorusGrid& g, const Field& f, const Point& s);

// h^d * sum of all entries (periodic rectangle quadrature).
double field_mass(const TorusGrid& g, const Field& f);

double field_max(const Field& f);
double field_min(const Field& f);

//============================================================================
// Spectral: FFT engine bound to one grid.  Plans are created once (single
// owner); transform execution on caller-provided buffers is thread-safe.
//============================================================================
class Spectral {
public:
    explicit Spectral(const TorusGrid& g);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    // Discrete Fourier transform scaled as a torus integral:
    //   fhat_k = h^d * sum_m f[m] e^{-i p_k . x_m},  p_k on the dual grid.
    // For even real fields the result is real; imag parts are returned so the
    // caller can assert they sit at the roundoff floor.
    std::vector<std::complex<double>> transform(const Field& f) const;

    // Circular convolution with continuum normalization:
    //   (f*g)[n] = h^d * sum_m f[m] g[n-m mod M].
    Field convolve(const Field& f, const Field& g) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

//============================================================================
// Deterministic seed derivation (one stream per replica / per purpose).
//============================================================================
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace jumpdyn

#endif
