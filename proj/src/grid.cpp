#include "jumpdyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fftw3.h>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

//============================================================================
// TorusGrid
//============================================================================

TorusGrid::TorusGrid(int dimension, double side, int resolution)
    : d_(dimension), L_(side), M_(resolution) {
    if (d_ != 1 && d_ != 2)
        throw ConfigError("domain.dimension: must be 1 or 2");
    if (!(L_ > 0.0))
        throw ConfigError("domain.length: must be > 0");
    if (M_ < 8 || M_ % 2 != 0)
        throw ConfigError("domain.resolution: must be >= 8 and even");
    h_ = L_ / M_;
    size_ = 1;
    for (int i = 0; i < d_; ++i) size_ *= static_cast<std::size_t>(M_);
}

double TorusGrid::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < d_; ++i) v *= h_;
    return v;
}

double TorusGrid::volume() const {
    double v = 1.0;
    for (int i = 0; i < d_; ++i) v *= L_;
    return v;
}

double TorusGrid::wrap(double x) const {
    double y = std::fmod(x, L_);
    if (y < 0.0) y += L_;
    if (y >= L_) y = 0.0;   // guard against fmod returning exactly L
    return y;
}

double TorusGrid::min_image(double dx) const {
    double y = std::fmod(dx, L_);
    if (y < -0.5 * L_) y += L_;
    else if (y >= 0.5 * L_) y -= L_;
    return y;
}

Point TorusGrid::separation(const Point& x, const Point& y) const {
    Point s{0.0, 0.0};
    for (int c = 0; c < d_; ++c) s[c] = min_image(y[c] - x[c]);
    return s;
}

double TorusGrid::distance(const Point& x, const Point& y) const {
    Point s = separation(x, y);
    return d_ == 1 ? std::abs(s[0]) : std::hypot(s[0], s[1]);
}

std::size_t TorusGrid::index(int i, int j) const {
    auto m = [this](int v) {
        int r = v % M_;
        return r < 0 ? r + M_ : r;
    };
    if (d_ == 1) return static_cast<std::size_t>(m(i));
    return static_cast<std::size_t>(m(i)) * M_ + m(j);
}

Point TorusGrid::coord(std::size_t idx) const {
    if (d_ == 1) return {static_cast<double>(idx) * h_, 0.0};
    return {static_cast<double>(idx / M_) * h_,
            static_cast<double>(idx % M_) * h_};
}

//============================================================================
// Field helpers
//============================================================================

double interp_periodic(const TorusGrid& g, const Field& f, const Point& s) {
    const int M = g.res();
    const double h = g.h();
    // Fractional grid position of each wrapped coordinate.
    double u0 = g.wrap(s[0]) / h;
    int i0 = static_cast<int>(u0);
    if (i0 >= M) i0 = M - 1;
    double fx = u0 - i0;
    if (g.dim() == 1) {
        double a = f[static_cast<std::size_t>(i0)];
        double b = f[static_cast<std::size_t>((i0 + 1) % M)];
        return a + fx * (b - a);
    }
    double u1 = g.wrap(s[1]) / h;
    int j0 = static_cast<int>(u1);
    if (j0 >= M) j0 = M - 1;
    double fy = u1 - j0;
    const int i1 = (i0 + 1) % M, j1 = (j0 + 1) % M;
    double v00 = f[g.index(i0, j0)], v01 = f[g.index(i0, j1)];
    double v10 = f[g.index(i1, j0)], v11 = f[g.index(i1, j1)];
    double a = v00 + fy * (v01 - v00);
    double b = v10 + fy * (v11 - v10);
    return a + fx * (b - a);
}

double field_mass(const TorusGrid& g, const Field& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * g.cell_volume();
}

double field_max(const Field& f) {
    return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end());
}

double field_min(const Field& f) {
    return f.empty() ? 0.0 : *std::min_element(f.begin(), f.end());
}

//============================================================================
// Spectral (FFTW wrapper)
//============================================================================

struct Spectral::Impl {
    TorusGrid g;
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex* buf = nullptr;   // plan template buffer

    explicit Impl(const TorusGrid& grid) : g(grid) {
        const std::size_t n = g.size();
        buf = fftw_alloc_complex(n);
        if (g.dim() == 1) {
            fwd = fftw_plan_dft_1d(g.res(), buf, buf, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
            bwd = fftw_plan_dft_1d(g.res(), buf, buf, FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_2d(g.res(), g.res(), buf, buf, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
            bwd = fftw_plan_dft_2d(g.res(), g.res(), buf, buf, FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
        }
    }
    ~Impl() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
};

Spectral::Spectral(const TorusGrid& g) : impl_(std::make_unique<Impl>(g)) {}
Spectral::~Spectral() = default;

std::vector<std::complex<double>> Spectral::transform(const Field& f) const {
    const std::size_t n = impl_->g.size();
    fftw_complex* io = fftw_alloc_complex(n);
    for (std::size_t i = 0; i < n; ++i) {
        io[i][0] = f[i];
        io[i][1] = 0.0;
    }
    fftw_execute_dft(impl_->fwd, io, io);
    std::vector<std::complex<double>> out(n);
    const double scale = impl_->g.cell_volume();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = {io[i][0] * scale, io[i][1] * scale};
    fftw_free(io);
    return out;
}

Field Spectral::convolve(const Field& f, const Field& g) const {
    const std::size_t n = impl_->g.size();
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i][0] = f[i]; a[i][1] = 0.0;
        b[i][0] = g[i]; b[i][1] = 0.0;
    }
    fftw_execute_dft(impl_->fwd, a, a);
    fftw_execute_dft(impl_->fwd, b, b);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i][0] * b[i][0] - a[i][1] * b[i][1];
        const double im = a[i][0] * b[i][1] + a[i][1] * b[i][0];
        a[i][0] = re; a[i][1] = im;
    }
    fftw_execute_dft(impl_->bwd, a, a);
    Field out(n);
    const double scale = impl_->g.cell_volume() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i][0] * scale;
    fftw_free(a);
    fftw_free(b);
    return out;
}

//============================================================================
// Seed mixing (splitmix64 over the pair)
//============================================================================

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace jumpdyn
