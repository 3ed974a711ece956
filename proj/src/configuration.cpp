#include "jumpdyn/configuration.hpp"

#include <cmath>
#include <sstream>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

std::string Configuration::serialize(int dim) const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out << ' ';
        out << points[i][0];
        if (dim == 2) out << ' ' << points[i][1];
    }
    return out.str();
}

Configuration Configuration::deserialize(const std::string& text, int dim) {
    std::istringstream in(text);
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (dim == 2 && vals.size() % 2 != 0)
        throw ConfigError("configuration: odd coordinate count for d=2");
    Configuration eta;
    if (dim == 1) {
        for (double x : vals) eta.points.push_back({x, 0.0});
    } else {
        for (std::size_t i = 0; i < vals.size(); i += 2)
            eta.points.push_back({vals[i], vals[i + 1]});
    }
    return eta;
}

namespace {

// Ordered-pair sum over a separation-resolved table lookup.
double pair_sum(const KernelModel& model, const Configuration& eta,
                bool plus) {
    const auto& pts = eta.points;
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            total += plus ? model.phi_plus(pts[i], pts[j])
                          : model.phi_minus(pts[i], pts[j]);
        }
    return total;
}

} // namespace

double total_attraction(const KernelModel& model, const Configuration& eta) {
    return pair_sum(model, eta, true);
}

double total_repulsion(const KernelModel& model, const Configuration& eta) {
    return pair_sum(model, eta, false);
}

double repulsion_at(const KernelModel& model, const Configuration& eta,
                    const Point& z) {
    double total = 0.0;
    for (const Point& x : eta.points) total += model.phi_minus(x, z);
    return total;
}

double total_activity(const KernelModel& model, const Configuration& eta) {
    return static_cast<double>(eta.size()) * model.m_a() +
           total_repulsion(model, eta);
}

double total_activity_shifted(const KernelModel& model,
                              const Configuration& eta, double omega) {
    if (omega < 0.0) throw ConfigError("omega: must be >= 0");
    return omega * static_cast<double>(eta.size()) +
           total_activity(model, eta);
}

Configuration random_configuration(const TorusGrid& g, int n,
                                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> un(0.0, g.side());
    Configuration eta;
    eta.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        Point p{un(rng), 0.0};
        if (g.dim() == 2) p[1] = un(rng);
        eta.points.push_back(p);
    }
    return eta;
}

Configuration clustered_configuration(const TorusGrid& g, int n,
                                      double spread, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> un(0.0, g.side());
    std::normal_distribution<double> jitter(0.0, spread > 0.0 ? spread : 1.0);
    Point center{un(rng), 0.0};
    if (g.dim() == 2) center[1] = un(rng);
    Configuration eta;
    eta.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        Point p = center;
        if (spread > 0.0) {
            p[0] = g.wrap(p[0] + jitter(rng));
            if (g.dim() == 2) p[1] = g.wrap(p[1] + jitter(rng));
        }
        eta.points.push_back(p);
    }
    return eta;
}

} // namespace jumpdyn
