#ifndef JUMPDYN_CONFIGURATION_HPP
#define JUMPDYN_CONFIGURATION_HPP

#include <string>
#include <vector>

#include "jumpdyn/kernels.hpp"

namespace jumpdyn {

//============================================================================
// Configuration: a finite point set eta on the torus.  Stored as an ordered
// list; every functional below is permutation invariant.  Coincident points
// are allowed.
//============================================================================
struct Configuration {
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    // Flat coordinate list "x0 y0 x1 y1 ..." (d=2) or "x0 x1 ..." (d=1),
    // used for fixtures and stability evidence.
    std::string serialize(int dim) const;
    static Configuration deserialize(const std::string& text, int dim);
};

// Total attraction / repulsion rates: ordered-pair sums of the pair rates,
//   Phi_sign(eta) = sum_{x in eta} sum_{y in eta, y != x} phi_sign(x, y).
double total_attraction(const KernelModel& model, const Configuration& eta);
double total_repulsion(const KernelModel& model, const Configuration& eta);

// sum_{x in eta} phi_minus(x, z): the repulsion exerted on a probe point z,
// shared by the simulator's rate cache and the hierarchy's escape term.
double repulsion_at(const KernelModel& model, const Configuration& eta,
                    const Point& z);

// Total activity Psi(eta) = |eta| * m_a + Phi_minus(eta) and its shifted
// version Psi_omega = omega |eta| + Psi.
double total_activity(const KernelModel& model, const Configuration& eta);
double total_activity_shifted(const KernelModel& model,
                              const Configuration& eta, double omega);

// Uniform i.i.d. configuration of n points on the torus.
Configuration random_configuration(const TorusGrid& g, int n,
                                   std::mt19937_64& rng);
// Clustered configuration: n points in a tight blob of the given spread
// (spread 0 gives exactly coincident points).
Configuration clustered_configuration(const TorusGrid& g, int n,
                                      double spread, std::mt19937_64& rng);

} // namespace jumpdyn

#endif
