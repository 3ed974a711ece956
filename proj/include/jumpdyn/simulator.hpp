#ifndef JUMPDYN_SIMULATOR_HPP
#define JUMPDYN_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "jumpdyn/configuration.hpp"
#include "jumpdyn/kernels.hpp"

namespace jumpdyn {

//============================================================================
// Continuous-time kinetic Monte Carlo for the jump process: particle i jumps
// x -> y with rate density a(x,y) (1 + sum_{z != x} b(x,y|z)).  The per-
// particle escape rates
//     r_i = m_a + sum_{j != i} phi_minus(x_i, x_j)
// are cached and updated incrementally in O(N) per event, with a full O(N^2)
// rebuild every `rebuild_interval` events to stop drift.
//============================================================================

struct SimOptions {
    long rebuild_interval = 10000;   // events between full rate rebuilds
    long max_events = 100000000;     // per-replica event budget
    bool audit = false;              // verify cache identities every event
    double audit_tolerance = 1e-9;
};

// Which branch of the destination mixture produced a sample; exposed so the
// law tests can check branch frequencies.
enum class DestinationBranch { Free, Kappa1, Kappa2 };

class SimState {
public:
    SimState(const KernelModel& model, std::uint64_t seed,
             SimOptions opts = {});

    // --- initialization ---------------------------------------------------
    void init_poisson(double density);        // N ~ Poisson(density * volume)
    void init_fixed(int n);                   // exactly n uniform points
    void init_configuration(const Configuration& eta);

    // --- state ------------------------------------------------------------
    const std::vector<Point>& positions() const { return pos_; }
    int count() const { return static_cast<int>(pos_.size()); }
    double time() const { return time_; }
    long events() const { return events_; }
    double total_rate() const { return total_rate_; }
    const std::vector<double>& rates() const { return rates_; }
    long audit_failures() const { return audit_failures_; }
    bool budget_exhausted() const { return budget_exhausted_; }

    // --- dynamics ---------------------------------------------------------
    // One jump event: advances the clock by an Exp(total_rate) waiting time,
    // moves one particle, updates the rate cache.  Returns false when the
    // event budget is exhausted (state untouched).
    bool step();
    // Run until the clock passes t_end (the final waiting time that would
    // overshoot is consumed; the clock is clamped to t_end, matching the
    // CTMC law at fixed times).
    void run_until(double t_end);

    // Destination sampler for particle i (public for the law tests).
    Point sample_destination(int i, DestinationBranch* branch = nullptr);

    // Full O(N^2) rebuild of the rate cache.
    void rebuild_rates();
    // Max |cached - recomputed| over particles (audit helper).
    double cache_drift() const;

    std::mt19937_64& rng() { return rng_; }

private:
    const KernelModel& model_;
    SimOptions opts_;
    std::mt19937_64 rng_;
    std::vector<Point> pos_;
    std::vector<double> rates_;
    double total_rate_ = 0.0;
    double time_ = 0.0;
    long events_ = 0;
    long since_rebuild_ = 0;
    long audit_failures_ = 0;
    bool budget_exhausted_ = false;

    int pick_particle(double u) const;
    // Sample a destination for particle i, move it, refresh the rate cache.
    void do_jump(int i);
};

//============================================================================
// Replica estimators.
//============================================================================

// One radial pair-distance histogram: ordered pairs binned by minimum-image
// distance; estimate[b] = count[b] / (V * shell_volume[b]) estimates the
// 2-point correlation density (kappa^2 for Poisson).
struct PairHistogram {
    std::vector<double> bin_left;    // nb+1 edges
    std::vector<double> count;       // ordered-pair counts
    std::vector<double> estimate;    // correlation-density estimate per bin
};

struct CorrelationEstimate {
    double time = 0.0;
    int replicas = 0;
    double density = 0.0;            // mean of N/V over replicas
    double density_se = 0.0;
    std::vector<double> bin_left;    // histogram bin left edges
    std::vector<double> bin_center;
    std::vector<double> g;           // mean pair-correlation density per bin
    std::vector<double> g_se;
    double mean_pairs = 0.0;         // mean ordered-pair count per replica
};

struct RunOptions {
    double density = 1.0;
    std::optional<int> fixed_count;  // binomial init instead of Poisson
    double t_end = 1.0;
    std::vector<double> sample_times;   // defaults to {t_end}
    int replicas = 16;
    std::uint64_t seed = 1;
    int bins = 25;
    double r_max = 0.0;              // 0 -> L/2
    int threads = 0;                 // 0 -> hardware choice, capped
    SimOptions sim;
};

struct RunResult {
    std::vector<CorrelationEstimate> estimates;  // one per sample time
    long total_events = 0;
    long audit_failures = 0;
    bool budget_exhausted = false;   // any replica hit the event cap
    double min_reached_time = 0.0;
};

// Independent replicas with seed-derived streams; aggregation is ordered by
// replica index so results are identical for any thread count.
RunResult run_replicas(const KernelModel& model, const RunOptions& opts);

// Pair histogram of a single configuration (exposed for tests).
PairHistogram pair_histogram(const TorusGrid& g,
                             const std::vector<Point>& pts,
                             int bins, double r_max);

} // namespace jumpdyn

#endif
