#include "jumpdyn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

//============================================================================
// SimState
//============================================================================

SimState::SimState(const KernelModel& model, std::uint64_t seed,
                   SimOptions opts)
    : model_(model), opts_(opts), rng_(seed) {}

void SimState::init_poisson(double density) {
    if (!(density > 0.0)) throw ConfigError("density: must be > 0");
    std::poisson_distribution<int> pn(density * model_.grid().volume());
    init_fixed(pn(rng_));
}

void SimState::init_fixed(int n) {
    if (n < 0) throw ConfigError("particle count: must be >= 0");
    const TorusGrid& g = model_.grid();
    std::uniform_real_distribution<double> un(0.0, g.side());
    pos_.clear();
    pos_.reserve(n);
    for (int i = 0; i < n; ++i) {
        Point p{un(rng_), 0.0};
        if (g.dim() == 2) p[1] = un(rng_);
        pos_.push_back(p);
    }
    time_ = 0.0;
    events_ = 0;
    budget_exhausted_ = false;
    rebuild_rates();
}

void SimState::init_configuration(const Configuration& eta) {
    pos_ = eta.points;
    for (Point& p : pos_) {
        p[0] = model_.grid().wrap(p[0]);
        p[1] = model_.grid().dim() == 2 ? model_.grid().wrap(p[1]) : 0.0;
    }
    time_ = 0.0;
    events_ = 0;
    budget_exhausted_ = false;
    rebuild_rates();
}

void SimState::rebuild_rates() {
    const int n = count();
    rates_.assign(n, model_.m_a());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            rates_[i] += model_.phi_minus(pos_[i], pos_[j]);
        }
    total_rate_ = 0.0;
    for (double r : rates_) total_rate_ += r;
    since_rebuild_ = 0;
}

double SimState::cache_drift() const {
    const int n = count();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = model_.m_a();
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            r += model_.phi_minus(pos_[i], pos_[j]);
        }
        worst = std::max(worst, std::abs(r - rates_[i]));
    }
    return worst;
}

int SimState::pick_particle(double u) const {
    // Roulette over the cached rates; u is uniform on [0, total_rate).
    double acc = 0.0;
    const int n = count();
    for (int i = 0; i < n; ++i) {
        acc += rates_[i];
        if (u < acc) return i;
    }
    return n - 1;
}

Point SimState::sample_destination(int i, DestinationBranch* branch) {
    const TorusGrid& g = model_.grid();
    const Point& x = pos_[i];
    std::uniform_real_distribution<double> un(0.0, 1.0);

    // Mixture over the additive parts of the destination density
    //   a(x,y) (1 + sum_z [kappa1(x-z) + kappa2(y-z)]):
    //   weight m_a                  -> y ~ alpha(. - x)
    //   weight kappa1(x-z), each z  -> y ~ alpha(. - x)     (z-independent)
    //   weight (alpha*kappa2)(x-z)  -> density prop. to a(x,y) kappa2(y-z),
    //       sampled by rejection with the exact envelope max kappa2.
    double target = un(rng_) * rates_[i] - model_.m_a();
    int partner = -1;
    bool kappa2_branch = false;
    if (target >= 0.0) {
        const int n = count();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Point s = g.separation(pos_[j], x);
            const double w1 = model_.kappa1_part(s);
            if (target < w1) { partner = j; break; }
            target -= w1;
            const double w2 = model_.conv_alpha_kappa2_part(s);
            if (target < w2) {
                partner = j;
                kappa2_branch = true;
                break;
            }
            target -= w2;
        }
        // Roulette overshoot from roundoff falls through to the free branch.
    }

    if (branch)
        *branch = partner < 0 ? DestinationBranch::Free
                 : kappa2_branch ? DestinationBranch::Kappa2
                                 : DestinationBranch::Kappa1;

    auto free_draw = [&]() {
        const Point u = model_.sample_alpha(rng_);
        Point y{g.wrap(x[0] + u[0]), 0.0};
        if (g.dim() == 2) y[1] = g.wrap(x[1] + u[1]);
        return y;
    };

    if (partner < 0 || !kappa2_branch) return free_draw();

    // Rejection branch: propose y ~ alpha(. - x), accept with probability
    // kappa2(y - z) / max kappa2.  The mean acceptance is the branch weight
    // over the envelope; if that is pathologically small the run aborts
    // rather than spinning.
    const Point z = pos_[partner];
    const double envelope = model_.sup_kappa2();
    if (!(model_.conv_alpha_kappa2_part(g.separation(z, x)) >
          1e-6 * envelope))
        throw NumericalError(
            "destination sampler: expected acceptance rate below 1e-6 "
            "(kernel overlap pathologically small)");
    for (long trial = 0; trial < 100000000L; ++trial) {
        const Point y = free_draw();
        const double k2 = model_.kappa2_value(g.separation(z, y));
        if (un(rng_) * envelope <= k2) return y;
    }
    throw NumericalError("destination sampler: rejection loop exhausted");
}

void SimState::do_jump(int i) {
    const Point dest = sample_destination(i);
    const Point old = pos_[i];
    const int n = count();
    // Incremental O(N) update: swap the pair terms involving particle i.
    double new_ri = model_.m_a();
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double delta = model_.phi_minus(pos_[j], dest) -
                             model_.phi_minus(pos_[j], old);
        rates_[j] += delta;
        total_rate_ += delta;
        new_ri += model_.phi_minus(dest, pos_[j]);
    }
    total_rate_ += new_ri - rates_[i];
    rates_[i] = new_ri;
    pos_[i] = dest;
    ++events_;
    if (++since_rebuild_ >= opts_.rebuild_interval) rebuild_rates();
    if (opts_.audit &&
        cache_drift() > opts_.audit_tolerance * std::max(1.0, total_rate_))
        ++audit_failures_;
}

bool SimState::step() {
    if (count() == 0) return false;
    if (events_ >= opts_.max_events) {
        budget_exhausted_ = true;
        return false;
    }
    std::uniform_real_distribution<double> un(0.0, 1.0);
    std::exponential_distribution<double> ex(1.0);
    time_ += ex(rng_) / total_rate_;
    do_jump(pick_particle(un(rng_) * total_rate_));
    return true;
}

void SimState::run_until(double t_end) {
    std::uniform_real_distribution<double> un(0.0, 1.0);
    std::exponential_distribution<double> ex(1.0);
    while (time_ < t_end) {
        if (count() == 0 || !(total_rate_ > 0.0)) {
            time_ = t_end;
            break;
        }
        if (events_ >= opts_.max_events) {
            budget_exhausted_ = true;
            break;
        }
        const double wait = ex(rng_) / total_rate_;
        if (time_ + wait > t_end) {
            // No further event before t_end: the fixed-time state is the
            // current one, so the overshooting jump must not be applied.
            time_ = t_end;
            break;
        }
        time_ += wait;
        do_jump(pick_particle(un(rng_) * total_rate_));
    }
}

//============================================================================
// Replica driver
//============================================================================

PairHistogram pair_histogram(const TorusGrid& g,
                             const std::vector<Point>& pts,
                             int bins, double r_max) {
    PairHistogram h;
    h.bin_left.resize(bins + 1);
    h.count.assign(bins, 0.0);
    h.estimate.assign(bins, 0.0);
    const double dr = r_max / bins;
    for (int b = 0; b <= bins; ++b) h.bin_left[b] = b * dr;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double r = g.distance(pts[i], pts[j]);
            if (r >= r_max) continue;
            h.count[std::min(bins - 1, static_cast<int>(r / dr))] += 1.0;
        }
    const double V = g.volume();
    constexpr double pi = 3.14159265358979323846;
    for (int b = 0; b < bins; ++b) {
        const double lo = h.bin_left[b], hi = h.bin_left[b + 1];
        // Shell volume: 2 dr in d=1 (both signs), pi (hi^2 - lo^2) in d=2.
        const double shell =
            g.dim() == 1 ? 2.0 * (hi - lo) : pi * (hi * hi - lo * lo);
        h.estimate[b] = h.count[b] / (V * shell);
    }
    return h;
}

RunResult run_replicas(const KernelModel& model, const RunOptions& opts) {
    if (!(opts.t_end > 0.0)) throw ConfigError("simulate.t_end: must be > 0");
    if (opts.replicas < 1)
        throw ConfigError("simulate.replicas: must be >= 1");
    if (opts.bins < 1) throw ConfigError("simulate.bins: must be >= 1");
    const TorusGrid& g = model.grid();
    std::vector<double> stimes = opts.sample_times;
    if (stimes.empty()) stimes = {opts.t_end};
    std::sort(stimes.begin(), stimes.end());
    for (double t : stimes)
        if (t < 0.0 || t > opts.t_end)
            throw ConfigError("simulate.sample_times: must lie in [0, t_end]");
    const double r_max = opts.r_max > 0.0 ? opts.r_max : 0.5 * g.side();

    const int R = opts.replicas;
    const std::size_t S = stimes.size();
    // Per sample time and replica: density, per-bin estimates, pair count.
    std::vector<std::vector<double>> density(S, std::vector<double>(R));
    std::vector<std::vector<double>> pairs(S, std::vector<double>(R));
    std::vector<std::vector<std::vector<double>>> gbins(
        S, std::vector<std::vector<double>>(R));
    std::vector<long> events(R, 0), audits(R, 0);
    std::vector<char> exhausted(R, 0);
    std::vector<double> reached(R, 0.0);

    auto worker = [&](int r) {
        SimState sim(model, mix_seed(opts.seed, r), opts.sim);
        if (opts.fixed_count) sim.init_fixed(*opts.fixed_count);
        else sim.init_poisson(opts.density);
        for (std::size_t s = 0; s < S; ++s) {
            sim.run_until(stimes[s]);
            const auto& pts = sim.positions();
            density[s][r] = pts.size() / g.volume();
            PairHistogram h = pair_histogram(g, pts, opts.bins, r_max);
            gbins[s][r] = h.estimate;
            double pc = 0.0;
            for (double c : h.count) pc += c;
            pairs[s][r] = pc;
        }
        events[r] = sim.events();
        audits[r] = sim.audit_failures();
        exhausted[r] = sim.budget_exhausted() ? 1 : 0;
        reached[r] = sim.time();
    };

    int threads = opts.threads;
    if (threads <= 0)
        threads = static_cast<int>(
            std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
    threads = std::min(threads, R);
    if (threads <= 1) {
        for (int r = 0; r < R; ++r) worker(r);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                for (int r = t; r < R; r += threads) worker(r);
            });
        for (auto& th : pool) th.join();
    }

    RunResult res;
    res.min_reached_time = *std::min_element(reached.begin(), reached.end());
    for (int r = 0; r < R; ++r) {
        res.total_events += events[r];
        res.audit_failures += audits[r];
        if (exhausted[r]) res.budget_exhausted = true;
    }
    const double dr = r_max / opts.bins;
    auto mean_se = [R](const std::vector<double>& vals, double& mean,
                       double& se) {
        mean = 0.0;
        for (double v : vals) mean += v;
        mean /= R;
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        se = R > 1 ? std::sqrt(var / (R - 1.0) / R) : 0.0;
    };
    for (std::size_t s = 0; s < S; ++s) {
        CorrelationEstimate est;
        est.time = stimes[s];
        est.replicas = R;
        mean_se(density[s], est.density, est.density_se);
        est.bin_left.resize(opts.bins);
        est.bin_center.resize(opts.bins);
        est.g.resize(opts.bins);
        est.g_se.resize(opts.bins);
        std::vector<double> col(R);
        for (int b = 0; b < opts.bins; ++b) {
            est.bin_left[b] = b * dr;
            est.bin_center[b] = (b + 0.5) * dr;
            for (int r = 0; r < R; ++r) col[r] = gbins[s][r][b];
            mean_se(col, est.g[b], est.g_se[b]);
        }
        double mp = 0.0;
        for (int r = 0; r < R; ++r) mp += pairs[s][r];
        est.mean_pairs = mp / R;
        res.estimates.push_back(std::move(est));
    }
    return res;
}

} // namespace jumpdyn
