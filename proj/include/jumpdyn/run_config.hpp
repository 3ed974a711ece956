#ifndef JUMPDYN_RUN_CONFIG_HPP
#define JUMPDYN_RUN_CONFIG_HPP

#include <optional>
#include <string>

#include "jumpdyn/hierarchy.hpp"
#include "jumpdyn/kernels.hpp"
#include "jumpdyn/simulator.hpp"

namespace jumpdyn {

//============================================================================
// RunConfig: parsed and validated experiment description (JSON file; schema
// documented in the README).  Every subcommand reads the sections it needs;
// "auto" entries are resolved from the model and the initial state.
//============================================================================

struct HierarchyConfig {
    int order = 2;
    ClosureRule closure = ClosureRule::ZeroTail;
    double dt = 1e-3;
    double t_end = 1.0;
    std::vector<double> theta_track;
    int output_stride = 0;
    // Initial condition: Poisson with density kappa, or tabulated (rho, q).
    double kappa = 1.0;
    bool tabulated_initial = false;
    double rho0 = 0.0;
    Field q0;
};

struct PicardConfig {
    std::optional<double> t;          // default 0.5 * T(theta*, theta0)
    int terms = 8;
    int time_steps = 256;
    int ladder_l = 3;
    double delta_fraction = 0.25;
    std::optional<double> theta;      // default theta* = theta0 + 1
    ClosureRule closure = ClosureRule::ZeroTail;
};

struct BoundsConfig {
    std::optional<double> theta0;     // absent: extract from initial state
    std::optional<double> theta;      // absent: theta0 + 1
    std::optional<double> omega;      // absent: from stability_check
    std::optional<double> mean_b;     // absent: from model
    std::optional<double> sup_b;
    std::optional<double> theta_pp;   // for operator-norm bounds
    std::optional<double> t;          // for q_norm_bound
};

struct RunConfig {
    TorusGrid domain;
    RadialProfile alpha, kappa1, kappa2;
    StabilityOptions stability;
    RunOptions simulate;
    HierarchyConfig hierarchy;
    PicardConfig picard;
    BoundsConfig bounds;
    std::string raw;                  // canonical serialized form (hashing)
};

// Parse + validate a config file.  Throws ConfigError with a line-precise
// message on malformed JSON and a field-path message on schema violations.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

KernelModel build_model(const RunConfig& cfg);

} // namespace jumpdyn

#endif
