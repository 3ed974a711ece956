#include "jumpdyn/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            fail(path.empty() ? it.key() : path + "." + it.key(),
                 "unknown key");
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double number_or(const json& obj, const std::string& key,
                 const std::string& path, double fallback) {
    if (!obj.contains(key)) return fallback;
    return get_number(obj.at(key), path + "." + key);
}

long long integer_or(const json& obj, const std::string& key,
                     const std::string& path, long long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<long long>();
}

bool bool_or(const json& obj, const std::string& key, const std::string& path,
             bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
    return v.get<bool>();
}

// "auto" / null / absent -> empty optional; otherwise a number.
std::optional<double> optional_number(const json& obj, const std::string& key,
                                      const std::string& path) {
    if (!obj.contains(key)) return {};
    const json& v = obj.at(key);
    if (v.is_null()) return {};
    if (v.is_string() && v.get<std::string>() == "auto") return {};
    if (!v.is_number())
        fail(path + "." + key, "expected a number, null or \"auto\"");
    return v.get<double>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

RadialProfile parse_profile(const json& j, const std::string& path,
                            const TorusGrid& grid) {
    if (!j.is_object()) fail(path, "expected an object");
    check_keys(j, path, {"family", "sigma", "mass", "values"});
    if (!j.contains("family")) fail(path + ".family", "required");
    const json& fam = j.at("family");
    if (!fam.is_string()) fail(path + ".family", "expected a string");
    const std::string f = fam.get<std::string>();
    const double mass = number_or(j, "mass", path, 1.0);
    const bool needs_sigma =
        f == "gaussian" || f == "exponential" || f == "tophat";
    if (needs_sigma && !j.contains("sigma"))
        fail(path + ".sigma", "required for the " + f + " family");
    const double sigma = number_or(j, "sigma", path, 1.0);
    if (f == "gaussian") return RadialProfile::gaussian(sigma, mass);
    if (f == "exponential") return RadialProfile::exponential(sigma, mass);
    if (f == "tophat") return RadialProfile::tophat(sigma, mass);
    if (f == "zero") return RadialProfile::zero();
    if (f == "tabulated") {
        if (!j.contains("values")) fail(path + ".values", "required");
        Field vals = number_list(j.at("values"), path + ".values");
        if (vals.size() != grid.size())
            fail(path + ".values",
                 "expected " + std::to_string(grid.size()) +
                     " entries (one per grid point)");
        return RadialProfile::tabulated(std::move(vals));
    }
    fail(path + ".family",
         "unknown family \"" + f +
             "\" (gaussian, exponential, tophat, tabulated, zero)");
}

ClosureRule parse_closure(const json& obj, const std::string& key,
                          const std::string& path, ClosureRule fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string())
        fail(path + "." + key, "expected \"zero_tail\" or \"mean_field\"");
    const std::string s = v.get<std::string>();
    if (s == "zero_tail") return ClosureRule::ZeroTail;
    if (s == "mean_field") return ClosureRule::MeanField;
    fail(path + "." + key,
         "unknown closure \"" + s + "\" (zero_tail, mean_field)");
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Convert the byte offset into a line:column pair.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream err;
        err << origin << ":" << line << ":" << col
            << ": malformed JSON: " << e.what();
        throw ConfigError(err.str());
    }
    if (!j.is_object()) fail(origin, "top level must be an object");
    check_keys(j, "", {"domain", "kernels", "stability", "simulate",
                       "hierarchy", "picard", "bounds"});

    RunConfig cfg;
    cfg.raw = j.dump();

    // --- domain -------------------------------------------------------------
    if (!j.contains("domain")) fail("domain", "required section");
    const json& dom = j.at("domain");
    if (!dom.is_object()) fail("domain", "expected an object");
    check_keys(dom, "domain", {"dimension", "length", "resolution"});
    cfg.domain = TorusGrid(
        static_cast<int>(integer_or(dom, "dimension", "domain", 1)),
        number_or(dom, "length", "domain", 0.0),
        static_cast<int>(integer_or(dom, "resolution", "domain", 0)));

    // --- kernels ------------------------------------------------------------
    if (!j.contains("kernels")) fail("kernels", "required section");
    const json& ker = j.at("kernels");
    if (!ker.is_object()) fail("kernels", "expected an object");
    check_keys(ker, "kernels", {"alpha", "kappa1", "kappa2"});
    if (!ker.contains("alpha")) fail("kernels.alpha", "required");
    cfg.alpha = parse_profile(ker.at("alpha"), "kernels.alpha", cfg.domain);
    cfg.kappa1 = ker.contains("kappa1")
                     ? parse_profile(ker.at("kappa1"), "kernels.kappa1",
                                     cfg.domain)
                     : RadialProfile::zero();
    cfg.kappa2 = ker.contains("kappa2")
                     ? parse_profile(ker.at("kappa2"), "kernels.kappa2",
                                     cfg.domain)
                     : RadialProfile::zero();

    // --- stability ----------------------------------------------------------
    if (j.contains("stability")) {
        const json& st = j.at("stability");
        if (!st.is_object()) fail("stability", "expected an object");
        check_keys(st, "stability",
                   {"sample_budget", "max_config_size", "seed"});
        cfg.stability.sample_budget = static_cast<int>(integer_or(
            st, "sample_budget", "stability", cfg.stability.sample_budget));
        cfg.stability.max_config_size = static_cast<int>(
            integer_or(st, "max_config_size", "stability",
                       cfg.stability.max_config_size));
        cfg.stability.seed = static_cast<std::uint64_t>(integer_or(
            st, "seed", "stability",
            static_cast<long long>(cfg.stability.seed)));
        if (cfg.stability.sample_budget < 1)
            fail("stability.sample_budget", "must be >= 1");
        if (cfg.stability.max_config_size < 2)
            fail("stability.max_config_size", "must be >= 2");
    }

    // --- simulate -----------------------------------------------------------
    if (j.contains("simulate")) {
        const json& si = j.at("simulate");
        if (!si.is_object()) fail("simulate", "expected an object");
        check_keys(si, "simulate",
                   {"density", "fixed_count", "t_end", "sample_times",
                    "replicas", "seed", "bins", "r_max", "threads",
                    "rebuild_interval", "max_events", "audit"});
        RunOptions& s = cfg.simulate;
        s.density = number_or(si, "density", "simulate", s.density);
        if (si.contains("fixed_count") && !si.at("fixed_count").is_null())
            s.fixed_count = static_cast<int>(
                integer_or(si, "fixed_count", "simulate", 0));
        s.t_end = number_or(si, "t_end", "simulate", s.t_end);
        if (si.contains("sample_times"))
            s.sample_times =
                number_list(si.at("sample_times"), "simulate.sample_times");
        s.replicas = static_cast<int>(
            integer_or(si, "replicas", "simulate", s.replicas));
        s.seed = static_cast<std::uint64_t>(integer_or(
            si, "seed", "simulate", static_cast<long long>(s.seed)));
        s.bins = static_cast<int>(integer_or(si, "bins", "simulate", s.bins));
        s.r_max = number_or(si, "r_max", "simulate", s.r_max);
        s.threads = static_cast<int>(
            integer_or(si, "threads", "simulate", s.threads));
        s.sim.rebuild_interval = integer_or(si, "rebuild_interval",
                                            "simulate",
                                            s.sim.rebuild_interval);
        s.sim.max_events =
            integer_or(si, "max_events", "simulate", s.sim.max_events);
        s.sim.audit = bool_or(si, "audit", "simulate", s.sim.audit);
        if (s.sim.rebuild_interval < 1)
            fail("simulate.rebuild_interval", "must be >= 1");
        if (s.sim.max_events < 1) fail("simulate.max_events", "must be >= 1");
    }

    // --- hierarchy ----------------------------------------------------------
    if (j.contains("hierarchy")) {
        const json& hi = j.at("hierarchy");
        if (!hi.is_object()) fail("hierarchy", "expected an object");
        check_keys(hi, "hierarchy",
                   {"order", "closure", "dt", "t_end", "theta_track",
                    "output_stride", "initial"});
        HierarchyConfig& h = cfg.hierarchy;
        h.order = static_cast<int>(
            integer_or(hi, "order", "hierarchy", h.order));
        if (h.order < 1 || h.order > 3)
            fail("hierarchy.order", "must be 1, 2 or 3");
        h.closure = parse_closure(hi, "closure", "hierarchy", h.closure);
        h.dt = number_or(hi, "dt", "hierarchy", h.dt);
        h.t_end = number_or(hi, "t_end", "hierarchy", h.t_end);
        if (hi.contains("theta_track"))
            h.theta_track =
                number_list(hi.at("theta_track"), "hierarchy.theta_track");
        h.output_stride = static_cast<int>(
            integer_or(hi, "output_stride", "hierarchy", h.output_stride));
        if (hi.contains("initial")) {
            const json& in = hi.at("initial");
            if (!in.is_object()) fail("hierarchy.initial",
                                      "expected an object");
            check_keys(in, "hierarchy.initial", {"type", "kappa", "rho", "q"});
            std::string type = "poisson";
            if (in.contains("type")) {
                if (!in.at("type").is_string())
                    fail("hierarchy.initial.type", "expected a string");
                type = in.at("type").get<std::string>();
            }
            if (type == "poisson") {
                h.tabulated_initial = false;
                h.kappa = number_or(in, "kappa", "hierarchy.initial",
                                    h.kappa);
                if (!(h.kappa >= 0.0))
                    fail("hierarchy.initial.kappa", "must be >= 0");
            } else if (type == "tabulated") {
                h.tabulated_initial = true;
                if (!in.contains("rho") || !in.contains("q"))
                    fail("hierarchy.initial",
                         "tabulated initial state needs rho and q");
                h.rho0 = get_number(in.at("rho"), "hierarchy.initial.rho");
                h.q0 = number_list(in.at("q"), "hierarchy.initial.q");
                if (h.q0.size() != cfg.domain.size())
                    fail("hierarchy.initial.q",
                         "expected " + std::to_string(cfg.domain.size()) +
                             " entries (one per grid point)");
            } else {
                fail("hierarchy.initial.type",
                     "unknown type \"" + type + "\" (poisson, tabulated)");
            }
        }
    }

    // --- picard -------------------------------------------------------------
    if (j.contains("picard")) {
        const json& pi = j.at("picard");
        if (!pi.is_object()) fail("picard", "expected an object");
        check_keys(pi, "picard",
                   {"t", "terms", "time_steps", "ladder_l", "delta_fraction",
                    "theta", "closure"});
        PicardConfig& p = cfg.picard;
        p.t = optional_number(pi, "t", "picard");
        p.terms = static_cast<int>(
            integer_or(pi, "terms", "picard", p.terms));
        p.time_steps = static_cast<int>(
            integer_or(pi, "time_steps", "picard", p.time_steps));
        p.ladder_l = static_cast<int>(
            integer_or(pi, "ladder_l", "picard", p.ladder_l));
        p.delta_fraction = number_or(pi, "delta_fraction", "picard",
                                     p.delta_fraction);
        p.theta = optional_number(pi, "theta", "picard");
        p.closure = parse_closure(pi, "closure", "picard", p.closure);
    }

    // --- bounds -------------------------------------------------------------
    if (j.contains("bounds")) {
        const json& bo = j.at("bounds");
        if (!bo.is_object()) fail("bounds", "expected an object");
        check_keys(bo, "bounds",
                   {"theta0", "theta", "omega", "mean_b", "sup_b", "theta_pp",
                    "t"});
        BoundsConfig& b = cfg.bounds;
        b.theta0 = optional_number(bo, "theta0", "bounds");
        b.theta = optional_number(bo, "theta", "bounds");
        b.omega = optional_number(bo, "omega", "bounds");
        b.mean_b = optional_number(bo, "mean_b", "bounds");
        b.sup_b = optional_number(bo, "sup_b", "bounds");
        b.theta_pp = optional_number(bo, "theta_pp", "bounds");
        b.t = optional_number(bo, "t", "bounds");
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), path);
}

KernelModel build_model(const RunConfig& cfg) {
    return KernelModel(cfg.domain, cfg.alpha, cfg.kappa1, cfg.kappa2);
}

} // namespace jumpdyn
