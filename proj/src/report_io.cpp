#include "jumpdyn/report_io.hpp"

#include <cstdio>

#include "jumpdyn/errors.hpp"

namespace jumpdyn {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

//============================================================================
// CsvWriter
//============================================================================

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
    if (!out_)
        throw ConfigError("cannot open output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
    if (cells.size() != width_)
        throw ConfigError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_full(cells[i]);
    }
    out_ << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw ConfigError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

//============================================================================
// Manifest
//============================================================================

void Manifest::set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) {
    entries_.emplace_back(key, format_full(value));
}

void Manifest::set(const std::string& key, long long value) {
    entries_.emplace_back(key, std::to_string(value));
}

void Manifest::set(const std::string& key, bool value) {
    entries_.emplace_back(key, value ? "true" : "false");
}

std::string Manifest::str() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void Manifest::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file: " + path);
    f << str();
}

//============================================================================
// Hash + stability rendering
//============================================================================

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void describe_stability(Manifest& m, const std::string& prefix,
                        const StabilityReport& rep, int dim) {
    m.set(prefix + ".fourier_ok", rep.fourier_ok);
    m.set(prefix + ".min_product", rep.min_product);
    m.set(prefix + ".stable", rep.stable());
    m.set(prefix + ".unbounded", rep.unbounded);
    m.set(prefix + ".omega", rep.omega);
    m.set(prefix + ".omega_is_empirical", rep.omega_is_empirical);
    m.set(prefix + ".omega_certified", rep.omega_certified);
    m.set(prefix + ".pointwise_dominance_ok", rep.pointwise_dominance_ok);
    m.set(prefix + ".max_pointwise_gap", rep.max_pointwise_gap);
    m.set(prefix + ".growth_slope", rep.growth_slope);
    if (!rep.omega_by_size.empty()) {
        std::string sizes;
        for (std::size_t i = 0; i < rep.omega_by_size.size(); ++i) {
            if (i) sizes += ' ';
            sizes += format_full(rep.omega_by_size[i]);
        }
        m.set(prefix + ".omega_by_size", sizes);
    }
    if (rep.evidence_size > 0) {
        m.set(prefix + ".evidence_size",
              static_cast<long long>(rep.evidence_size));
        std::string pts;
        for (std::size_t i = 0; i < rep.evidence.size(); ++i) {
            if (i) pts += ' ';
            pts += format_full(rep.evidence[i][0]);
            if (dim == 2) {
                pts += ' ';
                pts += format_full(rep.evidence[i][1]);
            }
        }
        m.set(prefix + ".evidence_points", pts);
    }
}

} // namespace jumpdyn
