#ifndef JUMPDYN_REPORT_IO_HPP
#define JUMPDYN_REPORT_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "jumpdyn/kernels.hpp"

namespace jumpdyn {

// All numeric output is printed with 17 significant digits so that reruns
// with identical config + seed produce byte-identical files.
std::string format_full(double v);

//============================================================================
// CSV writer: header row + rows of numeric cells.
//============================================================================
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& cells);
    void raw_row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t width_;
};

//============================================================================
// Key-value manifest ("key = value" lines, deterministic order).
//============================================================================
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    void set(const std::string& key, bool value);
    void write(const std::string& path) const;
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// FNV-1a 64-bit hash of a byte string (stable config fingerprint).
std::uint64_t fnv1a(const std::string& bytes);

// Render a stability report as manifest entries under the given key prefix.
void describe_stability(Manifest& m, const std::string& prefix,
                        const StabilityReport& rep, int dim);

} // namespace jumpdyn

#endif
