#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lpball::runner {

/// Flat key-value experiment configuration. The file grammar is one
/// `key = value` pair per line; lists use commas (`p = 1, 1.5, 2`); `#`
/// starts a comment. Numeric values become grids, everything else is kept
/// as a string. No nesting.
struct ExperimentConfig {
    std::string suite;
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    double confidence_z = 3.0;
    std::string output_dir = ".";
    std::map<std::string, std::vector<double>> grids;
    std::map<std::string, std::string> strings;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);

    bool has_grid(const std::string& key) const { return grids.count(key) != 0; }
    std::vector<double> grid_or(const std::string& key, std::vector<double> fallback) const;
    double scalar_or(const std::string& key, double fallback) const;

    /// Sorted, normalized rendering (used for the report echo and hash).
    std::string canonical_text() const;

    /// Throws std::invalid_argument with all violations listed.
    void validate() const;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

} // namespace lpball::runner
