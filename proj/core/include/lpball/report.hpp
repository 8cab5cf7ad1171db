#pragma once

#include "lpball/config.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lpball::runner {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kLibraryVersion = "0.1.0";

struct ReportRow {
    std::vector<std::pair<std::string, double>> params;  // ordered, first is the abscissa
    double value = 0.0;
    double std_error = -1.0;  // < 0: not applicable
    double bound = 0.0;
    bool has_bound = false;
    double margin = 0.0;  // signed slack against the bound, in combined se when available
    int pass = -1;        // -1: informational row
    std::string note;     // free-form provenance (e.g. instance content hash)
};

struct ReportScan {
    std::string name;
    std::vector<ReportRow> rows;
};

struct ExperimentReport {
    int schema_version = kReportSchemaVersion;
    std::string suite;
    std::string config_echo;
    std::string library_version = kLibraryVersion;
    std::string rng_provenance;
    double wall_seconds = 0.0;  // excluded from the results hash
    bool pass = false;
    std::vector<ReportScan> scans;
    std::vector<std::string> errors;  // scans that failed to run (partial report)

    const ReportScan* find_scan(const std::string& name) const;

    /// FNV-1a over the deterministic content (everything but wall_seconds).
    std::string results_hash() const;

    std::string to_json() const;
    static ExperimentReport from_json_text(const std::string& text);

    /// Plot data for one scan: CSV `x,value,lo,hi` (lo/hi at 3 se when the
    /// row carries a standard error; bare `x,value` otherwise). Unknown
    /// quantity names throw std::invalid_argument.
    std::string plot_csv(const std::string& quantity) const;

    /// Whole-report CSV (one line per row, scan-tagged).
    std::string rows_csv() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Field-by-field comparison modulo volatile fields (wall clock); prints
/// differences. Returns 0 when equivalent, 1 otherwise.
int report_diff(const ExperimentReport& a, const ExperimentReport& b, std::ostream& os);

} // namespace lpball::runner
