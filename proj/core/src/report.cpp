#include "lpball/report.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lpball::runner {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

json row_to_json(const ReportRow& row) {
    json jp = json::array();
    for (const auto& [k, v] : row.params) jp.push_back({{"k", k}, {"v", v}});
    json j{{"params", std::move(jp)}, {"value", row.value}};
    if (row.std_error >= 0.0) j["std_error"] = row.std_error;
    if (row.has_bound) {
        j["bound"] = row.bound;
        j["margin"] = row.margin;
    }
    if (row.pass >= 0) j["pass"] = row.pass == 1;
    if (!row.note.empty()) j["note"] = row.note;
    return j;
}

ReportRow row_from_json(const json& j) {
    ReportRow row;
    for (const auto& pj : j.at("params")) row.params.emplace_back(pj.at("k").get<std::string>(), pj.at("v").get<double>());
    row.value = j.at("value").get<double>();
    if (j.contains("std_error")) row.std_error = j.at("std_error").get<double>();
    if (j.contains("bound")) {
        row.has_bound = true;
        row.bound = j.at("bound").get<double>();
        row.margin = j.value("margin", 0.0);
    }
    if (j.contains("pass")) row.pass = j.at("pass").get<bool>() ? 1 : 0;
    row.note = j.value("note", std::string());
    return row;
}

} // namespace

const ReportScan* ExperimentReport::find_scan(const std::string& name) const {
    for (const auto& s : scans)
        if (s.name == name) return &s;
    return nullptr;
}

std::string ExperimentReport::results_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xffu;
        h *= 1099511628211ULL;
    };
    mix(std::to_string(schema_version));
    mix(suite);
    mix(config_echo);
    mix(library_version);
    mix(rng_provenance);
    mix(pass ? "pass" : "fail");
    for (const auto& scan : scans) {
        mix(scan.name);
        for (const auto& row : scan.rows) {
            for (const auto& [k, v] : row.params) {
                mix(k);
                mix(format_double(v));
            }
            mix(format_double(row.value));
            if (row.std_error >= 0.0) mix(format_double(row.std_error));
            if (row.has_bound) {
                mix(format_double(row.bound));
                mix(format_double(row.margin));
            }
            mix(std::to_string(row.pass));
            mix(row.note);
        }
    }
    for (const auto& e : errors) mix(e);
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << h;
    return os.str();
}

std::string ExperimentReport::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["suite"] = suite;
    j["config"] = config_echo;
    j["library_version"] = library_version;
    j["rng"] = rng_provenance;
    j["wall_seconds"] = wall_seconds;
    j["pass"] = pass;
    j["results_hash"] = results_hash();
    json js = json::array();
    for (const auto& scan : scans) {
        json rows = json::array();
        for (const auto& row : scan.rows) rows.push_back(row_to_json(row));
        js.push_back({{"name", scan.name}, {"rows", std::move(rows)}});
    }
    j["scans"] = std::move(js);
    j["errors"] = errors;
    return j.dump(2) + "\n";
}

ExperimentReport ExperimentReport::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    ExperimentReport rep;
    // unknown future fields are ignored on read (forward compatibility)
    rep.schema_version = j.value("schema_version", kReportSchemaVersion);
    rep.suite = j.value("suite", std::string());
    rep.config_echo = j.value("config", std::string());
    rep.library_version = j.value("library_version", std::string());
    rep.rng_provenance = j.value("rng", std::string());
    rep.wall_seconds = j.value("wall_seconds", 0.0);
    rep.pass = j.value("pass", false);
    if (j.contains("scans"))
        for (const auto& sj : j.at("scans")) {
            ReportScan scan;
            scan.name = sj.at("name").get<std::string>();
            for (const auto& rj : sj.at("rows")) scan.rows.push_back(row_from_json(rj));
            rep.scans.push_back(std::move(scan));
        }
    if (j.contains("errors"))
        for (const auto& ej : j.at("errors")) rep.errors.push_back(ej.get<std::string>());
    return rep;
}

std::string ExperimentReport::plot_csv(const std::string& quantity) const {
    const ReportScan* scan = find_scan(quantity);
    if (!scan) throw std::invalid_argument("plot: unknown quantity '" + quantity + "'");
    std::string out;
    const bool with_ci = !scan->rows.empty() && scan->rows.front().std_error >= 0.0;
    out += with_ci ? "x,value,lo,hi\n" : "x,value\n";
    for (const auto& row : scan->rows) {
        const double x = row.params.empty() ? 0.0 : row.params.front().second;
        out += format_double(x);
        out.push_back(',');
        out += format_double(row.value);
        if (with_ci) {
            const double se = std::max(row.std_error, 0.0);
            out.push_back(',');
            out += format_double(row.value - 3.0 * se);
            out.push_back(',');
            out += format_double(row.value + 3.0 * se);
        }
        out.push_back('\n');
    }
    return out;
}

std::string ExperimentReport::rows_csv() const {
    std::string out = "scan,params,value,std_error,bound,margin,pass\n";
    for (const auto& scan : scans)
        for (const auto& row : scan.rows) {
            out += scan.name;
            out.push_back(',');
            std::string params;
            for (const auto& [k, v] : row.params) {
                if (!params.empty()) params += ' ';
                params += k + "=" + format_double(v);
            }
            out += params;
            out.push_back(',');
            out += format_double(row.value);
            out.push_back(',');
            out += row.std_error >= 0.0 ? format_double(row.std_error) : "";
            out.push_back(',');
            out += row.has_bound ? format_double(row.bound) : "";
            out.push_back(',');
            out += row.has_bound ? format_double(row.margin) : "";
            out.push_back(',');
            out += row.pass < 0 ? "" : (row.pass == 1 ? "1" : "0");
            out.push_back('\n');
        }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int report_diff(const ExperimentReport& a, const ExperimentReport& b, std::ostream& os) {
    int differences = 0;
    auto note = [&](const std::string& what) {
        os << "report-diff: " << what << "\n";
        ++differences;
    };
    if (a.suite != b.suite) note("suite: '" + a.suite + "' vs '" + b.suite + "'");
    if (a.config_echo != b.config_echo) note("config differs");
    if (a.schema_version != b.schema_version) note("schema version differs");
    if (a.pass != b.pass) note(std::string("verdict: ") + (a.pass ? "pass" : "fail") + " vs " + (b.pass ? "pass" : "fail"));
    if (a.results_hash() != b.results_hash()) {
        // locate the first differing row for a useful message
        const std::size_t ns = std::min(a.scans.size(), b.scans.size());
        if (a.scans.size() != b.scans.size()) note("scan count differs");
        for (std::size_t s = 0; s < ns; ++s) {
            const auto& sa = a.scans[s];
            const auto& sb = b.scans[s];
            if (sa.name != sb.name) {
                note("scan " + std::to_string(s) + " name: " + sa.name + " vs " + sb.name);
                continue;
            }
            const std::size_t nr = std::min(sa.rows.size(), sb.rows.size());
            if (sa.rows.size() != sb.rows.size()) note("scan '" + sa.name + "': row count differs");
            for (std::size_t r = 0; r < nr; ++r) {
                const auto& ra = sa.rows[r];
                const auto& rb = sb.rows[r];
                if (ra.value != rb.value || ra.std_error != rb.std_error || ra.pass != rb.pass ||
                    ra.bound != rb.bound) {
                    note("scan '" + sa.name + "' row " + std::to_string(r) + ": " +
                         format_double(ra.value) + " vs " + format_double(rb.value));
                }
            }
        }
        if (differences == 0) note("results hash differs");
    }
    if (differences == 0) os << "report-diff: reports are equivalent\n";
    return differences == 0 ? 0 : 1;
}

} // namespace lpball::runner
