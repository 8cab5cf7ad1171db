#include "lpball/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lpball::runner {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "sampling-oracles", "moments",         "khinchine",
        "psi2",             "slabs",           "sections-p-scan",
        "sections-lambda-scan", "cube",        "brascamp-lieb",
        "balance",          "cover"};
    return names;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");

        std::vector<std::string> parts;
        std::istringstream vs(value);
        std::string part;
        while (std::getline(vs, part, ',')) parts.push_back(trim(part));

        std::vector<double> nums;
        bool all_numeric = true;
        for (const auto& pstr : parts) {
            double v;
            if (parse_double(pstr, v))
                nums.push_back(v);
            else
                all_numeric = false;
        }
        if (all_numeric && !parts.empty())
            cfg.grids[key] = std::move(nums);
        else
            cfg.strings[key] = value;
    }

    if (cfg.strings.count("suite")) cfg.suite = cfg.strings.at("suite");
    if (cfg.strings.count("out")) cfg.output_dir = cfg.strings.at("out");
    cfg.seed = static_cast<std::uint64_t>(cfg.scalar_or("seed", 1.0));
    cfg.samples = static_cast<std::size_t>(cfg.scalar_or("samples", 100000.0));
    cfg.confidence_z = cfg.scalar_or("confidence", 3.0);
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::vector<double> ExperimentConfig::grid_or(const std::string& key,
                                              std::vector<double> fallback) const {
    const auto it = grids.find(key);
    return it != grids.end() ? it->second : fallback;
}

double ExperimentConfig::scalar_or(const std::string& key, double fallback) const {
    const auto it = grids.find(key);
    if (it == grids.end() || it->second.empty()) return fallback;
    return it->second.front();
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    os << "suite = " << suite << "\n";
    os << "seed = " << seed << "\n";
    os << "samples = " << samples << "\n";
    os << "confidence = " << format_double(confidence_z) << "\n";
    for (const auto& [key, values] : grids) {
        if (key == "seed" || key == "samples" || key == "confidence") continue;
        os << key << " = ";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) os << ", ";
            os << format_double(values[i]);
        }
        os << "\n";
    }
    for (const auto& [key, value] : strings) {
        if (key == "suite" || key == "out") continue;
        os << key << " = " << value << "\n";
    }
    return os.str();
}

void ExperimentConfig::validate() const {
    std::vector<std::string> problems;
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end())
        problems.push_back("unknown suite '" + suite + "'");
    if (samples < 1000) problems.push_back("samples must be >= 1000");
    if (!(confidence_z > 0.0)) problems.push_back("confidence must be > 0");
    for (const auto& [key, values] : grids) {
        if (values.empty()) problems.push_back("empty grid '" + key + "'");
        if (key == "p" || key == "alpha" || key == "lambda_base")
            for (double v : values)
                if (!(v > 0.0)) problems.push_back("grid '" + key + "' requires positive values");
        if (key == "n" || key == "k" || key == "m")
            for (double v : values)
                if (!(v >= 1.0) || v != std::floor(v))
                    problems.push_back("grid '" + key + "' requires positive integers");
        if (key == "r" || key == "eps")
            for (double v : values)
                if (!(v > 0.0)) problems.push_back("grid '" + key + "' requires positive values");
        if (key == "lambda")
            for (double v : values)
                if (!(v >= 0.0)) problems.push_back("grid '" + key + "' requires nonnegative values");
    }
    if (!problems.empty()) {
        std::string msg = "invalid config:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw std::invalid_argument(msg);
    }
}

} // namespace lpball::runner
