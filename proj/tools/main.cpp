#include "lpball/config.hpp"
#include "lpball/report.hpp"
#include "lpball/sampling.hpp"
#include "lpball/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

using namespace lpball;

// measure-spec grammar: kind:key=value,...  e.g. "volume:n=3,p=1.5",
// "gamma-mixed:n=4,p=2,alpha=2.5", "projected-cone:n=3,p=2,m=2", "cone:n=2,p=1"
sampling::BallMeasure parse_measure_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("measure spec: expected kind:key=value,...");
    const std::string kind = spec.substr(0, colon);
    std::map<std::string, double> kv;
    std::string rest = spec.substr(colon + 1);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("measure spec: expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    if (!kv.count("n") || !kv.count("p"))
        throw std::invalid_argument("measure spec: n and p are required");
    const int n = static_cast<int>(kv.at("n"));
    const double p = kv.at("p");
    if (kind == "cone") return sampling::BallMeasure::cone(n, p);
    if (kind == "volume") return sampling::BallMeasure::volume(n, p);
    if (kind == "gamma-mixed") {
        if (!kv.count("alpha")) throw std::invalid_argument("measure spec: gamma-mixed needs alpha");
        return sampling::BallMeasure::gamma_mixed(n, p, kv.at("alpha"));
    }
    if (kind == "projected-cone") {
        if (!kv.count("m")) throw std::invalid_argument("measure spec: projected-cone needs m");
        return sampling::BallMeasure::projected_cone(n, p, static_cast<int>(kv.at("m")));
    }
    throw std::invalid_argument("measure spec: unknown kind '" + kind + "'");
}

std::string default_output_dir() {
    const char* env = std::getenv("LPBALL_OUTPUT_DIR");
    return env && *env ? std::string(env) : std::string(".");
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
    runner::ExperimentConfig cfg = runner::ExperimentConfig::parse_file(config_path);
    if (!out_override.empty())
        cfg.output_dir = out_override;
    else if (!cfg.strings.count("out"))
        cfg.output_dir = default_output_dir();
    const auto report = runner::run_suite_and_write(cfg);
    std::cout << "suite " << report.suite << ": " << (report.pass ? "pass" : "FAIL") << " ("
              << report.scans.size() << " scans, " << report.wall_seconds << " s)\n";
    std::cout << "report: " << cfg.output_dir << "/" << cfg.suite << "-report.json\n";
    for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
    return report.pass ? 0 : 1;
}

int cmd_plot(const std::string& report_path, const std::string& quantity,
             const std::string& out_path) {
    const auto report =
        runner::ExperimentReport::from_json_text(runner::read_text_file(report_path));
    const std::string csv = report.plot_csv(quantity);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        runner::write_text_file(out_path, csv);
    }
    return 0;
}

int cmd_sample(const std::string& spec, std::size_t count, std::uint64_t seed,
               std::uint64_t stream, const std::string& out_path) {
    const auto measure = parse_measure_spec(spec);
    if (out_path.empty()) {
        sampling::write_samples_csv(std::cout, measure, count, {seed, stream});
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_path);
        sampling::write_samples_csv(f, measure, count, {seed, stream});
    }
    return 0;
}

int cmd_report_diff(const std::string& a_path, const std::string& b_path) {
    const auto a = runner::ExperimentReport::from_json_text(runner::read_text_file(a_path));
    const auto b = runner::ExperimentReport::from_json_text(runner::read_text_file(b_path));
    return runner::report_diff(a, b, std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiment runner for measures, moments and sections of l_p balls"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    auto* run = app.add_subcommand("run", "run a verification suite from a config file");
    run->add_option("config", config_path, "flat key-value config file")->required();
    run->add_option("--out", out_override, "output directory (overrides config and environment)");

    std::string report_path, quantity, plot_out;
    auto* plot = app.add_subcommand("plot", "emit plot data (CSV) from a stored report");
    plot->add_option("report", report_path, "report JSON file")->required();
    plot->add_option("quantity", quantity, "scan name to export")->required();
    plot->add_option("-o,--out", plot_out, "output file (default: stdout)");

    std::string measure_spec;
    std::size_t count = 0;
    std::uint64_t seed = 1, stream = 0;
    std::string sample_out;
    auto* sample = app.add_subcommand("sample", "draw samples from a ball measure as CSV");
    sample->add_option("measure-spec", measure_spec, "e.g. volume:n=3,p=1.5")->required();
    sample->add_option("count", count, "number of samples")->required();
    sample->add_option("--seed", seed, "rng seed");
    sample->add_option("--stream", stream, "rng stream id");
    sample->add_option("-o,--out", sample_out, "output file (default: stdout)");

    std::string diff_a, diff_b;
    auto* diff = app.add_subcommand("report-diff", "compare two stored reports");
    diff->add_option("a", diff_a, "first report")->required();
    diff->add_option("b", diff_b, "second report")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_override);
        if (plot->parsed()) return cmd_plot(report_path, quantity, plot_out);
        if (sample->parsed()) return cmd_sample(measure_spec, count, seed, stream, sample_out);
        if (diff->parsed()) return cmd_report_diff(diff_a, diff_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
