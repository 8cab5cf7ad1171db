#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// end-to-end checks of the installed command-line surface
namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LPBALL_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    CommandResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = out;
    return r;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "lpball-cli-test";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p);
    f << content;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("run /nonexistent/config.txt").exit_code == 2);
    CHECK(run_cli("sample bad-spec 10").exit_code == 2);
    CHECK(run_cli("sample volume:n=2 10").exit_code == 2);  // p missing
}

TEST_CASE("sample subcommand emits reproducible csv") {
    const auto a = run_cli("sample volume:n=3,p=1.5 5 --seed 9");
    CHECK(a.exit_code == 0);
    const auto b = run_cli("sample volume:n=3,p=1.5 5 --seed 9");
    CHECK(a.output == b.output);
    std::size_t lines = 0, commas = 0;
    for (char c : a.output) {
        if (c == '\n') ++lines;
        if (c == ',') ++commas;
    }
    CHECK(lines == 5);
    CHECK(commas == 10);  // two separators per 3-coordinate row
    const auto c = run_cli("sample gamma-mixed:n=2,p=2,alpha=1.5 3 --seed 1 --stream 2");
    CHECK(c.exit_code == 0);
    const auto d = run_cli("sample projected-cone:n=2,p=2,m=1 3");
    CHECK(d.exit_code == 0);
    const auto e = run_cli("sample cone:n=2,p=1 3");
    CHECK(e.exit_code == 0);
}

TEST_CASE("run, plot and report-diff round trip") {
    const auto dir = temp_dir();
    const auto cfg = dir / "moments.conf";
    write_file(cfg, "suite = moments\nsamples = 4000\nseed = 3\nn = 2\np = 1, 2\nq = 1, 2\nmax_rel_se = 0.1\n");

    const auto r1 = run_cli("run " + cfg.string() + " --out " + (dir / "out1").string());
    CHECK(r1.exit_code == 0);
    CHECK(fs::exists(dir / "out1" / "moments-report.json"));
    CHECK(fs::exists(dir / "out1" / "moments-rows.csv"));

    const auto r2 = run_cli("run " + cfg.string() + " --out " + (dir / "out2").string());
    CHECK(r2.exit_code == 0);

    const auto plot = run_cli("plot " + (dir / "out1" / "moments-report.json").string() +
                              " marginal-oracle");
    CHECK(plot.exit_code == 0);
    CHECK(plot.output.rfind("x,value,lo,hi\n", 0) == 0);
    const auto badplot = run_cli("plot " + (dir / "out1" / "moments-report.json").string() +
                                 " nonexistent-quantity");
    CHECK(badplot.exit_code == 2);

    // identical runs diff clean (exit 0)
    const auto same = run_cli("report-diff " + (dir / "out1" / "moments-report.json").string() +
                              " " + (dir / "out2" / "moments-report.json").string());
    CHECK(same.exit_code == 0);

    // a different seed shows up as a difference (exit 1)
    const auto cfg2 = dir / "moments2.conf";
    write_file(cfg2, "suite = moments\nsamples = 4000\nseed = 4\nn = 2\np = 1, 2\nq = 1, 2\nmax_rel_se = 0.1\n");
    const auto r3 = run_cli("run " + cfg2.string() + " --out " + (dir / "out3").string());
    CHECK(r3.exit_code == 0);
    const auto differ = run_cli("report-diff " + (dir / "out1" / "moments-report.json").string() +
                                " " + (dir / "out3" / "moments-report.json").string());
    CHECK(differ.exit_code == 1);

    // byte-identical reruns of the persisted CSV (determinism contract)
    const std::string csv1 = [&] {
        std::ifstream f(dir / "out1" / "moments-rows.csv");
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }();
    const std::string csv2 = [&] {
        std::ifstream f(dir / "out2" / "moments-rows.csv");
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }();
    CHECK(csv1 == csv2);
    fs::remove_all(dir);
}

TEST_CASE("environment variable sets the default output directory") {
    const auto dir = temp_dir();
    const auto envdir = dir / "env-out";
    const auto cfg = dir / "envtest.conf";
    write_file(cfg, "suite = moments\nsamples = 4000\nseed = 3\nn = 2\np = 1\nq = 1\nmax_rel_se = 0.1\n");
    const std::string cmd = "LPBALL_OUTPUT_DIR=" + envdir.string() + " " +
                            std::string(LPBALL_CLI_PATH) + " run " + cfg.string() +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(envdir / "moments-report.json"));
    fs::remove_all(dir);
}

TEST_CASE("failing suites exit with code 1") {
    const auto dir = temp_dir();
    const auto cfg = dir / "fail.conf";
    // n = 70 passes config validation but the slab estimator rejects it at
    // run time, so the suite records an error and fails
    write_file(cfg, "suite = slabs\nsamples = 2000\nseed = 3\nn = 70\np = 2\n");
    const auto r = run_cli("run " + cfg.string() + " --out " + (dir / "out").string());
    CHECK(r.exit_code == 1);
    fs::remove_all(dir);
}
