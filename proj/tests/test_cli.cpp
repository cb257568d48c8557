#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli.log";
    const std::string cmd =
        std::string(SPTSIM_BIN) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream f(log);
    std::ostringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(raw), ss.str()};
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("sptsim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("--help exits cleanly and documents subcommands") {
    auto dir = fresh_dir("help");
    RunResult r = run_cli("--help", dir);
    CHECK(r.exit_code == 0);
    for (const char* cmd : {"band-diagram", "report", "wkb", "wavelength", "flux", "trace",
                            "sweep", "switch", "repro"})
        CHECK(r.output.find(cmd) != std::string::npos);
}

TEST_CASE("malformed stack file exits 2 and names the field") {
    auto dir = fresh_dir("badstack");
    std::ofstream(dir / "bad.stack") << "layer InP -5 0 0\n";
    RunResult r = run_cli("band-diagram --stack " + (dir / "bad.stack").string() + " --out " +
                              (dir / "out").string(),
                          dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("thickness_nm") != std::string::npos);
}

TEST_CASE("malformed dynamics config exits 2") {
    auto dir = fresh_dir("badcfg");
    std::ofstream(dir / "bad.cfg") << "photon_rate_per_s many\n";
    RunResult r = run_cli("trace --config " + (dir / "bad.cfg").string() + " --out " +
                              (dir / "out").string(),
                          dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("photon_rate_per_s") != std::string::npos);
}

TEST_CASE("unknown material table path exits 4") {
    auto dir = fresh_dir("noio");
    RunResult r = run_cli("band-diagram --materials /nonexistent/table.dat --out " +
                              (dir / "out").string(),
                          dir);
    CHECK(r.exit_code == 4);
}

TEST_CASE("flux writes report and manifest") {
    auto dir = fresh_dir("flux");
    RunResult r = run_cli("flux --power-W 1e-12 --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "flux.txt"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    const std::string manifest = slurp(dir / "out" / "manifest.json");
    CHECK(manifest.find("\"command\": \"flux\"") != std::string::npos);
    CHECK(manifest.find("wall_time_s") != std::string::npos);
}

TEST_CASE("repro fig5 is byte-identical for a fixed seed") {
    auto dir = fresh_dir("fig5");
    RunResult a = run_cli("repro fig5 --seed 7 --out " + (dir / "a").string(), dir);
    RunResult b = run_cli("repro fig5 --seed 7 --out " + (dir / "b").string(), dir);
    RunResult c = run_cli("repro fig5 --seed 8 --out " + (dir / "c").string(), dir);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    REQUIRE(c.exit_code == 0);
    CHECK(slurp(dir / "a" / "trace.csv") == slurp(dir / "b" / "trace.csv"));
    CHECK(slurp(dir / "a" / "events.csv") == slurp(dir / "b" / "events.csv"));
    CHECK(slurp(dir / "a" / "config.txt") == slurp(dir / "b" / "config.txt"));
    CHECK(slurp(dir / "a" / "trace.csv") != slurp(dir / "c" / "trace.csv"));
}

TEST_CASE("trace honors flag overrides and records the seed") {
    auto dir = fresh_dir("trace");
    RunResult r = run_cli("trace --seed 9 --duration-s 5 --absorbed-rate 0 --out " +
                              (dir / "out").string(),
                          dir);
    CHECK(r.exit_code == 0);
    const std::string cfg = slurp(dir / "out" / "config.txt");
    CHECK(cfg.find("seed 9") != std::string::npos);
    CHECK(cfg.find("photon_rate_per_s 0") != std::string::npos);
    const std::string trace = slurp(dir / "out" / "trace.csv");
    CHECK(trace.find("t_s,I_A,n_trapped,n_ionized,shutter") == 0);
}

TEST_CASE("calibrate reports the preset G0 and the pinch-off electron count") {
    auto dir = fresh_dir("cal");
    RunResult r = run_cli("calibrate --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    const std::string cal = slurp(dir / "out" / "calibration.txt");
    CHECK(cal.find("G0_S ") != std::string::npos);
    CHECK(cal.find("electrons_to_pinch_off 8") != std::string::npos);
}

TEST_CASE("sweep ensemble writes per-seed traces and a median") {
    auto dir = fresh_dir("sweepens");
    RunResult r = run_cli(
        "sweep --seed 2 --ensemble 3 --sweep-duration-s 10 --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "trace_seed2.csv"));
    CHECK(fs::exists(dir / "out" / "trace_seed4.csv"));
    CHECK(fs::exists(dir / "out" / "trace_median.csv"));
}
