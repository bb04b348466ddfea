#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "ectdim/csv.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using ectdim::cli::dispatch;

namespace {

struct CaptureStdout {
    std::stringstream stream;
    std::stringstream err_stream;
    std::streambuf* old;
    std::streambuf* old_err;
    CaptureStdout()
        : old(std::cout.rdbuf(stream.rdbuf())), old_err(std::cerr.rdbuf(err_stream.rdbuf())) {}
    ~CaptureStdout() {
        std::cout.rdbuf(old);
        std::cerr.rdbuf(old_err);
    }
    std::string str() const { return stream.str(); }
};

const char* kRlcSystem = R"(basis A V T
quantity omega  0  0 -1
quantity E      0  1  0
quantity R     -1  1  0
quantity I      1  0  0  dependent
quantity L     -1  1  1
quantity C      1 -1  1
repeating R E omega
)";

const char* kBenchConfig = R"(
[probe]
r1_mm = 23.60
r2_mm = 23.95
h1_mm = 6.0
h2_mm = 6.0
d_mm = 2.20
l0_mm = 1.0
n1 = 17
n2 = 17

[grid]
pi2_min = 5.0
pi2_max = 14.0
pi3_min = 0.05
pi3_max = 0.2
n2 = 16
n3 = 16

[noise]
rho = 0.0
abs_ohm = 0.0

[plates]
a = 18.0 2.0

[procedure]
plate = a
frequencies_hz = 1150 1650
repeats = 1
seed = 1
truth_sigma_ms_per_m = 18.0
truth_dh_mm = 2.0
)";

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_test") / name) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all("cli_test"); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("pi-groups prints the derived groups") {
    TempDir dir("pi");
    write_file(dir.file("rlc.sys"), kRlcSystem);
    CaptureStdout capture;
    const int rc = dispatch({"pi-groups", "--system", dir.file("rlc.sys")});
    CHECK(rc == 0);
    CHECK(capture.str() == "pi_1 = R^1 E^-1 I^1\n"
                           "pi_2 = R^-1 omega^1 L^1\n"
                           "pi_3 = R^1 omega^1 C^1\n");
}

TEST_CASE("grid build is idempotent byte for byte") {
    TempDir dir("grid");
    write_file(dir.file("bench.cfg"), kBenchConfig);
    CaptureStdout capture;
    const auto out1 = dir.file("g1.bin");
    const auto out2 = dir.file("g2.bin");
    CHECK(dispatch({"grid", "build", "--probe", dir.file("bench.cfg"), "--out", out1,
                    "--threads", "2"}) == 0);
    CHECK(dispatch({"grid", "build", "--probe", dir.file("bench.cfg"), "--out", out2,
                    "--threads", "1"}) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(!slurp(out1).empty());

    SUBCASE("csv export flag") {
        const auto csv_path = dir.file("g.csv");
        CHECK(dispatch({"grid", "build", "--probe", dir.file("bench.cfg"), "--out",
                        dir.file("g3.bin"), "--csv", csv_path}) == 0);
        const auto table = ectdim::csv::read_table(csv_path);
        CHECK(table.header.size() == 4);
        CHECK(table.rows.size() == 16 * 16);
    }
}

TEST_CASE("regions emits a labelled lattice") {
    TempDir dir("regions");
    CaptureStdout capture;
    const auto out = dir.file("regions.csv");
    CHECK(dispatch({"regions", "--n", "12", "--out", out}) == 0);
    const auto table = ectdim::csv::read_table(out);
    CHECK(table.rows.size() == 144);
    bool saw_h = false;
    const std::size_t col = table.column("region");
    for (const auto& row : table.rows) saw_h |= (row[col] == "h");
    CHECK(saw_h);
}

TEST_CASE("synth then estimate closes the loop end to end") {
    TempDir dir("loop");
    write_file(dir.file("bench.cfg"), kBenchConfig);
    CaptureStdout capture;

    const auto meas = dir.file("m.csv");
    CHECK(dispatch({"synth", "--config", dir.file("bench.cfg"), "--plate", "a",
                    "--frequencies", "1150", "--frequencies", "1650", "--repeats", "1",
                    "--out", meas}) == 0);
    CHECK(fs::exists(meas));

    const auto grid = dir.file("g.bin");
    CHECK(dispatch({"grid", "build", "--probe", dir.file("bench.cfg"), "--out", grid}) ==
          0);

    const auto out_dir = dir.file("est");
    const int rc = dispatch({"estimate", "--grid", grid, "--probe", dir.file("bench.cfg"),
                             "--measurements", meas, "--truth", "18e6,2e-3", "--out",
                             out_dir});
    CHECK(rc == 0);
    CHECK(fs::exists(fs::path(out_dir) / "report.json"));
    CHECK(fs::exists(fs::path(out_dir) / "records.csv"));
    const std::string json = slurp((fs::path(out_dir) / "report.json").string());
    CHECK(json.find("eps_sigma_pct") != std::string::npos);
    CHECK(capture.str().find("final: sigma") != std::string::npos);
}

TEST_CASE("report subcommand runs the whole procedure from config") {
    TempDir dir("report");
    write_file(dir.file("bench.cfg"), kBenchConfig);
    CaptureStdout capture;
    const auto out_dir = dir.file("rep");
    const int rc =
        dispatch({"report", "--config", dir.file("bench.cfg"), "--out", out_dir});
    CHECK(rc == 0);
    for (const char* name : {"report.json", "report.txt", "records.csv",
                             "merit_vs_frequency.csv", "level_curves.csv",
                             "intersections.csv"}) {
        CHECK(fs::exists(fs::path(out_dir) / name));
    }
    // reruns are byte-identical
    const std::string first = slurp((fs::path(out_dir) / "report.json").string());
    CHECK(dispatch({"report", "--config", dir.file("bench.cfg"), "--out", out_dir}) == 0);
    CHECK(slurp((fs::path(out_dir) / "report.json").string()) == first);
}

TEST_CASE("usage and domain errors map to distinct exit codes") {
    CaptureStdout capture;
    CHECK(dispatch({"--nonsense"}) == 2);
    CHECK(dispatch({}) == 2);
    CHECK(dispatch({"pi-groups"}) == 2);               // missing required option
    CHECK(dispatch({"pi-groups", "--system", "missing.sys"}) == 1);
    CHECK(dispatch({"estimate", "--grid", "nope.bin", "--probe", "nope.cfg",
                    "--measurements", "nope.csv"}) == 1);
}

TEST_CASE("help is available for every subcommand") {
    CaptureStdout capture;
    CHECK(dispatch({"--help"}) == 0);
    const auto text = capture.str();
    for (const char* sub : {"pi-groups", "grid", "regions", "synth", "estimate", "report"}) {
        CHECK(text.find(sub) != std::string::npos);
    }
}

TEST_CASE("config directory environment variable resolves relative inputs") {
    TempDir dir("env");
    write_file(dir.file("rlc.sys"), kRlcSystem);
    setenv("ECTDIM_CONFIG_DIR", dir.path.string().c_str(), 1);
    CaptureStdout capture;
    CHECK(dispatch({"pi-groups", "--system", "rlc.sys"}) == 0);
    unsetenv("ECTDIM_CONFIG_DIR");
    CHECK(capture.str().find("pi_1") != std::string::npos);
}
