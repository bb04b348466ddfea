#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ectdim/config.hpp"
#include "ectdim/errors.hpp"
#include "ectdim/procedure.hpp"
#include "support/fixtures.hpp"

using namespace ectdim;
using namespace ectdim::pipeline;
using doctest::Approx;

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

ProcedureConfig base_config() {
    ProcedureConfig cfg;
    cfg.probe = fixtures::bench_probe();
    cfg.grid_path = fixtures::default_grid_path();
    return cfg;
}

}  // namespace

TEST_CASE("noise-free multi-frequency run on the copper plate") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {58.50e6, 0.98e-3};
    synth.frequencies_hz = {650.0, 1150.0, 1650.0, 2150.0, 2650.0};
    synth.repeats = 1;
    cfg.synth = synth;
    cfg.truth = TruthSpec{58.50e6, 0.98e-3};

    const auto result = run_procedure(cfg);
    const auto& report = result.report;
    REQUIRE(report.per_frequency.size() == 5);
    REQUIRE(report.eps_sigma.has_value());
    CHECK(*report.eps_sigma < 1.0);
    CHECK(*report.eps_dh < 1.0);

    SUBCASE("merit identities: stored errors match their definitions") {
        CHECK(*report.eps_sigma ==
              Approx(std::abs(report.sigma_final - cfg.truth->sigma) / cfg.truth->sigma *
                     100.0)
                  .epsilon(1e-12));
        CHECK(*report.eps_dh ==
              Approx(std::abs(report.dh_final - cfg.truth->dh) / cfg.truth->dh * 100.0)
                  .epsilon(1e-12));
        for (const auto& fm : report.per_frequency) {
            REQUIRE(fm.eps_sigma.has_value());
            CHECK(*fm.eps_sigma ==
                  Approx(std::abs(fm.sigma_mean - cfg.truth->sigma) / cfg.truth->sigma *
                         100.0)
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("exact estimate means zero error") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {18.0e6, 2.0e-3};
    synth.frequencies_hz = {1650.0};
    cfg.synth = synth;
    const auto result = run_procedure(cfg);
    // feed the report's own output back as truth: errors must vanish
    auto cfg2 = cfg;
    cfg2.truth = TruthSpec{result.report.sigma_final, result.report.dh_final};
    const auto result2 = run_procedure(cfg2);
    CHECK(*result2.report.eps_sigma == Approx(0.0));
    CHECK(*result2.report.eps_dh == Approx(0.0));
}

TEST_CASE("repeat accounting: every sample is counted") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {18.0e6, 2.0e-3};
    synth.frequencies_hz = {650.0, 1650.0};
    synth.repeats = 4;
    synth.noise = {0.005, 1e-6};
    synth.seed = 3;
    cfg.synth = synth;
    const auto result = run_procedure(cfg);
    CHECK(result.records.size() == 8);
    for (const auto& fm : result.report.per_frequency) {
        CHECK(fm.n_total == 4);
        CHECK(fm.n_accepted + (fm.n_total - fm.n_accepted) == 4);
    }
}

TEST_CASE("calibration neutrality on model-generated data") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {18.0e6, 2.0e-3};
    synth.frequencies_hz = {650.0, 1650.0, 2650.0};
    cfg.synth = synth;

    const auto plain = run_procedure(cfg);

    // self-fitted calibration from the same forward model
    std::vector<ReferencePlate> refs(1);
    refs[0].plate = synth.plate;
    for (double f : synth.frequencies_hz) {
        MeasurementRecord m;
        m.omega = kTwoPi * f;
        m.dz = forward::mutual_impedance_delta(cfg.probe, synth.plate, m.omega);
        refs[0].measurements.push_back(m);
    }
    auto cfg_cal = cfg;
    cfg_cal.calibration_references = refs;
    const auto calibrated = run_procedure(cfg_cal);

    CHECK(std::abs(plain.report.sigma_final - calibrated.report.sigma_final) /
              plain.report.sigma_final <
          1e-6);
    CHECK(std::abs(plain.report.dh_final - calibrated.report.dh_final) /
              plain.report.dh_final <
          1e-6);
}

TEST_CASE("procedure with every frequency infeasible raises InfeasibleError") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {18.0e6, 3.5e-3};
    synth.frequencies_hz = {11900.0};  // pi2*pi3 > 3 for this plate
    cfg.synth = synth;
    CHECK_THROWS_AS(run_procedure(cfg), InfeasibleError);
}

TEST_CASE("median errors do not improve when noise grows") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {17.66e6, 2.03e-3};
    synth.frequencies_hz = {650.0, 1150.0, 1650.0, 2150.0, 2650.0};
    synth.repeats = 3;
    cfg.synth = synth;
    cfg.truth = TruthSpec{17.66e6, 2.03e-3};

    auto median_eps = [&](double rho) {
        std::vector<double> eps_s, eps_d;
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            auto run_cfg = cfg;
            run_cfg.synth->noise = {rho, 0.0};
            run_cfg.synth->seed = seed;
            const auto res = run_procedure(run_cfg);
            eps_s.push_back(*res.report.eps_sigma);
            eps_d.push_back(*res.report.eps_dh);
        }
        std::sort(eps_s.begin(), eps_s.end());
        std::sort(eps_d.begin(), eps_d.end());
        return std::pair{0.5 * (eps_s[14] + eps_s[15]), 0.5 * (eps_d[14] + eps_d[15])};
    };

    const auto e0 = median_eps(0.0);
    const auto e1 = median_eps(0.0025);
    const auto e2 = median_eps(0.005);
    const auto e3 = median_eps(0.01);
    // non-decreasing in rho (tiny slack for the noise-free discretization floor)
    CHECK(e1.first >= e0.first - 1e-9);
    CHECK(e2.first >= e1.first - 1e-9);
    CHECK(e3.first >= e2.first - 1e-9);
    CHECK(e1.second >= e0.second - 1e-9);
    CHECK(e2.second >= e1.second - 1e-9);
    CHECK(e3.second >= e2.second - 1e-9);
}

TEST_CASE("report rendering carries the published-style figures") {
    // fixture-only: a report with the plate-a style numbers renders into both
    // formats without loss
    MeritReport report;
    FrequencyMerit fm;
    fm.frequency_hz = 1650.0;
    fm.n_total = 20;
    fm.n_accepted = 20;
    fm.sigma_mean = 17.27e6;
    fm.dh_mean = 2.10e-3;
    fm.eps_sigma = 2.18;
    fm.eps_dh = 3.78;
    fm.std_eps_sigma = 0.86;
    fm.std_eps_dh = 0.97;
    fm.region = "h";
    report.per_frequency.push_back(fm);
    report.sigma_final = 17.27e6;
    report.dh_final = 2.10e-3;
    report.std_sigma = 2.3e6;
    report.std_dh = 0.18e-3;
    report.eps_sigma = 2.18;
    report.eps_dh = 3.78;
    report.truth = TruthSpec{17.66e6, 2.03e-3};
    report.n_frequencies_used = 1;

    const std::string text = report.render_text();
    CHECK(text.find("2.1") != std::string::npos);    // dh mean in mm
    CHECK(text.find("3.78") != std::string::npos);   // eps_dh %
    CHECK(text.find("17.27") != std::string::npos);  // sigma in MS/m

    const std::string json = report.render_json();
    CHECK(json.find("\"eps_dh_pct\": 3.78") != std::string::npos);
    CHECK(json.find("\"n_frequencies_used\": 1") != std::string::npos);
    CHECK(json.find("\"truth\"") != std::string::npos);
}

TEST_CASE("report files land on disk") {
    auto cfg = base_config();
    SynthSpec synth;
    synth.plate = {18.0e6, 2.0e-3};
    synth.frequencies_hz = {1150.0, 1650.0};
    cfg.synth = synth;
    cfg.truth = TruthSpec{18.0e6, 2.0e-3};
    const auto result = run_procedure(cfg);

    const std::string dir = "test_report_out";
    const auto files = write_report_files(result, cfg.probe, dir);
    CHECK(files.size() == 6);
    for (const auto& f : files) {
        CHECK(std::filesystem::exists(f));
        CHECK(std::filesystem::file_size(f) > 0);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("procedure config requires grid and measurement sources") {
    ProcedureConfig cfg;
    cfg.probe = fixtures::bench_probe();
    CHECK_THROWS_AS(run_procedure(cfg), std::invalid_argument);
    cfg.grid_path = fixtures::default_grid_path();
    CHECK_THROWS_AS(run_procedure(cfg), std::invalid_argument);
}

TEST_CASE("config file parses into a full procedure setup") {
    const std::string text = R"(
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
n2 = 40
n3 = 40

[noise]
rho = 0.005
abs_ohm = 1e-6

[plates]
a = 17.66 2.03
b = 58.50 0.98

[procedure]
plate = a
preset = fig5
repeats = 2
seed = 11
truth_sigma_ms_per_m = 17.66
truth_dh_mm = 2.03
)";
    const auto cfg = config::parse_config(text);
    const auto pc = config::procedure_from_config(cfg);
    CHECK(pc.probe.r2 == Approx(23.95e-3));
    REQUIRE(pc.grid_build.has_value());
    CHECK(pc.grid_build->n2 == 40);
    REQUIRE(pc.synth.has_value());
    CHECK(pc.synth->plate.sigma == Approx(17.66e6));
    CHECK(pc.synth->frequencies_hz.size() == 5);
    CHECK(pc.synth->repeats == 2);
    CHECK(pc.synth->noise.rho == Approx(0.005));
    REQUIRE(pc.truth.has_value());
    CHECK(pc.truth->dh == Approx(2.03e-3));

    SUBCASE("presets") {
        CHECK(config::frequency_preset("fig4") == std::vector<double>{1650.0});
        CHECK(config::frequency_preset("sweep").size() == 55);
        CHECK_THROWS_AS(config::frequency_preset("zzz"), std::invalid_argument);
    }
    SUBCASE("config errors") {
        CHECK_THROWS_AS(config::parse_config("[probe]\nr1_mm = 1\nr1_mm = 2\n"),
                        std::invalid_argument);
        CHECK_THROWS_AS(config::parse_config("key_without_section = 1\n"),
                        std::invalid_argument);
        CHECK_THROWS_AS(config::parse_config("[probe\n"), std::invalid_argument);
    }
}
