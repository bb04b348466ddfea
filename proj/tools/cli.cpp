#include "cli.hpp"

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ectdim/config.hpp"
#include "ectdim/csv.hpp"
#include "ectdim/errors.hpp"
#include "ectdim/fgrid.hpp"
#include "ectdim/measurement.hpp"
#include "ectdim/procedure.hpp"
#include "ectdim/regions.hpp"
#include "ectdim/system_io.hpp"

namespace ectdim::cli {

namespace {

namespace fs = std::filesystem;

/// Relative input paths fall back to $ECTDIM_CONFIG_DIR when they do not
/// exist as given.
std::string resolve_input(const std::string& path) {
    if (path.empty() || fs::exists(path) || fs::path(path).is_absolute()) return path;
    if (const char* dir = std::getenv("ECTDIM_CONFIG_DIR")) {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    return path;
}

void require_input(const std::string& path, const std::string& what) {
    if (!fs::exists(path)) {
        throw std::invalid_argument(what + " '" + path + "' does not exist");
    }
}

std::pair<double, double> parse_truth(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument(
            "--truth expects \"sigma_s_per_m,dh_m\" (e.g. \"18e6,2e-3\")");
    }
    return {csv::parse_double(text.substr(0, comma)),
            csv::parse_double(text.substr(comma + 1))};
}

struct GridFlags {
    std::optional<double> pi2_min, pi2_max, pi3_min, pi3_max, sigma_ref_ms, tolerance;
    std::optional<std::size_t> n2, n3;
    std::optional<std::string> spacing;
    std::optional<unsigned> threads;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pi2-min", pi2_min, "Lower pi2 bound");
        cmd->add_option("--pi2-max", pi2_max, "Upper pi2 bound");
        cmd->add_option("--pi3-min", pi3_min, "Lower pi3 bound");
        cmd->add_option("--pi3-max", pi3_max, "Upper pi3 bound");
        cmd->add_option("--n2", n2, "Samples along pi2");
        cmd->add_option("--n3", n3, "Samples along pi3");
        cmd->add_option("--spacing", spacing, "Axis spacing: log or linear");
        cmd->add_option("--sigma-ref", sigma_ref_ms,
                        "Reference conductivity for the build, MS/m");
        cmd->add_option("--tolerance", tolerance, "Relative integration tolerance");
        cmd->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
    }

    forward::GridBuildParams apply(forward::GridBuildParams p) const {
        if (pi2_min) p.pi2_min = *pi2_min;
        if (pi2_max) p.pi2_max = *pi2_max;
        if (pi3_min) p.pi3_min = *pi3_min;
        if (pi3_max) p.pi3_max = *pi3_max;
        if (n2) p.n2 = *n2;
        if (n3) p.n3 = *n3;
        if (spacing) {
            if (*spacing == "log") {
                p.spacing = forward::GridSpacing::log;
            } else if (*spacing == "linear") {
                p.spacing = forward::GridSpacing::linear;
            } else {
                throw std::invalid_argument("spacing must be 'log' or 'linear'");
            }
        }
        if (sigma_ref_ms) p.sigma_ref = *sigma_ref_ms * 1e6;
        if (tolerance) p.rel_tol = *tolerance;
        if (threads) p.threads = *threads;
        return p;
    }
};

int run_pi_groups(const std::string& system_path, const std::string& out_path) {
    const std::string path = resolve_input(system_path);
    require_input(path, "system file");
    const auto sys = dims::load_system(path);
    const std::string text = dims::format_pi_groups(sys);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        csv::write_text_atomic(out_path, text);
    }
    return kOk;
}

int run_grid_build(const std::string& probe_cfg, const GridFlags& flags,
                   const std::string& out_path, const std::string& csv_path) {
    const std::string cfg_path = resolve_input(probe_cfg);
    require_input(cfg_path, "probe config");
    const auto cfg = config::load_config(cfg_path);
    const auto probe = config::probe_from_config(cfg);
    auto params = config::grid_params_from_config(cfg);
    params = flags.apply(params);

    const auto grid = forward::compute_f_grid(probe, params);
    forward::save_grid(grid, out_path);
    std::cout << "grid " << grid.n2() << "x" << grid.n3() << " written to " << out_path
              << "\n";
    if (!forward::monotone_frequency_response(grid)) {
        std::cout << "warning: |F| pi2^2 is not monotone along every pi3 row\n";
    }
    if (!csv_path.empty()) {
        forward::export_grid_csv(grid, csv_path);
        std::cout << "csv written to " << csv_path << "\n";
    }
    return kOk;
}

int run_regions(double pi2_min, double pi2_max, double pi3_min, double pi3_max,
                std::size_t n, double k, double boundary, const std::string& out_path) {
    csv::Writer w;
    w.row({"pi2", "pi3", "region", "sigma", "dh", "sigma_dh_product"});
    for (std::size_t i = 0; i < n; ++i) {
        const double t2 = static_cast<double>(i) / static_cast<double>(n - 1);
        const double pi2 = pi2_min * std::pow(pi2_max / pi2_min, t2);
        for (std::size_t j = 0; j < n; ++j) {
            const double t3 = static_cast<double>(j) / static_cast<double>(n - 1);
            const double pi3 = pi3_min * std::pow(pi3_max / pi3_min, t3);
            const auto label = inversion::classify_region(pi2, pi3, k, boundary);
            w.row({csv::format_double(pi2), csv::format_double(pi3),
                   inversion::region_name(label.region),
                   label.retrievable.sigma ? "1" : "0",
                   label.retrievable.dh ? "1" : "0",
                   label.retrievable.sigma_dh_product ? "1" : "0"});
        }
    }
    w.save(out_path);
    std::cout << "region table (" << n << "x" << n << ") written to " << out_path << "\n";
    return kOk;
}

int run_synth(const std::string& config_path, const std::string& plate_name,
              const std::string& preset, const std::vector<double>& frequencies,
              int repeats, std::uint64_t seed, std::optional<double> rho,
              std::optional<double> abs_noise, const std::string& out_path) {
    const std::string path = resolve_input(config_path);
    require_input(path, "config file");
    const auto cfg = config::load_config(path);
    const auto probe = config::probe_from_config(cfg);
    const auto plates = config::plates_from_config(cfg);
    const forward::PlateSpec* plate = nullptr;
    for (const auto& p : plates) {
        if (p.name == plate_name) plate = &p.plate;
    }
    if (plate == nullptr) {
        throw std::invalid_argument("plate '" + plate_name + "' not found in [plates]");
    }
    auto noise = config::noise_from_config(cfg);
    if (rho) noise.rho = *rho;
    if (abs_noise) noise.abs_sigma = *abs_noise;
    const auto freqs =
        frequencies.empty() ? config::frequency_preset(preset) : frequencies;
    const auto records = pipeline::synthesize_measurements(probe, *plate, freqs, repeats,
                                                           noise, seed, plate_name);
    pipeline::save_measurements_csv(records, out_path);
    std::cout << records.size() << " measurements written to " << out_path << "\n";
    return kOk;
}

int run_estimate(const std::string& grid_path, const std::string& probe_cfg,
                 const std::string& measurements_path, const std::string& cal_path,
                 const std::string& truth_text, const std::string& out_dir) {
    pipeline::ProcedureConfig pc;
    const std::string cfg_path = resolve_input(probe_cfg);
    require_input(cfg_path, "probe config");
    pc.probe = config::probe_from_config(config::load_config(cfg_path));
    pc.grid_path = resolve_input(grid_path);
    require_input(*pc.grid_path, "grid file");
    pc.measurements_path = resolve_input(measurements_path);
    require_input(*pc.measurements_path, "measurement file");
    if (!cal_path.empty()) {
        pc.calibration_path = resolve_input(cal_path);
        require_input(*pc.calibration_path, "calibration file");
    }
    if (!truth_text.empty()) {
        const auto [sigma, dh] = parse_truth(truth_text);
        pc.truth = pipeline::TruthSpec{sigma, dh};
    }

    const auto result = pipeline::run_procedure(pc);
    const auto files = pipeline::write_report_files(result, pc.probe, out_dir);
    std::cout << result.report.render_text();
    std::cout << "artifacts:";
    for (const auto& f : files) std::cout << " " << f;
    std::cout << "\n";
    return kOk;
}

int run_report(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed, const std::string& preset,
               std::optional<unsigned> threads) {
    const std::string path = resolve_input(config_path);
    require_input(path, "config file");
    auto pc = config::procedure_from_config(config::load_config(path));
    if (seed && pc.synth) pc.synth->seed = *seed;
    if (!preset.empty() && pc.synth) {
        pc.synth->frequencies_hz = config::frequency_preset(preset);
    }
    if (threads && pc.grid_build) pc.grid_build->threads = *threads;

    const auto result = pipeline::run_procedure(pc);
    const auto files = pipeline::write_report_files(result, pc.probe, out_dir);
    std::cout << result.report.render_text();
    std::cout << "artifacts:";
    for (const auto& f : files) std::cout << " " << f;
    std::cout << "\n";
    return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Dimensionless eddy-current plate characterization toolkit"};
    app.require_subcommand(1);

    // pi-groups
    auto* pi = app.add_subcommand("pi-groups",
                                  "Derive the dimensionless groups of a system file");
    std::string system_path;
    std::string pi_out;
    pi->add_option("--system", system_path, "System definition file")->required();
    pi->add_option("--out", pi_out, "Write to file instead of stdout");

    // grid build
    auto* grid = app.add_subcommand("grid", "Dimensionless map operations");
    auto* build = grid->add_subcommand("build", "Tabulate F(pi2, pi3) for a probe");
    std::string probe_cfg;
    std::string grid_out = "fgrid.bin";
    std::string grid_csv;
    GridFlags grid_flags;
    build->add_option("--probe", probe_cfg, "Config file with a [probe] section")
        ->required();
    build->add_option("--out", grid_out, "Output grid file");
    build->add_option("--csv", grid_csv, "Optional CSV export");
    grid_flags.attach(build);
    grid->require_subcommand(1);

    // regions
    auto* regions = app.add_subcommand("regions", "Tabulate operating-region labels");
    double r_pi2_min = 2.82, r_pi2_max = 28.2, r_pi3_min = 4.2e-3, r_pi3_max = 0.42;
    std::size_t r_n = 50;
    double r_k = 10.0, r_boundary = 3.0;
    std::string regions_out = "regions.csv";
    regions->add_option("--pi2-min", r_pi2_min, "Lower pi2 bound");
    regions->add_option("--pi2-max", r_pi2_max, "Upper pi2 bound");
    regions->add_option("--pi3-min", r_pi3_min, "Lower pi3 bound");
    regions->add_option("--pi3-max", r_pi3_max, "Upper pi3 bound");
    regions->add_option("--n", r_n, "Samples per axis");
    regions->add_option("--k", r_k, "Separation margin (k >> 1)");
    regions->add_option("--boundary", r_boundary, "Thickness-blind pi2*pi3 boundary");
    regions->add_option("--out", regions_out, "Output CSV");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic measurements");
    std::string synth_cfg;
    std::string synth_plate;
    std::string synth_preset = "fig5";
    std::vector<double> synth_freqs;
    int synth_repeats = 1;
    std::uint64_t synth_seed = 1;
    std::optional<double> synth_rho;
    std::optional<double> synth_abs;
    std::string synth_out = "measurements.csv";
    synth->add_option("--config", synth_cfg, "Config with [probe], [plates], [noise]")
        ->required();
    synth->add_option("--plate", synth_plate, "Plate name from [plates]")->required();
    synth->add_option("--preset", synth_preset, "Frequency preset: fig4, fig5, sweep");
    synth->add_option("--frequencies", synth_freqs, "Explicit frequency list, Hz");
    synth->add_option("--repeats", synth_repeats, "Repeats per frequency");
    synth->add_option("--seed", synth_seed, "Noise generator seed");
    synth->add_option("--rho", synth_rho, "Relative noise level override");
    synth->add_option("--abs-noise", synth_abs, "Absolute noise floor override, ohm");
    synth->add_option("--out", synth_out, "Output CSV");

    // estimate
    auto* estimate =
        app.add_subcommand("estimate", "Invert measured impedances on a grid");
    std::string est_grid, est_probe, est_meas, est_cal, est_truth;
    std::string est_out = "estimate_out";
    estimate->add_option("--grid", est_grid, "Grid file")->required();
    estimate->add_option("--probe", est_probe, "Config file with a [probe] section")
        ->required();
    estimate->add_option("--measurements", est_meas, "Measurement CSV")->required();
    estimate->add_option("--calibration", est_cal, "Calibration CSV");
    estimate->add_option("--truth", est_truth,
                         "Known plate \"sigma_s_per_m,dh_m\" for error figures");
    estimate->add_option("--out", est_out, "Output directory");

    // report
    auto* report = app.add_subcommand("report", "Run the full procedure from a config");
    std::string rep_cfg;
    std::string rep_out = "report_out";
    std::optional<std::uint64_t> rep_seed;
    std::string rep_preset;
    std::optional<unsigned> rep_threads;
    report->add_option("--config", rep_cfg, "Config with [procedure]")->required();
    report->add_option("--out", rep_out, "Output directory");
    report->add_option("--seed", rep_seed, "Override the synthesis seed");
    report->add_option("--preset", rep_preset, "Override the frequency preset");
    report->add_option("--threads", rep_threads, "Override grid build threads");

    try {
        std::vector<std::string> argv_list = args;
        std::vector<const char*> argv;
        argv.push_back("ectdim");
        for (const auto& a : argv_list) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\ntry --help\n";
        return kUsageError;
    }

    try {
        if (pi->parsed()) return run_pi_groups(system_path, pi_out);
        if (grid->parsed() && build->parsed()) {
            return run_grid_build(probe_cfg, grid_flags, grid_out, grid_csv);
        }
        if (regions->parsed()) {
            return run_regions(r_pi2_min, r_pi2_max, r_pi3_min, r_pi3_max, r_n, r_k,
                               r_boundary, regions_out);
        }
        if (synth->parsed()) {
            return run_synth(synth_cfg, synth_plate, synth_preset, synth_freqs,
                             synth_repeats, synth_seed, synth_rho, synth_abs, synth_out);
        }
        if (estimate->parsed()) {
            return run_estimate(est_grid, est_probe, est_meas, est_cal, est_truth,
                                est_out);
        }
        if (report->parsed()) {
            return run_report(rep_cfg, rep_out, rep_seed, rep_preset, rep_threads);
        }
        std::cerr << "no subcommand given; try --help\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

}  // namespace ectdim::cli
