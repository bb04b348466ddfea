#include "ectdim/procedure.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ectdim/csv.hpp"
#include "ectdim/errors.hpp"
#include "ectdim/forward.hpp"

namespace ectdim::pipeline {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double rel_err_pct(double estimate, double truth) {
    return std::abs(estimate - truth) / truth * 100.0;
}

std::string opt_str(const std::optional<double>& v) {
    return v.has_value() ? csv::format_double(*v) : std::string("null");
}

}  // namespace

ProcedureResult run_procedure(const ProcedureConfig& config) {
    config.probe.validate();

    // Phase 1: dimensionless map and calibration.
    std::shared_ptr<const forward::FGrid> grid;
    if (config.grid_path.has_value()) {
        grid = std::make_shared<forward::FGrid>(forward::load_grid(*config.grid_path));
    } else if (config.grid_build.has_value()) {
        grid = std::make_shared<forward::FGrid>(
            forward::compute_f_grid(config.probe, *config.grid_build));
    } else {
        throw std::invalid_argument("procedure config names neither a grid file nor "
                                    "grid build parameters");
    }
    if (grid->probe_tag != forward::probe_shape_tag(config.probe)) {
        throw std::invalid_argument("grid does not match the configured probe shape");
    }

    CalibrationTable calibration;
    if (config.calibration_path.has_value()) {
        calibration = load_calibration_csv(*config.calibration_path);
    } else if (config.calibration_references.has_value()) {
        calibration = fit_calibration(*config.calibration_references, config.probe, *grid);
    }

    std::vector<MeasurementRecord> measurements;
    if (config.measurements_path.has_value()) {
        measurements = load_measurements_csv(*config.measurements_path);
    } else if (config.synth.has_value()) {
        const SynthSpec& s = *config.synth;
        measurements = synthesize_measurements(config.probe, s.plate, s.frequencies_hz,
                                               s.repeats, s.noise, s.seed, s.plate_id);
    } else {
        throw std::invalid_argument("procedure config names no measurement source");
    }
    if (measurements.empty()) throw std::invalid_argument("no measurements to process");

    std::stable_sort(measurements.begin(), measurements.end(),
                     [](const MeasurementRecord& a, const MeasurementRecord& b) {
                         if (a.omega != b.omega) return a.omega < b.omega;
                         return a.repeat_index < b.repeat_index;
                     });

    // Phase 2: per-repeat estimation through the level-curve intersection.
    ProcedureResult result;
    result.grid = grid;
    result.calibration = calibration;
    int extrapolations = 0;
    for (const auto& m : measurements) {
        const auto eval = calibration.evaluate(m.omega);
        if (eval.extrapolated) ++extrapolations;
        MeasurementRecord calibrated = m;
        calibrated.dz = m.dz * eval.c;
        inversion::EstimateRecord rec = inversion::estimate_single_frequency(
            calibrated.dz, calibrated.omega, config.probe, *grid, config.estimate);
        rec.repeat_index = m.repeat_index;
        result.records.push_back(std::move(rec));
    }

    // Per-frequency aggregation (estimate-then-average over the repeats).
    std::map<double, std::vector<const inversion::EstimateRecord*>> by_omega;
    for (const auto& rec : result.records) by_omega[rec.omega].push_back(&rec);

    MeritReport& report = result.report;
    report.truth = config.truth;
    report.calibration_extrapolations = extrapolations;

    std::vector<inversion::EstimateRecord> frequency_records;
    for (const auto& [omega, recs] : by_omega) {
        FrequencyMerit merit;
        merit.omega = omega;
        merit.frequency_hz = omega / (2.0 * std::numbers::pi);
        merit.n_total = static_cast<int>(recs.size());
        merit.calibration_extrapolated = calibration.evaluate(omega).extrapolated;

        std::vector<double> sigmas, dhs;
        std::string region;
        for (const auto* r : recs) {
            if (r->region.has_value() && region.empty()) {
                region = inversion::region_name(r->region->region);
            }
            if (!r->accepted) continue;
            sigmas.push_back(r->sigma_hat);
            dhs.push_back(r->dh_hat);
        }
        merit.n_accepted = static_cast<int>(sigmas.size());
        merit.region = region;

        inversion::EstimateRecord freq_rec;
        freq_rec.omega = omega;
        if (!sigmas.empty()) {
            merit.sigma_mean = mean_of(sigmas);
            merit.dh_mean = mean_of(dhs);
            if (config.truth.has_value()) {
                merit.eps_sigma = rel_err_pct(merit.sigma_mean, config.truth->sigma);
                merit.eps_dh = rel_err_pct(merit.dh_mean, config.truth->dh);
                std::vector<double> eps_s, eps_d;
                for (std::size_t i = 0; i < sigmas.size(); ++i) {
                    eps_s.push_back(rel_err_pct(sigmas[i], config.truth->sigma));
                    eps_d.push_back(rel_err_pct(dhs[i], config.truth->dh));
                }
                merit.std_eps_sigma = sample_std(eps_s, mean_of(eps_s));
                merit.std_eps_dh = sample_std(eps_d, mean_of(eps_d));
            }
            freq_rec.accepted = true;
            freq_rec.sigma_hat = merit.sigma_mean;
            freq_rec.dh_hat = merit.dh_mean;
            // carry the best repeat's intersection for residual bookkeeping
            for (const auto* r : recs) {
                if (r->accepted && r->point.has_value()) {
                    if (!freq_rec.point.has_value() ||
                        r->point->residual < freq_rec.point->residual) {
                        freq_rec.point = r->point;
                        freq_rec.region = r->region;
                    }
                }
            }
        } else {
            freq_rec.accepted = false;
            for (const auto* r : recs) {
                if (r->region.has_value()) {
                    freq_rec.region = r->region;
                    break;
                }
            }
        }
        report.per_frequency.push_back(std::move(merit));
        frequency_records.push_back(std::move(freq_rec));
    }

    // Phase 3: robust fusion of the per-frequency means.
    inversion::FusedEstimate fused = inversion::fuse_multi_frequency(frequency_records);
    report.sigma_final = fused.sigma;
    report.dh_final = fused.dh;
    report.std_sigma = fused.sigma_std;
    report.std_dh = fused.dh_std;
    report.n_frequencies_used = fused.n_used;
    for (std::size_t idx : fused.rejected) {
        report.rejected_frequencies_hz.push_back(frequency_records[idx].omega /
                                                 (2.0 * std::numbers::pi));
    }

    if (config.truth.has_value()) {
        report.eps_sigma = rel_err_pct(report.sigma_final, config.truth->sigma);
        report.eps_dh = rel_err_pct(report.dh_final, config.truth->dh);
        std::vector<double> eps_s, eps_d;
        for (const auto& fm : report.per_frequency) {
            if (fm.eps_sigma.has_value()) eps_s.push_back(*fm.eps_sigma);
            if (fm.eps_dh.has_value()) eps_d.push_back(*fm.eps_dh);
        }
        if (!eps_s.empty()) {
            report.std_eps_sigma = sample_std(eps_s, mean_of(eps_s));
            report.std_eps_dh = sample_std(eps_d, mean_of(eps_d));
        }
    }

    return result;
}

std::string MeritReport::render_text() const {
    std::ostringstream out;
    out << "frequency_hz  n_acc/n_tot  sigma_mean[MS/m]  dh_mean[mm]";
    if (truth.has_value()) out << "  eps_sigma[%]  eps_dh[%]  std_eps_sigma[%]  std_eps_dh[%]";
    out << "  region\n";
    for (const auto& fm : per_frequency) {
        out << csv::format_double(fm.frequency_hz) << "  " << fm.n_accepted << "/"
            << fm.n_total << "  " << csv::format_double(fm.sigma_mean / 1e6) << "  "
            << csv::format_double(fm.dh_mean * 1e3);
        if (truth.has_value()) {
            out << "  " << opt_str(fm.eps_sigma) << "  " << opt_str(fm.eps_dh) << "  "
                << opt_str(fm.std_eps_sigma) << "  " << opt_str(fm.std_eps_dh);
        }
        out << "  " << (fm.region.empty() ? "-" : fm.region);
        if (fm.calibration_extrapolated) out << "  [cal extrapolated]";
        out << "\n";
    }
    out << "\nfinal: sigma = " << csv::format_double(sigma_final / 1e6)
        << " MS/m (std " << csv::format_double(std_sigma / 1e6) << "), dh = "
        << csv::format_double(dh_final * 1e3) << " mm (std "
        << csv::format_double(std_dh * 1e3) << "), frequencies used "
        << n_frequencies_used << "\n";
    if (truth.has_value()) {
        out << "truth: sigma = " << csv::format_double(truth->sigma / 1e6)
            << " MS/m, dh = " << csv::format_double(truth->dh * 1e3) << " mm\n";
        out << "errors: eps_sigma = " << opt_str(eps_sigma)
            << " %, eps_dh = " << opt_str(eps_dh)
            << " %, std_eps_sigma = " << opt_str(std_eps_sigma)
            << " %, std_eps_dh = " << opt_str(std_eps_dh) << " %\n";
    }
    if (!rejected_frequencies_hz.empty()) {
        out << "rejected frequencies (outliers):";
        for (double f : rejected_frequencies_hz) out << " " << csv::format_double(f);
        out << "\n";
    }
    return out.str();
}

std::string MeritReport::render_json() const {
    std::ostringstream out;
    out << "{\n  \"per_frequency\": [\n";
    for (std::size_t i = 0; i < per_frequency.size(); ++i) {
        const auto& fm = per_frequency[i];
        out << "    {\"frequency_hz\": " << csv::format_double(fm.frequency_hz)
            << ", \"n_total\": " << fm.n_total << ", \"n_accepted\": " << fm.n_accepted
            << ", \"sigma_mean_s_per_m\": " << csv::format_double(fm.sigma_mean)
            << ", \"dh_mean_m\": " << csv::format_double(fm.dh_mean)
            << ", \"eps_sigma_pct\": " << opt_str(fm.eps_sigma)
            << ", \"eps_dh_pct\": " << opt_str(fm.eps_dh)
            << ", \"std_eps_sigma_pct\": " << opt_str(fm.std_eps_sigma)
            << ", \"std_eps_dh_pct\": " << opt_str(fm.std_eps_dh) << ", \"region\": \""
            << fm.region << "\", \"calibration_extrapolated\": "
            << (fm.calibration_extrapolated ? "true" : "false") << "}"
            << (i + 1 < per_frequency.size() ? "," : "") << "\n";
    }
    out << "  ],\n";
    out << "  \"fused\": {\"sigma_s_per_m\": " << csv::format_double(sigma_final)
        << ", \"dh_m\": " << csv::format_double(dh_final)
        << ", \"std_sigma_s_per_m\": " << csv::format_double(std_sigma)
        << ", \"std_dh_m\": " << csv::format_double(std_dh)
        << ", \"eps_sigma_pct\": " << opt_str(eps_sigma)
        << ", \"eps_dh_pct\": " << opt_str(eps_dh)
        << ", \"std_eps_sigma_pct\": " << opt_str(std_eps_sigma)
        << ", \"std_eps_dh_pct\": " << opt_str(std_eps_dh)
        << ", \"n_frequencies_used\": " << n_frequencies_used << "},\n";
    if (truth.has_value()) {
        out << "  \"truth\": {\"sigma_s_per_m\": " << csv::format_double(truth->sigma)
            << ", \"dh_m\": " << csv::format_double(truth->dh) << "},\n";
    } else {
        out << "  \"truth\": null,\n";
    }
    out << "  \"rejected_frequencies_hz\": [";
    for (std::size_t i = 0; i < rejected_frequencies_hz.size(); ++i) {
        out << (i ? ", " : "") << csv::format_double(rejected_frequencies_hz[i]);
    }
    out << "],\n";
    out << "  \"calibration_extrapolations\": " << calibration_extrapolations << "\n";
    out << "}\n";
    return out.str();
}

std::vector<std::string> write_report_files(const ProcedureResult& result,
                                            const forward::ProbeGeometry& probe,
                                            const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        csv::write_text_atomic(path, content);
        written.push_back(path);
    };

    emit("report.json", result.report.render_json());
    emit("report.txt", result.report.render_text());

    {
        csv::Writer w;
        w.row({"frequency_hz", "repeat", "accepted", "pi2", "pi3", "residual_cells",
               "region", "sigma_hat_s_per_m", "dh_hat_m", "note"});
        for (const auto& r : result.records) {
            const bool has_pt = r.point.has_value();
            w.row({csv::format_double(r.omega / (2.0 * std::numbers::pi)),
                   std::to_string(r.repeat_index), r.accepted ? "1" : "0",
                   has_pt ? csv::format_double(r.point->pi2) : "",
                   has_pt ? csv::format_double(r.point->pi3) : "",
                   has_pt ? csv::format_double(r.point->residual) : "",
                   r.region.has_value() ? inversion::region_name(r.region->region) : "",
                   r.accepted ? csv::format_double(r.sigma_hat) : "",
                   r.accepted ? csv::format_double(r.dh_hat) : "", r.note});
        }
        const std::string path = (fs::path(out_dir) / "records.csv").string();
        w.save(path);
        written.push_back(path);
    }

    {
        csv::Writer w;
        w.row({"frequency_hz", "n_accepted", "n_total", "sigma_mean_s_per_m", "dh_mean_m",
               "eps_sigma_pct", "eps_dh_pct", "std_eps_sigma_pct", "std_eps_dh_pct"});
        for (const auto& fm : result.report.per_frequency) {
            auto cell = [](const std::optional<double>& v) {
                return v.has_value() ? csv::format_double(*v) : std::string{};
            };
            w.row({csv::format_double(fm.frequency_hz), std::to_string(fm.n_accepted),
                   std::to_string(fm.n_total), csv::format_double(fm.sigma_mean),
                   csv::format_double(fm.dh_mean), cell(fm.eps_sigma), cell(fm.eps_dh),
                   cell(fm.std_eps_sigma), cell(fm.std_eps_dh)});
        }
        const std::string path = (fs::path(out_dir) / "merit_vs_frequency.csv").string();
        w.save(path);
        written.push_back(path);
    }

    // Level curves and intersections for the first repeat at each frequency,
    // in both the (pi2, pi3) and the (sigma, dh) planes.
    {
        csv::Writer curves;
        curves.row({"frequency_hz", "functional", "segment", "pi2", "pi3",
                    "sigma_s_per_m", "dh_m"});
        csv::Writer inters;
        inters.row({"frequency_hz", "pi2", "pi3", "residual_cells", "sigma_s_per_m",
                    "dh_m", "region", "accepted"});
        const double D = probe.characteristic_length();
        for (const auto& r : result.records) {
            if (r.repeat_index != 1) continue;
            if (r.point.has_value()) {
                inters.row(
                    {csv::format_double(r.omega / (2.0 * std::numbers::pi)),
                     csv::format_double(r.point->pi2), csv::format_double(r.point->pi3),
                     csv::format_double(r.point->residual),
                     r.accepted ? csv::format_double(r.sigma_hat) : "",
                     r.accepted ? csv::format_double(r.dh_hat) : "",
                     r.region.has_value() ? inversion::region_name(r.region->region) : "",
                     r.accepted ? "1" : "0"});
            }
            if (!r.accepted || !r.point.has_value()) continue;
            // re-extract curves through the estimated point for plotting
            const std::complex<double> pi1_est = [&] {
                const double x = result.grid->x_of_pi2(r.point->pi2);
                const double y = result.grid->y_of_pi3(r.point->pi3);
                const auto i = static_cast<std::size_t>(
                    std::clamp(x, 0.0, static_cast<double>(result.grid->n2()) - 2.0));
                const auto j = static_cast<std::size_t>(
                    std::clamp(y, 0.0, static_cast<double>(result.grid->n3()) - 2.0));
                const double tx = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
                const double ty = std::clamp(y - static_cast<double>(j), 0.0, 1.0);
                return (1 - tx) * (1 - ty) * result.grid->at(i, j) +
                       tx * (1 - ty) * result.grid->at(i + 1, j) +
                       (1 - tx) * ty * result.grid->at(i, j + 1) +
                       tx * ty * result.grid->at(i + 1, j + 1);
            }();
            for (inversion::Functional f :
                 {inversion::Functional::real_part, inversion::Functional::imag_part,
                  inversion::Functional::magnitude, inversion::Functional::phase}) {
                inversion::LevelCurve curve = inversion::extract_level_curve(
                    *result.grid, f, inversion::apply_functional(f, pi1_est));
                curve.omega = r.omega;
                std::size_t seg_id = 0;
                for (const auto& poly : curve.segments) {
                    for (const auto& p : poly) {
                        curves.row({csv::format_double(r.omega / (2.0 * std::numbers::pi)),
                                    inversion::functional_name(f), std::to_string(seg_id),
                                    csv::format_double(p.x), csv::format_double(p.y),
                                    csv::format_double(
                                        forward::sigma_of_pi2(p.x, r.omega, D)),
                                    csv::format_double(forward::dh_of_pi3(p.y, D))});
                    }
                    ++seg_id;
                }
            }
        }
        const std::string cpath = (fs::path(out_dir) / "level_curves.csv").string();
        curves.save(cpath);
        written.push_back(cpath);
        const std::string ipath = (fs::path(out_dir) / "intersections.csv").string();
        inters.save(ipath);
        written.push_back(ipath);
    }

    return written;
}

}  // namespace ectdim::pipeline
