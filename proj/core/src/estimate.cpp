#include "ectdim/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ectdim/errors.hpp"
#include "ectdim/forward.hpp"

namespace ectdim::inversion {

namespace {

/// One Newton step on the bilinearly interpolated (Re F, Im F) = (Re pi1,
/// Im pi1) system, in fractional-index coordinates. Falls back to the input
/// point when the Jacobian is near-singular or the step leaves the grid.
void newton_refine(const forward::FGrid& grid, std::complex<double> pi1, double& x,
                   double& y) {
    const auto n2 = static_cast<double>(grid.n2());
    const auto n3 = static_cast<double>(grid.n3());
    const double xi = std::clamp(x, 0.0, n2 - 1.000001);
    const double yi = std::clamp(y, 0.0, n3 - 1.000001);
    const auto i = static_cast<std::size_t>(xi);
    const auto j = static_cast<std::size_t>(yi);
    const double tx = xi - static_cast<double>(i);
    const double ty = yi - static_cast<double>(j);

    const std::complex<double> f00 = grid.at(i, j);
    const std::complex<double> f10 = grid.at(i + 1, j);
    const std::complex<double> f01 = grid.at(i, j + 1);
    const std::complex<double> f11 = grid.at(i + 1, j + 1);

    const std::complex<double> f = (1 - tx) * (1 - ty) * f00 + tx * (1 - ty) * f10 +
                                   (1 - tx) * ty * f01 + tx * ty * f11;
    const std::complex<double> dfdx =
        (1 - ty) * (f10 - f00) + ty * (f11 - f01);
    const std::complex<double> dfdy =
        (1 - tx) * (f01 - f00) + tx * (f11 - f10);

    const double a = dfdx.real(), b = dfdy.real();
    const double c = dfdx.imag(), d = dfdy.imag();
    const double det = a * d - b * c;
    const double scale = std::abs(dfdx) * std::abs(dfdy);
    if (scale == 0.0 || std::abs(det) < 1e-12 * scale) return;

    const double rx = pi1.real() - f.real();
    const double ry = pi1.imag() - f.imag();
    const double dx = (d * rx - b * ry) / det;
    const double dy = (a * ry - c * rx) / det;
    const double nx = xi + dx;
    const double ny = yi + dy;
    if (nx < 0.0 || nx > n2 - 1.0 || ny < 0.0 || ny > n3 - 1.0) return;
    // a refinement step larger than a cell means the bilinear model is not
    // trustworthy here
    if (std::abs(dx) > 1.0 || std::abs(dy) > 1.0) return;
    x = nx;
    y = ny;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

EstimateRecord estimate_single_frequency(std::complex<double> dz_meas, double omega,
                                         const forward::ProbeGeometry& probe,
                                         const forward::FGrid& grid,
                                         const EstimateOptions& opts) {
    probe.validate();
    if (grid.probe_tag != forward::probe_shape_tag(probe)) {
        throw std::invalid_argument(
            "grid was built for a different probe shape (tag mismatch)");
    }

    EstimateRecord rec;
    rec.omega = omega;

    const std::complex<double> pi1 = forward::to_pi1(dz_meas, omega, probe);

    std::vector<LevelCurve> curves;
    for (Functional f : {Functional::real_part, Functional::imag_part,
                         Functional::magnitude, Functional::phase}) {
        LevelCurve c = extract_level_curve(grid, f, apply_functional(f, pi1));
        c.omega = omega;
        if (!c.empty()) curves.push_back(std::move(c));
    }

    std::set<Functional> distinct;
    for (const auto& c : curves) distinct.insert(c.functional);
    if (distinct.size() < 2) {
        rec.note = "fewer than two level curves exist on the grid (degenerate or "
                   "out-of-range measurement)";
        return rec;
    }

    IntersectOptions iopts;
    iopts.cluster_radius = opts.cluster_radius;
    const auto points = intersect_curves(grid, curves, iopts);
    if (points.empty()) {
        rec.note = "level curves do not intersect";
        return rec;
    }

    // Genuine roots of F = pi1: enough functionals agree and the crossing is
    // transversal. Everything else is a grazing pairwise coincidence.
    std::vector<const IntersectionPoint*> roots;
    for (const auto& p : points) {
        if (p.contributing.size() >= opts.min_contributing &&
            p.transversality >= opts.min_transversality) {
            roots.push_back(&p);
        }
    }

    if (roots.empty()) {
        rec.point = points.front();
        rec.region = classify_region(points.front().pi2, points.front().pi3,
                                     opts.region_k, opts.blind_boundary);
        rec.note = "no well-conditioned intersection of the level curves; "
                   "frequency discarded";
        return rec;
    }

    // Distinct roots further apart than the ambiguity separation mean the
    // measurement fits several plates equally well (the thickness-blind
    // fiber); no single-frequency decision is possible.
    const IntersectionPoint* best_root = roots.front();
    bool ambiguous = false;
    for (const auto* p : roots) {
        const double dx = grid.x_of_pi2(p->pi2) - grid.x_of_pi2(best_root->pi2);
        const double dy = grid.y_of_pi3(p->pi3) - grid.y_of_pi3(best_root->pi3);
        if (std::hypot(dx, dy) > opts.ambiguity_separation) {
            ambiguous = true;
            break;
        }
    }
    if (ambiguous) {
        // report the blind-side root: the largest pi2*pi3 explains why the
        // frequency carries no thickness information
        const IntersectionPoint* blind = best_root;
        for (const auto* p : roots) {
            if (p->pi2 * p->pi3 > blind->pi2 * blind->pi3) blind = p;
        }
        rec.point = *blind;
        rec.region =
            classify_region(blind->pi2, blind->pi3, opts.region_k, opts.blind_boundary);
        rec.note = "ambiguous intersection: the measurement is consistent with "
                   "several (pi2, pi3) points; frequency discarded";
        return rec;
    }

    // co-located roots: spec ordering (smallest residual, then smallest pi2)
    const IntersectionPoint* chosen = nullptr;
    for (const auto* p : roots) {
        const RegionLabel label =
            classify_region(p->pi2, p->pi3, opts.region_k, opts.blind_boundary);
        if (region_feasible(label.region)) {
            chosen = p;
            break;
        }
    }

    if (chosen == nullptr) {
        rec.point = *best_root;
        rec.region = classify_region(best_root->pi2, best_root->pi3, opts.region_k,
                                     opts.blind_boundary);
        rec.note = std::string("intersection falls in region (") +
                   region_name(rec.region->region) + "), frequency discarded";
        return rec;
    }

    IntersectionPoint point = *chosen;
    if (opts.newton_refine) {
        double x = grid.x_of_pi2(point.pi2);
        double y = grid.y_of_pi3(point.pi3);
        newton_refine(grid, pi1, x, y);
        point.pi2 = grid.pi2_at(x);
        point.pi3 = grid.pi3_at(y);
    }

    rec.point = point;
    rec.region = classify_region(point.pi2, point.pi3, opts.region_k, opts.blind_boundary);
    if (!region_feasible(rec.region->region)) {
        // refinement nudged the point across a region boundary; keep the
        // pre-refinement classification decision
        rec.region = classify_region(chosen->pi2, chosen->pi3, opts.region_k,
                                     opts.blind_boundary);
    }
    rec.sigma_hat =
        forward::sigma_of_pi2(point.pi2, omega, probe.characteristic_length());
    rec.dh_hat = forward::dh_of_pi3(point.pi3, probe.characteristic_length());
    rec.accepted = true;
    return rec;
}

std::vector<std::vector<Point2>> map_curve_to_physical(const LevelCurve& curve,
                                                       double omega, double D) {
    if (!curve.omega.has_value()) {
        throw std::invalid_argument("curve does not carry its frequency");
    }
    if (*curve.omega != omega) {
        throw std::invalid_argument("curve frequency disagrees with the requested one");
    }
    if (!(omega > 0.0) || !(D > 0.0)) {
        throw std::invalid_argument("map_curve_to_physical requires omega, D > 0");
    }
    std::vector<std::vector<Point2>> out;
    out.reserve(curve.segments.size());
    for (const auto& poly : curve.segments) {
        std::vector<Point2> mapped;
        mapped.reserve(poly.size());
        for (const auto& p : poly) {
            mapped.push_back(Point2{forward::sigma_of_pi2(p.x, omega, D),
                                    forward::dh_of_pi3(p.y, D)});
        }
        out.push_back(std::move(mapped));
    }
    return out;
}

FusedEstimate fuse_multi_frequency(std::span<const EstimateRecord> records) {
    std::vector<std::size_t> accepted;
    std::vector<std::string> regions;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].accepted) {
            accepted.push_back(i);
        } else if (records[i].region.has_value()) {
            regions.push_back(region_name(records[i].region->region));
        } else {
            regions.push_back("none");
        }
    }
    if (accepted.empty()) {
        throw InfeasibleError(
            "no frequency produced a feasible estimate; regions encountered: " +
                [&regions] {
                    std::string s;
                    for (const auto& r : regions) {
                        if (!s.empty()) s += ", ";
                        s += r;
                    }
                    return s.empty() ? std::string("none") : s;
                }(),
            regions);
    }

    std::vector<double> sigmas;
    std::vector<double> dhs;
    for (std::size_t i : accepted) {
        sigmas.push_back(records[i].sigma_hat);
        dhs.push_back(records[i].dh_hat);
    }

    // 3 x MAD rule per quantity; a record survives only if both its sigma and
    // its dh pass.
    const double med_s = median_of(sigmas);
    const double med_d = median_of(dhs);
    std::vector<double> abs_s, abs_d;
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
        abs_s.push_back(std::abs(sigmas[k] - med_s));
        abs_d.push_back(std::abs(dhs[k] - med_d));
    }
    const double mad_s = median_of(abs_s);
    const double mad_d = median_of(abs_d);

    FusedEstimate fused;
    fused.n_accepted = accepted.size();
    std::vector<double> keep_s, keep_d;
    for (std::size_t k = 0; k < accepted.size(); ++k) {
        const bool out_s = std::abs(sigmas[k] - med_s) > 3.0 * mad_s;
        const bool out_d = std::abs(dhs[k] - med_d) > 3.0 * mad_d;
        if (out_s || out_d) {
            fused.rejected.push_back(accepted[k]);
            continue;
        }
        keep_s.push_back(sigmas[k]);
        keep_d.push_back(dhs[k]);
        if (records[accepted[k]].point.has_value()) {
            fused.residuals.push_back(records[accepted[k]].point->residual);
        }
    }
    if (keep_s.empty()) {
        // every accepted record flagged (possible only with pathological
        // dispersion); fall back to the medians
        keep_s = sigmas;
        keep_d = dhs;
        fused.rejected.clear();
    }

    fused.n_used = keep_s.size();
    fused.sigma = std::accumulate(keep_s.begin(), keep_s.end(), 0.0) /
                  static_cast<double>(keep_s.size());
    fused.dh = std::accumulate(keep_d.begin(), keep_d.end(), 0.0) /
               static_cast<double>(keep_d.size());
    fused.sigma_std = sample_std(keep_s, fused.sigma);
    fused.dh_std = sample_std(keep_d, fused.dh);
    return fused;
}

}  // namespace ectdim::inversion
