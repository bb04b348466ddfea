#include "ectdim/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ectdim::inversion {

namespace {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Segment {
    Vec2 a, b;
    std::size_t curve = 0;
};

/// Proper segment-segment intersection via the parametric solve; parallel or
/// degenerate pairs yield nothing.
bool segment_intersection(const Segment& s, const Segment& t, Vec2& out) {
    const Vec2 r = s.b - s.a;
    const Vec2 q = t.b - t.a;
    const double den = cross(r, q);
    const double scale = norm(r) * norm(q);
    if (scale == 0.0 || std::abs(den) < 1e-14 * scale) return false;
    const Vec2 d = t.a - s.a;
    const double u = cross(d, q) / den;
    const double v = cross(d, r) / den;
    if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) return false;
    out = {s.a.x + u * r.x, s.a.y + u * r.y};
    return true;
}

double point_segment_distance(Vec2 p, const Segment& s) {
    const Vec2 r = s.b - s.a;
    const double rr = dot(r, r);
    double t = rr == 0.0 ? 0.0 : dot(p - s.a, r) / rr;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 c{s.a.x + t * r.x, s.a.y + t * r.y};
    return norm(p - c);
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<IntersectionPoint> intersect_curves(const forward::FGrid& grid,
                                                std::span<const LevelCurve> curves,
                                                const IntersectOptions& opts) {
    std::set<Functional> functionals;
    for (const auto& c : curves) functionals.insert(c.functional);
    if (curves.size() < 2 || functionals.size() < 2) {
        throw std::invalid_argument(
            "intersect_curves needs at least two curves of distinct functionals");
    }
    for (std::size_t i = 0; i + 1 < curves.size(); ++i) {
        if (curves[i].omega.has_value() && curves[i + 1].omega.has_value() &&
            *curves[i].omega != *curves[i + 1].omega) {
            throw std::invalid_argument("curves from different frequencies");
        }
    }

    // Everything below runs in fractional-index space so that distances are
    // measured in grid cells regardless of the axis spacing.
    std::vector<std::vector<Segment>> per_curve(curves.size());
    for (std::size_t c = 0; c < curves.size(); ++c) {
        for (const auto& poly : curves[c].segments) {
            for (std::size_t v = 0; v + 1 < poly.size(); ++v) {
                Segment s;
                s.a = {grid.x_of_pi2(poly[v].x), grid.y_of_pi3(poly[v].y)};
                s.b = {grid.x_of_pi2(poly[v + 1].x), grid.y_of_pi3(poly[v + 1].y)};
                s.curve = c;
                per_curve[c].push_back(s);
            }
        }
    }

    struct Hit {
        Vec2 p;
        std::size_t seg_a, seg_b;  // indices into flat segment list
        double angle_sin = 0.0;
    };
    std::vector<Segment> flat;
    std::vector<std::size_t> curve_first(curves.size() + 1, 0);
    for (std::size_t c = 0; c < curves.size(); ++c) {
        curve_first[c] = flat.size();
        flat.insert(flat.end(), per_curve[c].begin(), per_curve[c].end());
    }
    curve_first[curves.size()] = flat.size();

    std::vector<Hit> hits;
    for (std::size_t ca = 0; ca < curves.size(); ++ca) {
        for (std::size_t cb = ca + 1; cb < curves.size(); ++cb) {
            if (curves[ca].functional == curves[cb].functional) continue;
            for (std::size_t ia = curve_first[ca]; ia < curve_first[ca + 1]; ++ia) {
                const Segment& sa = flat[ia];
                const double alox = std::min(sa.a.x, sa.b.x) - 1e-12;
                const double ahix = std::max(sa.a.x, sa.b.x) + 1e-12;
                const double aloy = std::min(sa.a.y, sa.b.y) - 1e-12;
                const double ahiy = std::max(sa.a.y, sa.b.y) + 1e-12;
                for (std::size_t ib = curve_first[cb]; ib < curve_first[cb + 1]; ++ib) {
                    const Segment& sb = flat[ib];
                    if (std::max(sb.a.x, sb.b.x) < alox || std::min(sb.a.x, sb.b.x) > ahix ||
                        std::max(sb.a.y, sb.b.y) < aloy || std::min(sb.a.y, sb.b.y) > ahiy) {
                        continue;
                    }
                    Vec2 p;
                    if (segment_intersection(sa, sb, p)) {
                        const Vec2 ra = sa.b - sa.a;
                        const Vec2 rb = sb.b - sb.a;
                        const double angle_sin =
                            std::abs(cross(ra, rb)) / (norm(ra) * norm(rb));
                        hits.push_back({p, ia, ib, angle_sin});
                    }
                }
            }
        }
    }
    if (hits.empty()) return {};

    DisjointSet ds(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        for (std::size_t j = i + 1; j < hits.size(); ++j) {
            if (norm(hits[i].p - hits[j].p) <= opts.cluster_radius) ds.unite(i, j);
        }
    }

    std::vector<std::vector<std::size_t>> clusters;
    {
        std::vector<std::size_t> root_of(hits.size());
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < hits.size(); ++i) root_of[i] = ds.find(i);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            if (root_of[i] == i) order.push_back(i);
        }
        for (std::size_t root : order) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < hits.size(); ++i) {
                if (root_of[i] == root) members.push_back(i);
            }
            clusters.push_back(std::move(members));
        }
    }

    std::vector<IntersectionPoint> points;
    for (const auto& members : clusters) {
        std::set<std::size_t> seg_ids;
        std::set<std::size_t> curve_ids;
        Vec2 centroid{0.0, 0.0};
        double transversality = 0.0;
        for (std::size_t m : members) {
            seg_ids.insert(hits[m].seg_a);
            seg_ids.insert(hits[m].seg_b);
            curve_ids.insert(flat[hits[m].seg_a].curve);
            curve_ids.insert(flat[hits[m].seg_b].curve);
            centroid.x += hits[m].p.x;
            centroid.y += hits[m].p.y;
            transversality = std::max(transversality, hits[m].angle_sin);
        }
        centroid.x /= static_cast<double>(members.size());
        centroid.y /= static_cast<double>(members.size());

        // Least-squares point for the supporting lines of the contributing
        // segments: minimize sum over segments of (n . (p - a))^2.
        double m00 = 0.0, m01 = 0.0, m11 = 0.0, b0 = 0.0, b1 = 0.0;
        for (std::size_t sid : seg_ids) {
            const Segment& s = flat[sid];
            Vec2 dir = s.b - s.a;
            const double len = norm(dir);
            if (len == 0.0) continue;
            const Vec2 n{-dir.y / len, dir.x / len};
            const double rhs = dot(n, s.a);
            m00 += n.x * n.x;
            m01 += n.x * n.y;
            m11 += n.y * n.y;
            b0 += n.x * rhs;
            b1 += n.y * rhs;
        }
        Vec2 p = centroid;
        const double det = m00 * m11 - m01 * m01;
        if (std::abs(det) > 1e-12 * std::max(1.0, m00 + m11)) {
            p = {(m11 * b0 - m01 * b1) / det, (m00 * b1 - m01 * b0) / det};
            // Guard against ill-conditioned normal equations dragging the
            // point out of the cluster; the centroid is always safe.
            if (norm(p - centroid) > opts.cluster_radius) p = centroid;
        }

        IntersectionPoint out;
        out.pi2 = grid.pi2_at(p.x);
        out.pi3 = grid.pi3_at(p.y);
        out.transversality = transversality;
        double residual = 0.0;
        for (std::size_t c : curve_ids) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t sid : seg_ids) {
                if (flat[sid].curve != c) continue;
                best = std::min(best, point_segment_distance(p, flat[sid]));
            }
            residual = std::max(residual, best);
            out.contributing.insert(curves[c].functional);
        }
        out.residual = residual;
        points.push_back(std::move(out));
    }

    std::sort(points.begin(), points.end(),
              [](const IntersectionPoint& a, const IntersectionPoint& b) {
                  if (a.residual != b.residual) return a.residual < b.residual;
                  return a.pi2 < b.pi2;
              });
    return points;
}

}  // namespace ectdim::inversion
