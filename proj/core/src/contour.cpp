#include "ectdim/contour.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace ectdim::inversion {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Edge of the lattice: kind 0 runs from (i,j) to (i+1,j), kind 1 from (i,j)
// to (i,j+1). The packed key doubles as a deterministic ordering; the +1
// offsets keep 0 free as an "absent" sentinel.
std::uint64_t edge_key(int kind, std::size_t i, std::size_t j) {
    return (static_cast<std::uint64_t>(kind) << 62) |
           (static_cast<std::uint64_t>(i + 1) << 31) | static_cast<std::uint64_t>(j + 1);
}

struct IndexPoint {
    double x, y;
};

}  // namespace

const char* functional_name(Functional f) {
    switch (f) {
        case Functional::real_part: return "re";
        case Functional::imag_part: return "im";
        case Functional::magnitude: return "abs";
        case Functional::phase: return "phase";
    }
    return "?";
}

double apply_functional(Functional f, std::complex<double> v) {
    switch (f) {
        case Functional::real_part: return v.real();
        case Functional::imag_part: return v.imag();
        case Functional::magnitude: return std::abs(v);
        case Functional::phase: return std::arg(v);
    }
    return 0.0;
}

LevelCurve extract_level_curve(const forward::FGrid& grid, Functional functional,
                               double level) {
    grid.validate();
    if (functional == Functional::phase &&
        !(level > -std::numbers::pi && level <= std::numbers::pi)) {
        throw std::invalid_argument("phase level must lie in (-pi, pi]");
    }

    LevelCurve curve;
    curve.functional = functional;
    curve.level = level;

    const std::size_t n2 = grid.n2();
    const std::size_t n3 = grid.n3();

    std::vector<double> field(n2 * n3);
    for (std::size_t i = 0; i < n2; ++i) {
        for (std::size_t j = 0; j < n3; ++j) {
            field[i * n3 + j] = apply_functional(functional, grid.at(i, j));
        }
    }

    // Phase: unwrap the whole field along the raster so neighbours differ by
    // less than pi, then treat "phase == level (mod 2 pi)" as the union of
    // plain contours at level + 2 pi k inside the unwrapped range.
    if (functional == Functional::phase) {
        for (std::size_t i = 0; i < n2; ++i) {
            for (std::size_t j = 0; j < n3; ++j) {
                if (i == 0 && j == 0) continue;
                const double ref = (j > 0) ? field[i * n3 + (j - 1)] : field[(i - 1) * n3];
                double& v = field[i * n3 + j];
                v += kTwoPi * std::round((ref - v) / kTwoPi);
            }
        }
    }

    const auto [min_it, max_it] = std::minmax_element(field.begin(), field.end());
    const double vmin = *min_it;
    const double vmax = *max_it;

    if (vmin == vmax) {
        curve.degenerate = (level == vmin);
        return curve;
    }

    std::vector<double> levels;
    if (functional == Functional::phase) {
        const double k_lo = std::ceil((vmin - level) / kTwoPi);
        const double k_hi = std::floor((vmax - level) / kTwoPi);
        for (double k = k_lo; k <= k_hi; k += 1.0) levels.push_back(level + k * kTwoPi);
        if (levels.empty()) return curve;
    } else {
        if (level < vmin || level > vmax) return curve;
        levels.push_back(level);
    }

    auto value = [&field, n3](std::size_t i, std::size_t j) { return field[i * n3 + j]; };

    for (double lv : levels) {
        std::map<std::uint64_t, IndexPoint> vertex;
        std::map<std::uint64_t, std::vector<std::uint64_t>> adj;

        auto vertex_on = [&](int kind, std::size_t i, std::size_t j) {
            const std::uint64_t key = edge_key(kind, i, j);
            auto it = vertex.find(key);
            if (it != vertex.end()) return key;
            const double va = value(i, j);
            const double vb = (kind == 0) ? value(i + 1, j) : value(i, j + 1);
            double t = (lv - va) / (vb - va);
            t = std::clamp(t, 0.0, 1.0);
            IndexPoint p{static_cast<double>(i), static_cast<double>(j)};
            (kind == 0 ? p.x : p.y) += t;
            vertex.emplace(key, p);
            return key;
        };
        auto connect = [&](std::uint64_t a, std::uint64_t b) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        };

        for (std::size_t i = 0; i + 1 < n2; ++i) {
            for (std::size_t j = 0; j + 1 < n3; ++j) {
                const bool b00 = value(i, j) >= lv;
                const bool b10 = value(i + 1, j) >= lv;
                const bool b11 = value(i + 1, j + 1) >= lv;
                const bool b01 = value(i, j + 1) >= lv;

                // crossed edges of this cell: bottom, right, top, left
                const bool ce[4] = {b00 != b10, b10 != b11, b01 != b11, b00 != b01};
                const int crossed = ce[0] + ce[1] + ce[2] + ce[3];
                if (crossed == 0) continue;

                const std::uint64_t bottom = ce[0] ? vertex_on(0, i, j) : 0;
                const std::uint64_t right = ce[1] ? vertex_on(1, i + 1, j) : 0;
                const std::uint64_t top = ce[2] ? vertex_on(0, i, j + 1) : 0;
                const std::uint64_t left = ce[3] ? vertex_on(1, i, j) : 0;

                if (crossed == 2) {
                    std::uint64_t ends[2];
                    int n = 0;
                    for (std::uint64_t e : {bottom, right, top, left}) {
                        if (e != 0) ends[n++] = e;
                    }
                    connect(ends[0], ends[1]);
                } else if (crossed == 4) {
                    // saddle: the cell average decides which diagonal pairs up
                    const double avg = 0.25 * (value(i, j) + value(i + 1, j) +
                                               value(i + 1, j + 1) + value(i, j + 1));
                    const bool center_high = avg >= lv;
                    const bool diag00 = b00;  // high corners on the 00-11 diagonal?
                    if (diag00 == center_high) {
                        connect(bottom, right);
                        connect(top, left);
                    } else {
                        connect(bottom, left);
                        connect(top, right);
                    }
                }
            }
        }

        // Stitch: open chains start at degree-1 vertices, the rest are loops.
        std::map<std::uint64_t, bool> visited;
        auto walk = [&](std::uint64_t start) {
            std::vector<std::uint64_t> chain;
            chain.push_back(start);
            visited[start] = true;
            std::uint64_t prev = 0;
            std::uint64_t cur = start;
            for (;;) {
                std::uint64_t next = 0;
                for (std::uint64_t nb : adj[cur]) {
                    if (nb != prev && !visited[nb]) {
                        next = nb;
                        break;
                    }
                }
                if (next == 0) break;
                chain.push_back(next);
                visited[next] = true;
                prev = cur;
                cur = next;
            }
            return chain;
        };

        std::vector<std::vector<std::uint64_t>> chains;
        for (const auto& [key, nbs] : adj) {
            if (nbs.size() == 1 && !visited[key]) chains.push_back(walk(key));
        }
        for (const auto& [key, nbs] : adj) {
            if (!visited[key]) {
                auto chain = walk(key);
                chain.push_back(key);  // close the loop
                chains.push_back(std::move(chain));
            }
        }

        for (const auto& chain : chains) {
            std::vector<Point2> poly;
            poly.reserve(chain.size());
            for (std::uint64_t key : chain) {
                const IndexPoint& p = vertex.at(key);
                Point2 q{grid.pi2_at(p.x), grid.pi3_at(p.y)};
                if (!poly.empty() && poly.back().x == q.x && poly.back().y == q.y) continue;
                poly.push_back(q);
            }
            if (poly.size() >= 2) curve.segments.push_back(std::move(poly));
        }
    }

    return curve;
}

}  // namespace ectdim::inversion
