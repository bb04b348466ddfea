#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "ectdim/errors.hpp"

namespace ectdim::quad {

// Gauss-Kronrod 7-15 pair, positive abscissae half. Even indices of the
// Kronrod set coincide with the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

// 16-point Gauss-Legendre, positive half.
inline constexpr std::array<double, 8> kGL16Nodes = {
    0.989400934991649932596, 0.944575023073232576078, 0.865631202387831743880,
    0.755404408355003033895, 0.617876244402643748447, 0.458016777657227386342,
    0.281603550779258913230, 0.095012509837637440185};

inline constexpr std::array<double, 8> kGL16Weights = {
    0.027152459411754094852, 0.062253523938647892863, 0.095158511682492784810,
    0.124628971255533872052, 0.149595988816576732081, 0.169156519395002538189,
    0.182603415044923588867, 0.189450610455068496285};

template <typename F>
auto gauss_legendre_16(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    using T = decltype(f(c));
    T sum{};
    for (std::size_t i = 0; i < 8; ++i) {
        const double dx = h * kGL16Nodes[i];
        sum += kGL16Weights[i] * (f(c + dx) + f(c - dx));
    }
    return T(h * sum);
}

template <typename T>
struct PanelEstimate {
    T value{};
    double error = 0.0;
};

/// One Gauss-Kronrod 7-15 panel: Kronrod value plus |K15 - G7| error estimate.
template <typename F>
auto gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    using T = decltype(f(c));
    T kronrod{};
    T gauss{};
    for (std::size_t i = 0; i < 8; ++i) {
        const double dx = h * kKronrodNodes[i];
        const T pair = (i == 7) ? f(c) : T(f(c + dx) + f(c - dx));
        kronrod += kKronrodWeights[i] * pair;
        // odd Kronrod indices (and the centre) are the embedded Gauss-7 nodes
        if (i % 2 == 1 || i == 7) gauss += kGaussWeights[i / 2] * pair;
    }
    PanelEstimate<T> out;
    out.value = T(h * kronrod);
    out.error = std::abs(h * (kronrod - gauss));
    return out;
}

struct AdaptiveOptions {
    double rel_tol = 1e-9;
    double abs_floor = 1e-30;   // treat integrals this small as converged zeros
    std::size_t max_panels = 4000;
};

template <typename T>
struct AdaptiveResult {
    T value{};
    double error = 0.0;
    std::size_t panels = 0;
};

/// Globally adaptive bisection over an initial panel list. Splits the worst
/// panel until sum(err) <= max(rel_tol * |sum(value)|, abs_floor). The final
/// sum runs over panels ordered by position, so the result does not depend
/// on the split schedule. Throws ConvergenceError when the panel budget is
/// exhausted first.
template <typename F>
auto integrate_adaptive(F&& f, const std::vector<double>& breakpoints,
                        const AdaptiveOptions& opts = {}) {
    using T = decltype(f(breakpoints.front()));

    struct Panel {
        double a, b;
        T value;
        double error;
    };
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto est = gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
        panels.push_back({breakpoints[i], breakpoints[i + 1], est.value, est.error});
    }

    auto total = [&panels]() {
        T v{};
        double e = 0.0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair<T, double>(v, e);
    };

    auto [value, error] = total();
    while (error > std::max(opts.rel_tol * std::abs(value), opts.abs_floor) &&
           panels.size() < opts.max_panels) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].error > panels[worst].error ||
                (panels[i].error == panels[worst].error && panels[i].a < panels[worst].a)) {
                worst = i;
            }
        }
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        auto left = gauss_kronrod_15(f, p.a, mid);
        auto right = gauss_kronrod_15(f, mid, p.b);
        panels[worst] = {p.a, mid, left.value, left.error};
        panels.push_back({mid, p.b, right.value, right.error});
        std::tie(value, error) = total();
    }

    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    AdaptiveResult<T> out;
    for (const auto& p : panels) {
        out.value += p.value;
        out.error += p.error;
    }
    out.panels = panels.size();
    if (out.error > std::max(opts.rel_tol * std::abs(out.value), opts.abs_floor)) {
        throw ConvergenceError("adaptive quadrature did not reach tolerance", out.error);
    }
    return out;
}

}  // namespace ectdim::quad
