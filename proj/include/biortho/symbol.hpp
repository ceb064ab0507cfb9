#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/errors.hpp"

namespace biortho {

/// Truncated Fourier series p -> sum_l a_l e^{i p.l} built from an overlap
/// window. The overlaps must be Hermitian-symmetric so the symbol is real
/// up to rounding.
struct SymbolFunction {
    CoeffLattice overlaps;
    int dimension;

    explicit SymbolFunction(CoeffLattice lat, double symmetry_tol = 1e-8)
        : overlaps(std::move(lat)), dimension(overlaps.dimension()) {
        if (!check_hermitian_symmetry(overlaps, symmetry_tol))
            throw std::invalid_argument(
                "SymbolFunction: overlaps are not Hermitian-symmetric within " +
                std::to_string(symmetry_tol));
    }
};

/// Direct evaluation at one point. The formula is 2pi-periodic per axis, so
/// any real p is accepted even though the canonical domain is [0, 2pi)^D.
inline Complex symbol_eval(const SymbolFunction& s, const std::vector<double>& p) {
    if (static_cast<int>(p.size()) != s.dimension)
        throw std::invalid_argument("symbol_eval: point dimension mismatch");
    Complex acc(0.0, 0.0);
    s.overlaps.for_each([&](const MultiIndex& l, Complex v) {
        if (v == Complex(0.0, 0.0)) return;
        double phase = 0.0;
        for (int i = 0; i < s.dimension; ++i) phase += p[i] * l[i];
        acc += v * std::polar(1.0, phase);
    });
    return acc;
}

inline Complex symbol_eval(const SymbolFunction& s, double p) {
    return symbol_eval(s, std::vector<double>{p});
}

/// Values on the equispaced grid p_j = 2pi (j + shift)/N per axis, row-major
/// over axes. Uses one contraction pass per axis instead of the naive
/// O(N^D W^D) double loop.
inline std::vector<Complex> symbol_on_grid(const SymbolFunction& s, int nodes,
                                           double shift = 0.0) {
    if (nodes < 1) throw std::invalid_argument("symbol_on_grid: nodes < 1");
    const int R = s.overlaps.radius();
    const int W = 2 * R + 1;
    const double step = 2.0 * std::numbers::pi / nodes;

    // Phase table e^{i p_j l} for l in [-R, R].
    std::vector<Complex> phase(static_cast<std::size_t>(nodes) * W);
    for (int j = 0; j < nodes; ++j) {
        const double pj = step * (j + shift);
        for (int l = -R; l <= R; ++l)
            phase[static_cast<std::size_t>(j) * W + (l + R)] = std::polar(1.0, pj * l);
    }

    if (s.dimension == 1) {
        std::vector<Complex> out(nodes);
        for (int j = 0; j < nodes; ++j) {
            Complex acc(0.0, 0.0);
            for (int l = -R; l <= R; ++l)
                acc += s.overlaps.at({l}) * phase[static_cast<std::size_t>(j) * W + (l + R)];
            out[j] = acc;
        }
        return out;
    }
    if (s.dimension == 2) {
        // First contract axis 0: G[j1][l2] = sum_{l1} a_{l1,l2} e^{i p_{j1} l1}.
        std::vector<Complex> g(static_cast<std::size_t>(nodes) * W);
        for (int j1 = 0; j1 < nodes; ++j1)
            for (int l2 = -R; l2 <= R; ++l2) {
                Complex acc(0.0, 0.0);
                for (int l1 = -R; l1 <= R; ++l1)
                    acc += s.overlaps.at({l1, l2}) *
                           phase[static_cast<std::size_t>(j1) * W + (l1 + R)];
                g[static_cast<std::size_t>(j1) * W + (l2 + R)] = acc;
            }
        std::vector<Complex> out(static_cast<std::size_t>(nodes) * nodes);
        for (int j1 = 0; j1 < nodes; ++j1)
            for (int j2 = 0; j2 < nodes; ++j2) {
                Complex acc(0.0, 0.0);
                for (int l2 = -R; l2 <= R; ++l2)
                    acc += g[static_cast<std::size_t>(j1) * W + (l2 + R)] *
                           phase[static_cast<std::size_t>(j2) * W + (l2 + R)];
                out[static_cast<std::size_t>(j1) * nodes + j2] = acc;
            }
        return out;
    }
    throw std::invalid_argument("symbol_on_grid: only D <= 2 grids are supported");
}

struct MinSearchResult {
    std::vector<double> argopt;
    double value = 0.0;
};

namespace detail {

inline double wrap_2pi(double p) {
    const double twopi = 2.0 * std::numbers::pi;
    p = std::fmod(p, twopi);
    if (p < 0) p += twopi;
    return p;
}

// Golden-section minimization of f on [lo, hi] down to interval < tol.
template <class F>
inline double golden_section(F&& f, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Coarse grid scan of |symbol| followed by local refinement: golden
/// section in 1D, cyclic coordinate descent in 2D.
inline MinSearchResult find_min_abs(const SymbolFunction& s, int grid_per_axis = 256,
                                    double refine_tol = 1e-10) {
    if (grid_per_axis < 8) throw std::invalid_argument("find_min_abs: grid too coarse");
    const double step = 2.0 * std::numbers::pi / grid_per_axis;
    auto mod_abs = [&](const std::vector<double>& p) { return std::abs(symbol_eval(s, p)); };

    const auto grid = symbol_on_grid(s, grid_per_axis);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i]) < std::abs(grid[best])) best = i;

    MinSearchResult res;
    if (s.dimension == 1) {
        const double p0 = step * static_cast<double>(best);
        const double p = detail::golden_section(
            [&](double x) { return mod_abs({x}); }, p0 - step, p0 + step, refine_tol);
        res.argopt = {detail::wrap_2pi(p)};
        res.value = mod_abs({p});
        return res;
    }
    // 2D coordinate descent from the grid argmin.
    double p1 = step * static_cast<double>(best / grid_per_axis);
    double p2 = step * static_cast<double>(best % grid_per_axis);
    double span = step;
    for (int sweep = 0; sweep < 200 && span > refine_tol / 4; ++sweep) {
        p1 = detail::golden_section(
            [&](double x) { return mod_abs({x, p2}); }, p1 - span, p1 + span,
            std::max(refine_tol / 8, span * 1e-4));
        p2 = detail::golden_section(
            [&](double x) { return mod_abs({p1, x}); }, p2 - span, p2 + span,
            std::max(refine_tol / 8, span * 1e-4));
        span *= 0.5;
    }
    res.argopt = {detail::wrap_2pi(p1), detail::wrap_2pi(p2)};
    res.value = mod_abs({p1, p2});
    return res;
}

/// Same search applied to -|symbol|.
inline MinSearchResult find_max_abs(const SymbolFunction& s, int grid_per_axis = 256,
                                    double refine_tol = 1e-10) {
    if (grid_per_axis < 8) throw std::invalid_argument("find_max_abs: grid too coarse");
    const double step = 2.0 * std::numbers::pi / grid_per_axis;
    auto neg_abs_1 = [&](double x) { return -std::abs(symbol_eval(s, {x})); };

    const auto grid = symbol_on_grid(s, grid_per_axis);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i]) > std::abs(grid[best])) best = i;

    MinSearchResult res;
    if (s.dimension == 1) {
        const double p0 = step * static_cast<double>(best);
        const double p =
            detail::golden_section(neg_abs_1, p0 - step, p0 + step, refine_tol);
        res.argopt = {detail::wrap_2pi(p)};
        res.value = std::abs(symbol_eval(s, {p}));
        return res;
    }
    double p1 = step * static_cast<double>(best / grid_per_axis);
    double p2 = step * static_cast<double>(best % grid_per_axis);
    double span = step;
    for (int sweep = 0; sweep < 200 && span > refine_tol / 4; ++sweep) {
        p1 = detail::golden_section(
            [&](double x) { return -std::abs(symbol_eval(s, {x, p2})); }, p1 - span,
            p1 + span, std::max(refine_tol / 8, span * 1e-4));
        p2 = detail::golden_section(
            [&](double x) { return -std::abs(symbol_eval(s, {p1, x})); }, p2 - span,
            p2 + span, std::max(refine_tol / 8, span * 1e-4));
        span *= 0.5;
    }
    res.argopt = {detail::wrap_2pi(p1), detail::wrap_2pi(p2)};
    res.value = std::abs(symbol_eval(s, {p1, p2}));
    return res;
}

enum class Invertibility { invertible, has_zero, near_singular };

inline const char* to_string(Invertibility s) {
    switch (s) {
        case Invertibility::invertible: return "invertible";
        case Invertibility::has_zero: return "has_zero";
        case Invertibility::near_singular: return "near_singular";
    }
    return "unknown";
}

struct InvertibilityVerdict {
    Invertibility status = Invertibility::invertible;
    double min_abs = 0.0;
    std::vector<double> argmin;
    double max_abs = 0.0;
    double margin = 0.0;  // min_abs / max_abs
    double zero_tol = 0.0;
    double near_tol = 0.0;
};

/// Invertibility gate for the dual construction. Defaults: zero_tol 1e-8
/// absolute, near_tol 1e-3 of the symbol maximum (pass a negative near_tol
/// to request the default).
inline InvertibilityVerdict classify(const SymbolFunction& s, double zero_tol = 1e-8,
                                     double near_tol = -1.0, int grid_per_axis = 256,
                                     double refine_tol = 1e-10) {
    const auto mn = find_min_abs(s, grid_per_axis, refine_tol);
    const auto mx = find_max_abs(s, grid_per_axis, refine_tol);
    InvertibilityVerdict v;
    v.min_abs = mn.value;
    v.argmin = mn.argopt;
    v.max_abs = mx.value;
    v.margin = mx.value > 0 ? mn.value / mx.value : 0.0;
    v.zero_tol = zero_tol;
    v.near_tol = near_tol < 0 ? 1e-3 * mx.value : near_tol;
    if (!(zero_tol < v.near_tol))
        throw std::invalid_argument("classify: zero_tol must be < near_tol");
    if (v.min_abs <= v.zero_tol)
        v.status = Invertibility::has_zero;
    else if (v.min_abs <= v.near_tol)
        v.status = Invertibility::near_singular;
    else
        v.status = Invertibility::invertible;
    return v;
}

}  // namespace biortho
