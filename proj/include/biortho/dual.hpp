#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/errors.hpp"
#include "biortho/summability.hpp"
#include "biortho/symbol.hpp"

namespace biortho {

/// Periodic trapezoid quadrature controls. Node counts double from
/// initial_nodes until every requested coefficient moves by less than the
/// tolerance; shift = 0.5 selects midpoint nodes (used by the obstruction
/// probe to step around exact symbol zeros).
struct QuadratureOptions {
    int initial_nodes = 64;
    int max_nodes_1d = 65536;   // 2^16
    int max_nodes_2d = 1024;    // 2^10 per axis
    double shift = 0.0;
    int max_nodes_for(int dim) const { return dim == 1 ? max_nodes_1d : max_nodes_2d; }
};

namespace detail {

/// c_l = (1/N^D) sum_j samples_j e^{-i p_j . l}, p_j = 2pi (j+shift)/N,
/// for |l|_inf <= out_radius, evaluated one axis at a time.
inline CoeffLattice coeffs_from_samples(const std::vector<Complex>& samples, int dim,
                                        int nodes, int out_radius, double shift) {
    const int W = 2 * out_radius + 1;
    const double step = 2.0 * std::numbers::pi / nodes;
    std::vector<Complex> phase(static_cast<std::size_t>(nodes) * W);
    for (int j = 0; j < nodes; ++j) {
        const double pj = step * (j + shift);
        for (int l = -out_radius; l <= out_radius; ++l)
            phase[static_cast<std::size_t>(j) * W + (l + out_radius)] =
                std::polar(1.0, -pj * l);
    }

    CoeffLattice out(dim, out_radius);
    if (dim == 1) {
        for (int l = -out_radius; l <= out_radius; ++l) {
            Complex acc(0.0, 0.0);
            for (int j = 0; j < nodes; ++j)
                acc += samples[static_cast<std::size_t>(j)] *
                       phase[static_cast<std::size_t>(j) * W + (l + out_radius)];
            out.set({l}, acc / static_cast<double>(nodes));
        }
        return out;
    }
    if (dim == 2) {
        // T[l1][j2] = sum_{j1} samples[j1][j2] e^{-i p_{j1} l1}
        std::vector<Complex> t(static_cast<std::size_t>(W) * nodes, Complex(0, 0));
        for (int j1 = 0; j1 < nodes; ++j1)
            for (int l1 = -out_radius; l1 <= out_radius; ++l1) {
                const Complex ph = phase[static_cast<std::size_t>(j1) * W + (l1 + out_radius)];
                const std::size_t row = static_cast<std::size_t>(l1 + out_radius) * nodes;
                const std::size_t src = static_cast<std::size_t>(j1) * nodes;
                for (int j2 = 0; j2 < nodes; ++j2) t[row + j2] += samples[src + j2] * ph;
            }
        const double norm = 1.0 / (static_cast<double>(nodes) * nodes);
        for (int l1 = -out_radius; l1 <= out_radius; ++l1)
            for (int l2 = -out_radius; l2 <= out_radius; ++l2) {
                Complex acc(0.0, 0.0);
                const std::size_t row = static_cast<std::size_t>(l1 + out_radius) * nodes;
                for (int j2 = 0; j2 < nodes; ++j2)
                    acc += t[row + j2] *
                           phase[static_cast<std::size_t>(j2) * W + (l2 + out_radius)];
                out.set({l1, l2}, acc * norm);
            }
        return out;
    }
    throw std::invalid_argument("coeffs_from_samples: only D <= 2");
}

/// Node-doubling driver for Fourier coefficients of transform(symbol(p)).
/// Returns the converged lattice and the node count that reached it; throws
/// a non-convergence refusal carrying the final delta otherwise.
inline CoeffLattice fourier_coeffs_of(
    const SymbolFunction& s, const std::function<Complex(Complex)>& transform,
    int out_radius, double tol, const QuadratureOptions& opts, int* nodes_used) {
    std::optional<CoeffLattice> prev;
    const int cap = opts.max_nodes_for(s.dimension);
    for (int nodes = opts.initial_nodes; nodes <= cap; nodes *= 2) {
        auto samples = symbol_on_grid(s, nodes, opts.shift);
        for (auto& v : samples) v = transform(v);
        CoeffLattice cur = coeffs_from_samples(samples, s.dimension, nodes, out_radius,
                                               opts.shift);
        if (prev) {
            const double change = max_abs_difference(cur, *prev);
            if (change < tol) {
                if (nodes_used) *nodes_used = nodes;
                return cur;
            }
        }
        prev = std::move(cur);
    }
    RefusalError err(RefusalReason::non_convergence,
                     "quadrature did not converge within the node cap");
    err.nodes = cap;
    if (prev) {
        // Recompute the final delta so the diagnostic carries it.
        auto samples = symbol_on_grid(s, cap, opts.shift);
        for (auto& v : samples) v = transform(v);
        CoeffLattice last =
            coeffs_from_samples(samples, s.dimension, cap, out_radius, opts.shift);
        err.last_change = max_abs_difference(last, *prev);
    }
    throw err;
}

}  // namespace detail

/// Fourier coefficients of 1/symbol — the dual family seed. Refuses when
/// the symbol is not cleanly invertible; an exact zero carries its location
/// in the diagnostic (the a = 2 box / L = 1 coherent obstruction).
inline CoeffLattice dual_coeffs(const SymbolFunction& s, int out_radius, double tol = -1.0,
                                const QuadratureOptions& opts = {}, int* nodes_used = nullptr) {
    if (tol < 0) tol = s.dimension == 1 ? 1e-12 : 1e-10;
    const auto verdict = classify(s);
    if (verdict.status != Invertibility::invertible) {
        RefusalError err(verdict.status == Invertibility::has_zero
                             ? RefusalReason::has_zero
                             : RefusalReason::near_singular,
                         std::string("symbol is ") + to_string(verdict.status) +
                             "; dual coefficients are not defined");
        err.argmin = verdict.argmin;
        err.min_abs = verdict.min_abs;
        throw err;
    }
    return detail::fourier_coeffs_of(
        s, [](Complex v) { return 1.0 / v; }, out_radius, tol, opts, nodes_used);
}

/// Fourier coefficients of the symbol itself. Round-trips the overlaps:
/// d_l == alpha_l once the node count clears the window (used as a
/// quadrature self-test).
inline CoeffLattice direct_coeffs(const SymbolFunction& s, int out_radius, double tol = -1.0,
                                  const QuadratureOptions& opts = {},
                                  int* nodes_used = nullptr) {
    if (tol < 0) tol = s.dimension == 1 ? 1e-12 : 1e-10;
    return detail::fourier_coeffs_of(
        s, [](Complex v) { return v; }, out_radius, tol, opts, nodes_used);
}

/// Max over |l|_inf <= check_radius of |(c*d)(l) - delta_{l,0}|.
inline double verify_delta(const CoeffLattice& c, const CoeffLattice& d, int check_radius) {
    const CoeffLattice conv = convolve(c, d);
    double worst = 0.0;
    const MultiIndex zero = MultiIndex::zero(conv.dimension());
    CoeffLattice window(conv.dimension(), std::min(check_radius, conv.radius()));
    window.for_each([&](const MultiIndex& l, Complex) {
        const Complex want = (l == zero) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        worst = std::max(worst, std::abs(conv.at(l) - want));
    });
    return worst;
}

/// sum_n c_n d_{-n}; equals one when c and d invert each other.
inline Complex pairing_sum(const CoeffLattice& c, const CoeffLattice& d) {
    Complex acc(0.0, 0.0);
    c.for_each([&](const MultiIndex& n, Complex v) { acc += v * d.at(-n); });
    return acc;
}

/// Matched dual/direct coefficient pair with its verification data. The
/// residual is always reported together with the radii it was measured at.
struct DualPair {
    CoeffLattice c;
    CoeffLattice d;
    double delta_residual = 0.0;
    int check_radius = 0;
    int quadrature_nodes = 0;
    SummabilityReport c_summability;
    SummabilityReport d_summability;
    Complex pairing{0.0, 0.0};
    double coeff_l2_norm_sq = 0.0;     // sum |c_l|^2 over the window
    double parseval_integral = 0.0;    // (2pi)^-D integral of 1/alpha^2
    double mean_inverse_symbol = 0.0;  // (2pi)^-D integral of 1/alpha (= c_0)
};

inline double verify_delta(const DualPair& pair, int check_radius) {
    return verify_delta(pair.c, pair.d, check_radius);
}

inline DualPair make_dual_pair(const SymbolFunction& s, int c_radius, int d_radius,
                               double tol = -1.0, int check_radius = 10,
                               const QuadratureOptions& opts = {}) {
    DualPair pair{CoeffLattice(s.dimension, 0), CoeffLattice(s.dimension, 0)};
    int nodes_c = 0, nodes_d = 0;
    pair.c = dual_coeffs(s, c_radius, tol, opts, &nodes_c);
    pair.d = direct_coeffs(s, d_radius, tol, opts, &nodes_d);
    pair.quadrature_nodes = std::max(nodes_c, nodes_d);
    pair.check_radius = check_radius;
    pair.delta_residual = verify_delta(pair.c, pair.d, check_radius);
    pair.pairing = pairing_sum(pair.c, pair.d);
    pair.c_summability = decay_fit(pair.c);
    pair.d_summability = decay_fit(pair.d);
    pair.coeff_l2_norm_sq = lp_norm(pair.c, 2.0);
    pair.coeff_l2_norm_sq *= pair.coeff_l2_norm_sq;

    // Both scalar integrals recorded: Parseval pairs the l2 norm with
    // 1/alpha^2; the plain 1/alpha integral equals c_0.
    const auto grid = symbol_on_grid(s, pair.quadrature_nodes, opts.shift);
    double inv_sq = 0.0, inv = 0.0;
    for (const auto& v : grid) {
        const double m = std::abs(v);
        inv_sq += 1.0 / (m * m);
        inv += (1.0 / v).real();
    }
    pair.parseval_integral = inv_sq / static_cast<double>(grid.size());
    pair.mean_inverse_symbol = inv / static_cast<double>(grid.size());
    return pair;
}

}  // namespace biortho
