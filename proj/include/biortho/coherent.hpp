#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/dual.hpp"
#include "biortho/errors.hpp"
#include "biortho/models.hpp"
#include "biortho/summability.hpp"
#include "biortho/symbol.hpp"

namespace biortho {

inline Complex coherent_overlap(int L, const MultiIndex& n) {
    const long long n1 = n[0], n2 = n[1];
    const double mag = std::exp(-std::numbers::pi * L * (n1 * n1 + n2 * n2) / 2.0);
    const bool neg = (static_cast<long long>(L) * n1 * n2) % 2 != 0;
    return Complex(neg ? -mag : mag, 0.0);
}

/// First-order dual seed: c_0 = 1 and c_s = -e^{-pi L/2} on the four
/// nearest neighbors Gamma = {(+-1,0),(0,+-1)}; all other entries zero.
struct PerturbativeDual {
    int L = 0;
    CoeffLattice coefficients{2, 1};
};

inline const std::vector<MultiIndex>& gamma_shell() {
    static const std::vector<MultiIndex> g = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    return g;
}

inline PerturbativeDual perturbative_dual(int L) {
    if (L < 1)
        throw RefusalError(RefusalReason::unsupported_parameter,
                           "perturbative_dual requires L >= 1");
    PerturbativeDual p;
    p.L = L;
    p.coefficients.set({0, 0}, Complex(1.0, 0.0));
    const double off = -std::exp(-std::numbers::pi * L / 2.0);
    for (const auto& s : gamma_shell()) p.coefficients.set(s, Complex(off, 0.0));
    return p;
}

/// Finite-truncation matrix element sum_k conj(c_k) I_{k+m-n}: the overlap
/// of the candidate dual vector at site m with the lattice state at site n.
inline Complex gram_overlap(const CoeffLattice& c, int L, const MultiIndex& m,
                            const MultiIndex& n, int radius) {
    if (c.dimension() != 2)
        throw std::invalid_argument("gram_overlap: dual lattice must be 2D");
    Complex acc(0.0, 0.0);
    CoeffLattice window(2, radius);
    window.for_each([&](const MultiIndex& k, Complex) {
        const Complex ck = c.at(k);
        if (ck == Complex(0.0, 0.0)) return;
        acc += std::conj(ck) * coherent_overlap(L, k + m - n);
    });
    return acc;
}

/// |<Psi_{(1,0)}, phi_0>| for the first-order dual, in closed form:
/// e^{-3 pi L / 2} |2 (-1)^L + e^{-pi L}|. For odd L this is the familiar
/// (2 - e^{-pi L}) factor; even L flips the inner sign. Both round to the
/// same tabulated values.
inline double offdiag_gram_closed_form(int L) {
    const double inner = 2.0 * (L % 2 == 0 ? 1.0 : -1.0) + std::exp(-std::numbers::pi * L);
    return std::exp(-3.0 * std::numbers::pi * L / 2.0) * std::abs(inner);
}

/// <Psi_0, phi_0> for the first-order dual: 1 - 4 e^{-pi L}, exactly.
inline double diag_gram_closed_form(int L) {
    return 1.0 - 4.0 * std::exp(-std::numbers::pi * L);
}

struct NormBoundCheck {
    double bound = 0.0;        // 16 e^{-pi L}
    double l1_residual = 0.0;  // l1 norm of approx_X * approx_Y - delta
};

/// Checks that the first-order inverse really inverts the first-order X to
/// within the advertised operator bound. The l1 coefficient norm dominates
/// the operator norm for commuting unitaries, so the check is rigorous.
inline NormBoundCheck norm_bound_check(int L) {
    if (L < 1)
        throw RefusalError(RefusalReason::unsupported_parameter,
                           "norm_bound_check requires L >= 1");
    const double eps = std::exp(-std::numbers::pi * L / 2.0);
    CoeffLattice x = CoeffLattice(2, 1), y = CoeffLattice(2, 1);
    x.set({0, 0}, Complex(1.0, 0.0));
    y.set({0, 0}, Complex(1.0, 0.0));
    for (const auto& s : gamma_shell()) {
        x.set(s, Complex(-eps, 0.0));
        y.set(s, Complex(eps, 0.0));
    }
    CoeffLattice conv = convolve(x, y);
    conv.set({0, 0}, conv.at({0, 0}) - Complex(1.0, 0.0));
    NormBoundCheck r;
    r.bound = 16.0 * std::exp(-std::numbers::pi * L);
    r.l1_residual = lp_norm(conv, 1.0);
    if (r.l1_residual > r.bound * (1.0 + 1e-12))
        throw std::logic_error("norm_bound_check: residual exceeded the closed-form bound");
    return r;
}

/// Exact 2D dual via quadrature inversion of I^{(L)}(p). L = 1 is refused:
/// the symbol vanishes at (pi, pi) and the coefficients do not exist.
inline CoeffLattice exact_dual_2d(int L, int out_radius, double tol = 1e-10,
                                  const QuadratureOptions& opts = {},
                                  int* nodes_used = nullptr) {
    if (L < 1)
        throw RefusalError(RefusalReason::unsupported_parameter,
                           "exact_dual_2d requires L >= 1");
    if (L == 1) {
        RefusalError err(RefusalReason::has_zero,
                         "I^(1) vanishes at (pi, pi); the exact dual does not exist");
        err.argmin = {std::numbers::pi, std::numbers::pi};
        throw err;
    }
    const OverlapModel model = coherent_model(L);
    const SymbolFunction s(model.lattice(std::max(6, model.default_radius)));
    return dual_coeffs(s, out_radius, tol, opts, nodes_used);
}

// ---------------------------------------------------------------------------
// kq-representation machinery
// ---------------------------------------------------------------------------

/// Point of the Zak fundamental box; the shipped convention is the L = 1
/// lattice constant a = sqrt(2 pi), so k, q range over [0, sqrt(2 pi)).
struct ZakPoint {
    double k = 0.0;
    double q = 0.0;
};

/// theta_3(z, t) = 1 + 2 sum_{n>=1} t^{n^2} cos(2 n z), truncated once the
/// term bound 2 t^{n^2} e^{2 n |Im z|} falls below tail_tol.
inline Complex theta3(Complex z, double t, double tail_tol = 1e-18) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("theta3: need 0 < t < 1");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("theta3: tail_tol must be positive");
    Complex acc(1.0, 0.0);
    const double y = std::abs(z.imag());
    for (int n = 1; n < 64; ++n) {
        const double bound =
            2.0 * std::pow(t, static_cast<double>(n) * n) * std::exp(2.0 * n * y);
        acc += 2.0 * std::pow(t, static_cast<double>(n) * n) * std::cos(2.0 * n * z);
        if (bound < tail_tol) break;
    }
    return acc;
}

inline Complex theta3_prime(Complex z, double t, double tail_tol = 1e-18) {
    Complex acc(0.0, 0.0);
    const double y = std::abs(z.imag());
    for (int n = 1; n < 64; ++n) {
        const double bound =
            4.0 * n * std::pow(t, static_cast<double>(n) * n) * std::exp(2.0 * n * y);
        acc += -4.0 * n * std::pow(t, static_cast<double>(n) * n) * std::sin(2.0 * n * z);
        if (bound < tail_tol) break;
    }
    return acc;
}

/// Zak transform of the normalized Gaussian ground state on a lattice of
/// constant a:
///   (1/sqrt(a)) pi^{-1/4} e^{-q^2/2} theta_3((a/2)(k - i q), e^{-a^2/2}).
inline Complex zak_gaussian_lattice(double k, double q, double lattice_a,
                                    double tail_tol = 1e-18) {
    const double prefactor =
        std::pow(std::numbers::pi, -0.25) / std::sqrt(lattice_a);
    const Complex z = 0.5 * lattice_a * Complex(k, -q);
    const double t = std::exp(-lattice_a * lattice_a / 2.0);
    return prefactor * std::exp(-q * q / 2.0) * theta3(z, t, tail_tol);
}

/// L = 1 convention (a = sqrt(2 pi)): matches
/// sqrt(1/(sqrt(2) pi)) e^{-q^2/2} theta_3(sqrt(pi/2)(k - i q), e^{-pi}).
inline Complex zak_gaussian(const ZakPoint& p, double tail_tol = 1e-18) {
    return zak_gaussian_lattice(p.k, p.q, std::sqrt(2.0 * std::numbers::pi), tail_tol);
}

struct ZakZeroResult {
    ZakPoint location;
    double value = 0.0;              // |zak_gaussian| at the refined zero
    std::vector<ZakPoint> basins;    // all candidate basins found in the scan
};

/// Locates the zero of the Zak-transformed Gaussian in the fundamental box
/// by a grid scan plus complex Newton iteration on theta_3. The transform
/// has exactly one zero there, at (sqrt(pi/2), sqrt(pi/2)); more than one
/// surviving basin is reported back for inspection.
inline ZakZeroResult locate_zak_zero(int grid = 64, double refine_tol = 1e-12) {
    if (grid < 32) throw std::invalid_argument("locate_zak_zero: grid must be >= 32");
    const double a = std::sqrt(2.0 * std::numbers::pi);
    const double h = a / grid;

    std::vector<double> absval(static_cast<std::size_t>(grid) * grid);
    double vmax = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double v = std::abs(zak_gaussian({i * h, j * h}));
            absval[static_cast<std::size_t>(i) * grid + j] = v;
            vmax = std::max(vmax, v);
        }

    // Candidate basins: grid local minima (periodic neighborhood; the
    // modulus is a-periodic in both directions) below a tenth of the peak.
    ZakZeroResult res;
    std::size_t best = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const std::size_t flat = static_cast<std::size_t>(i) * grid + j;
            const double v = absval[flat];
            if (v < absval[best]) best = flat;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = (i + di + grid) % grid;
                    const int jj = (j + dj + grid) % grid;
                    if (absval[static_cast<std::size_t>(ii) * grid + jj] < v) is_min = false;
                }
            if (is_min && v < 0.1 * vmax) res.basins.push_back({i * h, j * h});
        }
    if (res.basins.empty())
        res.basins.push_back({static_cast<double>(best / grid) * h,
                              static_cast<double>(best % grid) * h});

    // Newton on theta_3 in the single complex variable z = sqrt(pi/2)(k - iq);
    // the Gaussian prefactor never vanishes, so zeros coincide.
    const double scale = std::sqrt(std::numbers::pi / 2.0);
    const double t = std::exp(-std::numbers::pi);
    const ZakPoint seed = {static_cast<double>(best / grid) * h,
                           static_cast<double>(best % grid) * h};
    Complex z(scale * seed.k, -scale * seed.q);
    for (int it = 0; it < 80; ++it) {
        const Complex f = theta3(z, t);
        const Complex fp = theta3_prime(z, t);
        if (std::abs(fp) < 1e-300) break;
        const Complex step = f / fp;
        z -= step;
        if (std::abs(step) < refine_tol * scale) break;
    }
    res.location = {z.real() / scale, -z.imag() / scale};
    res.value = std::abs(zak_gaussian(res.location));
    return res;
}

// ---------------------------------------------------------------------------
// Obstruction probe
// ---------------------------------------------------------------------------

enum class ObstructionCase { box_a2, coherent_L1 };

struct ProbeStep {
    int nodes = 0;
    int radius = 0;
    double l1_partial = 0.0;
};

struct ObstructionProbe {
    std::vector<ProbeStep> steps;
    SummabilityVerdict verdict = SummabilityVerdict::inconclusive;
};

/// Forced inversion with midpoint quadrature nodes (which step around exact
/// symbol zeros) across simultaneous node/radius doublings. For symbols
/// with a zero the l1 partial sums of the would-be dual grow without
/// stabilizing; for invertible symbols they settle. This operation exists
/// to document the failure, so no invertibility gate is applied.
inline ObstructionProbe l1_obstruction_probe(const OverlapModel& model,
                                             int node_doublings = 3) {
    if (node_doublings < 3)
        throw std::invalid_argument("l1_obstruction_probe: need at least 3 doublings");
    const SymbolFunction s(model.lattice(model.default_radius));
    const bool two_d = s.dimension == 2;
    const int base_nodes = two_d ? 64 : 256;
    const int base_radius = two_d ? 4 : 32;

    ObstructionProbe probe;
    std::vector<std::pair<int, double>> l1, l2;
    for (int k = 0; k <= node_doublings; ++k) {
        const int nodes = base_nodes << k;
        const int radius = base_radius << k;
        auto samples = symbol_on_grid(s, nodes, 0.5);
        for (auto& v : samples) v = 1.0 / v;
        const CoeffLattice c =
            detail::coeffs_from_samples(samples, s.dimension, nodes, radius, 0.5);
        probe.steps.push_back({nodes, radius, lp_norm(c, 1.0)});
        l1.emplace_back(radius, probe.steps.back().l1_partial);
        const double n2 = lp_norm(c, 2.0);
        l2.emplace_back(radius, n2 * n2);
    }
    probe.verdict = detail::verdict_from_partials(l1, l2);
    return probe;
}

inline ObstructionProbe l1_obstruction_probe(ObstructionCase which, int node_doublings = 3) {
    switch (which) {
        case ObstructionCase::box_a2: return l1_obstruction_probe(box_model(2.0), node_doublings);
        case ObstructionCase::coherent_L1:
            return l1_obstruction_probe(coherent_model(1), node_doublings);
    }
    throw std::invalid_argument("l1_obstruction_probe: unknown case");
}

// ---------------------------------------------------------------------------
// L = 2 biorthogonality condition in the kq variables
// ---------------------------------------------------------------------------

/// Residual of the L = 2 kq-space biorthogonality condition
///   phi_0(k,q) conj(psi_0(k,q)) + phi_0(k,q+2pi/a) conj(psi_0(k,q+2pi/a)) = 1/2
/// for a candidate psi_0, maximized over a midpoint sample grid of the
/// quarter box [0, 2pi/a)^2 with a = 2 sqrt(pi). Diagnostic only; no solve
/// is attempted.
inline double extra2_residual(const std::function<Complex(ZakPoint)>& psi0,
                              int samples = 64) {
    if (samples < 2) throw std::invalid_argument("extra2_residual: samples must be >= 2");
    const double a = 2.0 * std::sqrt(std::numbers::pi);  // a^2 = 4 pi
    const double half = a / 2.0;                          // equals 2 pi / a
    double worst = 0.0;
    for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j) {
            const double k = (i + 0.5) * half / samples;
            const double q = (j + 0.5) * half / samples;
            const Complex term1 =
                zak_gaussian_lattice(k, q, a) * std::conj(psi0({k, q}));
            const Complex term2 =
                zak_gaussian_lattice(k, q + half, a) * std::conj(psi0({k, q + half}));
            worst = std::max(worst, std::abs(term1 + term2 - Complex(0.5, 0.0)));
        }
    return worst;
}

}  // namespace biortho
