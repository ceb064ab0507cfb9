#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/dual.hpp"
#include "biortho/errors.hpp"
#include "biortho/models.hpp"
#include "biortho/symbol.hpp"

namespace biortho {

/// Finite-truncation matrices in the phi-coordinate representation over the
/// window [-R, R]^D (row-major enumeration):
///   G[m][n] = alpha_{n-m}   (Gram of the orbit)
///   C[m][n] = c_{n-m}       (the operator X built from the dual seed)
///   Y[m][n] = d_{n-m}       (= X^{-1} in the infinite limit)
struct FrameMatrices {
    int dimension = 1;
    int R = 0;
    std::vector<MultiIndex> window;
    Eigen::MatrixXcd G, C, Y;
    double gram_min_eigenvalue = 0.0;

    const Eigen::MatrixXcd& X() const { return C; }

    bool interior(int flat, int margin) const {
        return window[static_cast<std::size_t>(flat)].inf_norm() <= R - margin;
    }
};

namespace detail {

inline double interior_max_abs(const FrameMatrices& f, const Eigen::MatrixXcd& M,
                               int margin) {
    double worst = 0.0;
    const int n = static_cast<int>(M.rows());
    for (int i = 0; i < n; ++i) {
        if (!f.interior(i, margin)) continue;
        for (int j = 0; j < n; ++j) {
            if (!f.interior(j, margin)) continue;
            worst = std::max(worst, std::abs(M(i, j)));
        }
    }
    return worst;
}

struct HermitianSqrt {
    Eigen::MatrixXcd half;
    Eigen::MatrixXcd inv_half;
    double min_eigenvalue = 0.0;
};

// Principal square root through the eigendecomposition of the Hermitian
// part; eigenvalues at or below the 1e-12 clamp refuse instead of clamping.
inline HermitianSqrt hermitian_sqrt(const Eigen::MatrixXcd& M, RefusalReason on_indefinite) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_sqrt: eigensolver failed");
    HermitianSqrt r;
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    if (r.min_eigenvalue <= 1e-12) {
        RefusalError err(on_indefinite, "matrix is not positive definite on the window");
        err.min_eigenvalue = r.min_eigenvalue;
        throw err;
    }
    const auto& V = es.eigenvectors();
    Eigen::VectorXd sq = es.eigenvalues().array().sqrt();
    r.half = V * sq.asDiagonal() * V.adjoint();
    r.inv_half = V * sq.cwiseInverse().asDiagonal() * V.adjoint();
    return r;
}

inline std::vector<double> sorted_real_spectrum(const Eigen::MatrixXcd& M,
                                                double* max_imag = nullptr) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed");
    std::vector<double> re(static_cast<std::size_t>(M.rows()));
    double mi = 0.0;
    for (int i = 0; i < M.rows(); ++i) {
        re[static_cast<std::size_t>(i)] = es.eigenvalues()(i).real();
        mi = std::max(mi, std::abs(es.eigenvalues()(i).imag()));
    }
    std::sort(re.begin(), re.end());
    if (max_imag) *max_imag = std::max(*max_imag, mi);
    return re;
}

}  // namespace detail

/// Assembles the window matrices. The dual pair must have been computed at
/// radius >= 2R so every difference n - m is covered; the Gram must come
/// out positive definite, otherwise a symbol zero leaked through and the
/// construction refuses.
inline FrameMatrices build_frame(const OverlapModel& model, const DualPair& pair, int R) {
    if (pair.c.dimension() != model.dimension)
        throw std::invalid_argument("build_frame: model/pair dimension mismatch");
    if (pair.c.radius() < 2 * R || pair.d.radius() < 2 * R)
        throw std::invalid_argument("build_frame: dual pair must cover radius 2R");

    FrameMatrices f;
    f.dimension = model.dimension;
    f.R = R;
    CoeffLattice win(model.dimension, R);
    win.for_each([&](const MultiIndex& idx, Complex) { f.window.push_back(idx); });
    const int n = static_cast<int>(f.window.size());

    f.G.resize(n, n);
    f.C.resize(n, n);
    f.Y.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const MultiIndex diff = f.window[static_cast<std::size_t>(j)] -
                                    f.window[static_cast<std::size_t>(i)];
            f.G(i, j) = model.overlap_at(diff);
            f.C(i, j) = pair.c.at(diff);
            f.Y(i, j) = pair.d.at(diff);
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (f.G + f.G.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    f.gram_min_eigenvalue = es.eigenvalues().minCoeff();
    if (f.gram_min_eigenvalue <= 1e-12) {
        RefusalError err(RefusalReason::indefinite_gram,
                         "Gram matrix is not positive definite on the window");
        err.min_eigenvalue = f.gram_min_eigenvalue;
        throw err;
    }
    return f;
}

struct SopResiduals {
    double gx = 0.0;        // |G X - I| interior
    double xy = 0.0;        // |X Y - I| interior
    double s_psi = 0.0;     // |X X^H G - X G X| interior
    double max_residual = 0.0;
    int margin = 1;
};

/// Finite-window residuals of the resolution-of-identity relations
/// S_phi = X^{-1} (as G X = I), Y = X^{-1} (as X Y = I) and
/// S_Psi X^{-1} = X S_phi (as X X^H G = X G X). Edge rows/columns are
/// excluded: truncation breaks shift invariance there.
inline SopResiduals sop_identities(const FrameMatrices& f, int margin) {
    if (margin < 1) throw std::invalid_argument("sop_identities: margin must be >= 1");
    const int n = static_cast<int>(f.window.size());
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    SopResiduals r;
    r.margin = margin;
    r.gx = detail::interior_max_abs(f, f.G * f.C - I, margin);
    r.xy = detail::interior_max_abs(f, f.C * f.Y - I, margin);
    r.s_psi = detail::interior_max_abs(
        f, f.C * f.C.adjoint() * f.G - f.C * f.G * f.C, margin);
    r.max_residual = std::max({r.gx, r.xy, r.s_psi});
    return r;
}

/// Isospectral triple built from a real spectrum eps over the window:
///   H      = diag(eps)                (acts on the orbit basis)
///   H^dag  = G^{-1} diag(eps) G       (adjoint w.r.t. the alpha-inner product)
///   h      = X^{1/2} diag(eps) X^{-1/2}  (self-adjoint member, needs X > 0)
struct TripleReport {
    int R = 0;
    int interior_margin = 0;
    std::vector<double> spectrum_h, spectrum_H, spectrum_Hdag;
    double spectra_max_imag = 0.0;
    std::map<std::string, double> intertwine_residuals;
    bool h_built = false;
    double h_hermiticity_raw = 0.0;       // max |h - h^H| over the full window
    double h_hermiticity_weighted = 0.0;  // interior max |G h - (G h)^H|
    double x_min_eigenvalue = 0.0;
    double gram_min_eigenvalue = 0.0;
};

inline TripleReport build_triple(const FrameMatrices& f, const std::vector<double>& eps,
                                 int margin = -1) {
    const int n = static_cast<int>(f.window.size());
    if (static_cast<int>(eps.size()) != n)
        throw std::invalid_argument("build_triple: eps length must match the window");
    if (margin < 0) margin = (f.R + 3) / 4;  // ceil(R/4)
    margin = std::max(margin, 1);

    TripleReport rep;
    rep.R = f.R;
    rep.interior_margin = margin;
    rep.gram_min_eigenvalue = f.gram_min_eigenvalue;

    Eigen::VectorXcd epsv(n);
    for (int i = 0; i < n; ++i) epsv(i) = Complex(eps[static_cast<std::size_t>(i)], 0.0);
    const Eigen::MatrixXcd H = epsv.asDiagonal();

    // H^dag = G^{-1} diag(eps) G via a Cholesky solve.
    Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (f.G + f.G.adjoint()));
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("build_triple: Cholesky of the Gram failed");
    const Eigen::MatrixXcd Hdag = llt.solve(H * f.G);

    rep.spectrum_H = detail::sorted_real_spectrum(H, &rep.spectra_max_imag);
    rep.spectrum_Hdag = detail::sorted_real_spectrum(Hdag, &rep.spectra_max_imag);

    const Eigen::MatrixXcd XH_HdagX = f.C * H - Hdag * f.C;
    rep.intertwine_residuals["XH_minus_HdagX"] =
        detail::interior_max_abs(f, XH_HdagX, margin);

    detail::HermitianSqrt gs = detail::hermitian_sqrt(f.G, RefusalReason::indefinite_gram);

    // h requires X positive definite; the paper's orthonormal-frame results
    // are conditional on exactly that, so refusal here is partial: H and
    // H^dag are still reported.
    try {
        detail::HermitianSqrt xs =
            detail::hermitian_sqrt(f.C, RefusalReason::indefinite_operator);
        rep.x_min_eigenvalue = xs.min_eigenvalue;
        const Eigen::MatrixXcd h = xs.half * H * xs.inv_half;
        rep.h_built = true;
        rep.spectrum_h = detail::sorted_real_spectrum(h, &rep.spectra_max_imag);
        rep.h_hermiticity_raw = (h - h.adjoint()).cwiseAbs().maxCoeff();
        const Eigen::MatrixXcd gh = f.G * h;
        rep.h_hermiticity_weighted =
            detail::interior_max_abs(f, gh - gh.adjoint(), margin);

        // Both intertwiner variants are reported: the Gram square root and
        // the X inverse square root agree only up to truncation.
        rep.intertwine_residuals["hGhalf_minus_GhalfHdag"] =
            detail::interior_max_abs(f, h * gs.half - gs.half * Hdag, margin);
        rep.intertwine_residuals["HGhalf_minus_Ghalfh"] =
            detail::interior_max_abs(f, H * gs.half - gs.half * h, margin);
        rep.intertwine_residuals["hXinvhalf_minus_XinvhalfHdag"] =
            detail::interior_max_abs(f, h * xs.inv_half - xs.inv_half * Hdag, margin);
        rep.intertwine_residuals["HXinvhalf_minus_Xinvhalfh"] =
            detail::interior_max_abs(f, H * xs.inv_half - xs.inv_half * h, margin);
    } catch (const RefusalError& e) {
        if (e.reason() != RefusalReason::indefinite_operator) throw;
        rep.h_built = false;
        rep.x_min_eigenvalue = e.min_eigenvalue;
    }
    return rep;
}

/// E = X^{1/2}: maps the orbit basis to the orthonormal frame e_n.
inline Eigen::MatrixXcd orthonormalize(const FrameMatrices& f) {
    return detail::hermitian_sqrt(f.C, RefusalReason::indefinite_operator).half;
}

/// Interior residual of the e-frame Gram X^{1/2} G X^{1/2} - I.
inline double e_gram_interior_residual(const FrameMatrices& f, int margin) {
    const Eigen::MatrixXcd E = orthonormalize(f);
    const int n = static_cast<int>(f.window.size());
    const Eigen::MatrixXcd resid =
        E.adjoint() * f.G * E - Eigen::MatrixXcd::Identity(n, n);
    return detail::interior_max_abs(f, resid, margin);
}

/// Deterministic spectra for the CLI: "linear" uses the lattice coordinate
/// in 1D and the row-major position offset in 2D, "constant" is all ones,
/// "random-seeded" draws uniform [-1, 1] from a fixed seed.
inline std::vector<double> make_eps(const std::string& scheme, const FrameMatrices& f,
                                    unsigned seed = 12345) {
    std::vector<double> eps(f.window.size());
    if (scheme == "linear") {
        for (std::size_t i = 0; i < f.window.size(); ++i)
            eps[i] = f.dimension == 1
                         ? static_cast<double>(f.window[i][0])
                         : static_cast<double>(i) -
                               static_cast<double>(f.window.size() - 1) / 2.0;
    } else if (scheme == "constant") {
        for (auto& e : eps) e = 1.0;
    } else if (scheme == "random-seeded") {
        // Deterministic LCG so identical configs serialize identically
        // across platforms.
        unsigned long long state = seed;
        for (auto& e : eps) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            e = 2.0 * (static_cast<double>(state >> 11) /
                       static_cast<double>(1ull << 53)) - 1.0;
        }
    } else {
        throw std::invalid_argument("make_eps: unknown scheme " + scheme);
    }
    return eps;
}

}  // namespace biortho
