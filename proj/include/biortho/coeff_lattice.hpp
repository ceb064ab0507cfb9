#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "biortho/multi_index.hpp"

namespace biortho {

using Complex = std::complex<double>;

/// Dense window of complex coefficients over [-R, R]^D. Reads outside the
/// window return exactly zero; writes outside the window are rejected.
/// Dimension and radius are fixed at construction.
class CoeffLattice {
public:
    CoeffLattice(int dimension, int radius)
        : dim_(dimension), radius_(radius) {
        if (dimension < 1 || dimension > MultiIndex::kMaxDim)
            throw std::invalid_argument("CoeffLattice: bad dimension");
        if (radius < 0)
            throw std::invalid_argument("CoeffLattice: negative radius");
        std::size_t n = 1;
        for (int i = 0; i < dim_; ++i) n *= static_cast<std::size_t>(2 * radius_ + 1);
        values_.assign(n, Complex(0.0, 0.0));
    }

    /// Kronecker delta at the origin.
    static CoeffLattice delta(int dimension) {
        CoeffLattice d(dimension, 0);
        d.values_[0] = Complex(1.0, 0.0);
        return d;
    }

    int dimension() const { return dim_; }
    int radius() const { return radius_; }
    std::size_t size() const { return values_.size(); }

    bool in_window(const MultiIndex& idx) const {
        return idx.dim() == dim_ && idx.inf_norm() <= radius_;
    }

    Complex at(const MultiIndex& idx) const {
        if (idx.dim() != dim_)
            throw std::invalid_argument("CoeffLattice::at: dimension mismatch");
        if (idx.inf_norm() > radius_) return Complex(0.0, 0.0);
        return values_[flatten(idx)];
    }

    void set(const MultiIndex& idx, Complex v) {
        if (!in_window(idx))
            throw std::invalid_argument("CoeffLattice::set: index " + idx.to_string() +
                                        " outside window radius " + std::to_string(radius_));
        values_[flatten(idx)] = v;
    }

    /// Row-major flat offset of an in-window index.
    std::size_t flatten(const MultiIndex& idx) const {
        std::size_t off = 0;
        const std::size_t width = static_cast<std::size_t>(2 * radius_ + 1);
        for (int i = 0; i < dim_; ++i)
            off = off * width + static_cast<std::size_t>(idx[i] + radius_);
        return off;
    }

    MultiIndex unflatten(std::size_t off) const {
        MultiIndex idx(dim_);
        const std::size_t width = static_cast<std::size_t>(2 * radius_ + 1);
        for (int i = dim_ - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(off % width) - radius_;
            off /= width;
        }
        return idx;
    }

    /// Deterministic row-major visit of the whole window.
    template <class F>
    void for_each(F&& fn) const {
        for (std::size_t off = 0; off < values_.size(); ++off)
            fn(unflatten(off), values_[off]);
    }

    CoeffLattice scaled(Complex s) const {
        CoeffLattice r(*this);
        for (auto& v : r.values_) v *= s;
        return r;
    }

    /// Copy restricted to a smaller (or equal) window.
    CoeffLattice truncated(int new_radius) const {
        if (new_radius >= radius_) return *this;
        CoeffLattice r(dim_, new_radius);
        r.for_each_mut([&](const MultiIndex& idx, Complex& v) { v = at(idx); });
        return r;
    }

    bool operator==(const CoeffLattice& o) const = default;

    template <class F>
    void for_each_mut(F&& fn) {
        for (std::size_t off = 0; off < values_.size(); ++off)
            fn(unflatten(off), values_[off]);
    }

private:
    int dim_;
    int radius_;
    std::vector<Complex> values_;
};

/// Full convolution: result radius = a.radius + b.radius,
/// result(l) = sum_n a(n) b(l-n) over in-window factors.
inline CoeffLattice convolve(const CoeffLattice& a, const CoeffLattice& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("convolve: dimension mismatch");
    CoeffLattice r(a.dimension(), a.radius() + b.radius());
    a.for_each([&](const MultiIndex& na, Complex va) {
        if (va == Complex(0.0, 0.0)) return;
        b.for_each([&](const MultiIndex& nb, Complex vb) {
            if (vb == Complex(0.0, 0.0)) return;
            MultiIndex l = na + nb;
            r.set(l, r.at(l) + va * vb);
        });
    });
    return r;
}

/// True iff |a(-l) - conj(a(l))| <= tol for every windowed l.
inline bool check_hermitian_symmetry(const CoeffLattice& a, double tol) {
    bool ok = true;
    a.for_each([&](const MultiIndex& idx, Complex v) {
        if (std::abs(a.at(-idx) - std::conj(v)) > tol) ok = false;
    });
    return ok;
}

inline double hermitian_defect(const CoeffLattice& a) {
    double worst = 0.0;
    a.for_each([&](const MultiIndex& idx, Complex v) {
        worst = std::max(worst, std::abs(a.at(-idx) - std::conj(v)));
    });
    return worst;
}

/// Sequence norm over the window; p must be 1, 2 or infinity.
inline double lp_norm(const CoeffLattice& a, double p) {
    const double inf = std::numeric_limits<double>::infinity();
    if (p != 1.0 && p != 2.0 && p != inf)
        throw std::invalid_argument("lp_norm: p must be 1, 2 or infinity");
    double acc = 0.0;
    a.for_each([&](const MultiIndex&, Complex v) {
        double m = std::abs(v);
        if (p == 1.0)
            acc += m;
        else if (p == 2.0)
            acc += m * m;
        else
            acc = std::max(acc, m);
    });
    return p == 2.0 ? std::sqrt(acc) : acc;
}

/// Largest |entry| difference between two lattices, read over the union of
/// the windows (out-of-window reads are zero).
inline double max_abs_difference(const CoeffLattice& a, const CoeffLattice& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("max_abs_difference: dimension mismatch");
    const CoeffLattice& wide = a.radius() >= b.radius() ? a : b;
    double worst = 0.0;
    wide.for_each([&](const MultiIndex& idx, Complex) {
        worst = std::max(worst, std::abs(a.at(idx) - b.at(idx)));
    });
    return worst;
}

}  // namespace biortho
