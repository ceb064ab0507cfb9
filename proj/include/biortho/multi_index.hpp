#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace biortho {

/// Signed lattice coordinate in Z^D. D is small (1 or 2 in the shipped
/// models) but nothing here assumes that; storage is inline up to kMaxDim.
class MultiIndex {
public:
    static constexpr int kMaxDim = 4;

    MultiIndex() : dim_(1) { comp_.fill(0); }

    explicit MultiIndex(int dim) : dim_(dim) {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("MultiIndex: dimension must be in [1," +
                                        std::to_string(kMaxDim) + "]");
        comp_.fill(0);
    }

    MultiIndex(std::initializer_list<int> components)
        : dim_(static_cast<int>(components.size())) {
        if (dim_ < 1 || dim_ > kMaxDim)
            throw std::invalid_argument("MultiIndex: bad initializer size");
        comp_.fill(0);
        int i = 0;
        for (int c : components) comp_[i++] = c;
    }

    static MultiIndex zero(int dim) { return MultiIndex(dim); }

    int dim() const { return dim_; }

    int operator[](int axis) const { return comp_[static_cast<size_t>(axis)]; }
    int& operator[](int axis) { return comp_[static_cast<size_t>(axis)]; }

    MultiIndex operator+(const MultiIndex& o) const {
        require_same_dim(o);
        MultiIndex r(dim_);
        for (int i = 0; i < dim_; ++i) r.comp_[i] = comp_[i] + o.comp_[i];
        return r;
    }

    MultiIndex operator-(const MultiIndex& o) const {
        require_same_dim(o);
        MultiIndex r(dim_);
        for (int i = 0; i < dim_; ++i) r.comp_[i] = comp_[i] - o.comp_[i];
        return r;
    }

    MultiIndex operator-() const {
        MultiIndex r(dim_);
        for (int i = 0; i < dim_; ++i) r.comp_[i] = -comp_[i];
        return r;
    }

    int inf_norm() const {
        int m = 0;
        for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(comp_[i]));
        return m;
    }

    bool operator==(const MultiIndex& o) const {
        if (dim_ != o.dim_) return false;
        for (int i = 0; i < dim_; ++i)
            if (comp_[i] != o.comp_[i]) return false;
        return true;
    }

    // Lexicographic; used only to get deterministic orderings.
    std::strong_ordering operator<=>(const MultiIndex& o) const {
        if (auto c = dim_ <=> o.dim_; c != 0) return c;
        for (int i = 0; i < dim_; ++i)
            if (auto c = comp_[i] <=> o.comp_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < dim_; ++i) {
            if (i) s += ",";
            s += std::to_string(comp_[i]);
        }
        return s + ")";
    }

private:
    void require_same_dim(const MultiIndex& o) const {
        if (dim_ != o.dim_)
            throw std::invalid_argument("MultiIndex: dimension mismatch");
    }

    std::array<int, kMaxDim> comp_;
    int dim_;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& m) const {
        std::size_t h = std::hash<int>{}(m.dim());
        for (int i = 0; i < m.dim(); ++i)
            h = h * 1000003u + static_cast<std::size_t>(std::hash<int>{}(m[i]));
        return h;
    }
};

}  // namespace biortho

template <>
struct std::hash<biortho::MultiIndex> {
    std::size_t operator()(const biortho::MultiIndex& m) const {
        return biortho::MultiIndexHash{}(m);
    }
};
