#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "biortho/coeff_lattice.hpp"
#include "biortho/coherent.hpp"
#include "biortho/dual.hpp"
#include "biortho/models.hpp"
#include "biortho/summability.hpp"

using namespace biortho;
using Catch::Approx;

namespace {

CoeffLattice random_lattice(std::mt19937& rng, int dim, int radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoeffLattice lat(dim, radius);
    lat.for_each_mut([&](const MultiIndex&, Complex& v) { v = Complex(u(rng), u(rng)); });
    return lat;
}

CoeffLattice random_hermitian_lattice(std::mt19937& rng, int dim, int radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoeffLattice lat(dim, radius);
    lat.for_each_mut([&](const MultiIndex& idx, Complex& v) {
        if (idx == MultiIndex::zero(dim))
            v = Complex(u(rng) + 2.0, 0.0);
        else
            v = Complex(u(rng), u(rng));
    });
    // Mirror the strict upper half onto the lower half.
    lat.for_each_mut([&](const MultiIndex& idx, Complex& v) {
        if (-idx < idx) v = std::conj(lat.at(-idx));
    });
    return lat;
}

}  // namespace

TEST_CASE("MultiIndex basics") {
    MultiIndex a{1, -2};
    CHECK(a.dim() == 2);
    CHECK(a[0] == 1);
    CHECK(a[1] == -2);
    CHECK(a.inf_norm() == 2);
    CHECK((-a) == MultiIndex{-1, 2});
    CHECK(a + MultiIndex{2, 2} == MultiIndex{3, 0});
    CHECK(a - MultiIndex{1, 1} == MultiIndex{0, -3});
    CHECK_THROWS_AS(a + MultiIndex{1}, std::invalid_argument);
    CHECK(MultiIndexHash{}(a) == MultiIndexHash{}(MultiIndex{1, -2}));
    CHECK(MultiIndexHash{}(a) != MultiIndexHash{}(MultiIndex{-2, 1}));
}

TEST_CASE("CoeffLattice window semantics") {
    CoeffLattice lat(1, 2);
    lat.set({2}, Complex(1.0, -1.0));
    CHECK(lat.at({2}) == Complex(1.0, -1.0));
    CHECK(lat.at({3}) == Complex(0.0, 0.0));  // absent reads as zero
    CHECK_THROWS_AS(lat.set({3}, Complex(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(lat.at(MultiIndex{1, 1}), std::invalid_argument);
    CHECK(CoeffLattice::delta(2).at({0, 0}) == Complex(1.0, 0.0));
    CHECK(CoeffLattice(2, 3).size() == 49);
}

TEST_CASE("convolution with the delta is exact identity") {
    std::mt19937 rng(31);
    for (int iter = 0; iter < 20; ++iter) {
        const auto b = random_lattice(rng, 1 + iter % 2, 3 - iter % 2);
        const auto conv = convolve(CoeffLattice::delta(b.dimension()), b);
        CHECK(conv == b);
    }
}

TEST_CASE("convolution rejects dimension mismatch") {
    CHECK_THROWS_AS(convolve(CoeffLattice(1, 1), CoeffLattice(2, 1)), std::invalid_argument);
}

TEST_CASE("dilation dual convolved against its overlaps") {
    // c = {3, -sqrt2, -sqrt2} against d_l = 2^{-|l|/2} on |l| <= 8: the
    // interior of the identity is exact, the window edge carries the
    // 2^{-4} truncation tail.
    CoeffLattice c(1, 1);
    c.set({0}, 3.0);
    c.set({1}, -std::numbers::sqrt2);
    c.set({-1}, -std::numbers::sqrt2);
    CoeffLattice d(1, 8);
    d.for_each_mut([](const MultiIndex& idx, Complex& v) {
        v = std::pow(2.0, -std::abs(idx[0]) / 2.0);
    });
    const auto conv = convolve(c, d);
    CHECK(conv.radius() == 9);
    CHECK(conv.at({0}).real() == Approx(1.0).margin(1e-14));
    CHECK(std::abs(conv.at({1})) < 1e-14);
    CHECK(std::abs(conv.at({-1})) < 1e-14);
    CHECK(std::abs(conv.at({5})) < 1e-14);
    CHECK(std::abs(conv.at({8})) == Approx(std::pow(2.0, -4)).margin(1e-12));
}

TEST_CASE("geometric closed-form dual inverts the overlap sequence") {
    const double r = 0.3;
    const auto c = geometric_dual_closed_form(r);
    CHECK(c.at({0}).real() == Approx((1 + r * r) / (1 - r * r)).epsilon(1e-14));
    CoeffLattice d(1, 20);
    d.for_each_mut([r](const MultiIndex& idx, Complex& v) {
        v = std::pow(r, std::abs(idx[0]));
    });
    const auto conv = convolve(c, d);
    for (int l = -10; l <= 10; ++l) {
        const double want = l == 0 ? 1.0 : 0.0;
        CHECK(std::abs(conv.at({l}) - want) < 1e-9);
    }
}

TEST_CASE("convolution is commutative and associative") {
    std::mt19937 rng(112);
    for (int iter = 0; iter < 100; ++iter) {
        const int dim = 1 + iter % 2;
        const int r = dim == 1 ? 4 : 2;
        const auto a = random_lattice(rng, dim, r);
        const auto b = random_lattice(rng, dim, r - 1);
        const auto cc = random_lattice(rng, dim, 1);
        CHECK(max_abs_difference(convolve(a, b), convolve(b, a)) < 1e-12);
        CHECK(max_abs_difference(convolve(convolve(a, b), cc),
                                 convolve(a, convolve(b, cc))) < 1e-12);
    }
}

TEST_CASE("hermitian symmetry checks") {
    CHECK(check_hermitian_symmetry(dilation_model().lattice(12), 0.0));
    CHECK(check_hermitian_symmetry(coherent_model(2).lattice(3), 0.0));

    CoeffLattice bad(1, 1);
    bad.set({0}, 1.0);
    bad.set({1}, Complex(0.0, 1.0));
    bad.set({-1}, Complex(0.0, 1.0));  // conj(i) != i
    CHECK_FALSE(check_hermitian_symmetry(bad, 1e-12));

    std::mt19937 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        const auto h = random_hermitian_lattice(rng, 1 + iter % 2, 2);
        CHECK(check_hermitian_symmetry(h, 1e-15));
    }
}

TEST_CASE("lp norms") {
    const auto d = CoeffLattice::delta(1);
    CHECK(lp_norm(d, 1.0) == 1.0);
    CHECK(lp_norm(d, 2.0) == 1.0);
    CHECK(lp_norm(d, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK_THROWS_AS(lp_norm(d, 3.0), std::invalid_argument);

    CoeffLattice c(1, 1);
    c.set({0}, 3.0);
    c.set({1}, -std::numbers::sqrt2);
    c.set({-1}, -std::numbers::sqrt2);
    const double l2 = lp_norm(c, 2.0);
    CHECK(l2 * l2 == Approx(13.0).margin(1e-12));  // 9 + 2 + 2

    // Norms of a Hermitian lattice are invariant under index negation.
    std::mt19937 rng(99);
    for (int iter = 0; iter < 50; ++iter) {
        const auto h = random_hermitian_lattice(rng, 1, 3);
        CoeffLattice neg(1, 3);
        neg.for_each_mut([&](const MultiIndex& idx, Complex& v) { v = h.at(-idx); });
        for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
            CHECK(lp_norm(h, p) == Approx(lp_norm(neg, p)).epsilon(1e-13));
    }
}

TEST_CASE("summability verdicts for the shipped families") {
    const std::vector<int> radii{4, 8, 16, 32};

    SECTION("geometric r=0.5 overlaps are l1 summable") {
        const auto rep = summability(geometric_model(0.5), radii);
        CHECK(rep.verdict == SummabilityVerdict::summable_l1);
        for (std::size_t i = 1; i < rep.l1_partial_sums.size(); ++i)
            CHECK(rep.l1_partial_sums[i].second >=
                  rep.l1_partial_sums[i - 1].second - 1e-12);
    }

    SECTION("box a=2 would-be dual diverges") {
        // Forced midpoint inversion, as the obstruction probe does it.
        const SymbolFunction s(box_model(2.0).lattice(1));
        auto generator = [&s](int radius) {
            auto samples = symbol_on_grid(s, 16 * radius, 0.5);
            for (auto& v : samples) v = 1.0 / v;
            return biortho::detail::coeffs_from_samples(samples, 1, 16 * radius, radius, 0.5);
        };
        const auto rep = summability(generator, {32, 64, 128, 256});
        CHECK(rep.verdict == SummabilityVerdict::divergent);
    }

    SECTION("coherent L=2 dual lattice is l1 summable") {
        const auto c = exact_dual_2d(2, 4);
        auto generator = [&c](int radius) { return c.truncated(radius); };
        const auto rep = summability(generator, {1, 2, 3, 4});
        CHECK(rep.verdict == SummabilityVerdict::summable_l1);
    }

    SECTION("slow polynomial decay is l2 only") {
        auto generator = [](int radius) {
            CoeffLattice lat(1, radius);
            lat.for_each_mut([](const MultiIndex& idx, Complex& v) {
                v = 1.0 / (1.0 + std::abs(idx[0]));
            });
            return lat;
        };
        const auto rep = summability(generator, {256, 512, 1024, 2048});
        CHECK(rep.verdict == SummabilityVerdict::summable_l2_only);
    }

    SECTION("radii must increase") {
        CHECK_THROWS_AS(summability(geometric_model(0.5), {4, 4}), std::invalid_argument);
    }
}

TEST_CASE("truncation and scaling") {
    std::mt19937 rng(5);
    const auto a = random_lattice(rng, 1, 5);
    const auto t = a.truncated(2);
    CHECK(t.radius() == 2);
    CHECK(t.at({2}) == a.at({2}));
    CHECK(t.at({3}) == Complex(0.0, 0.0));
    const auto s = a.scaled(Complex(2.0, 0.0));
    CHECK(s.at({4}) == 2.0 * a.at({4}));
}
