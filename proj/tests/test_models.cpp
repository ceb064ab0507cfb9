#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "biortho/errors.hpp"
#include "biortho/models.hpp"
#include "biortho/symbol.hpp"

using namespace biortho;
using Catch::Approx;

TEST_CASE("box model overlaps") {
    CHECK(box_model(1.0).lattice(2) == [] {
        CoeffLattice want(1, 2);
        want.set({0}, 1.0);
        return want;
    }());
    const auto b = box_model(1.5);
    CHECK(b.overlap_at({0}).real() == 1.5);
    CHECK(b.overlap_at({1}).real() == 0.5);
    CHECK(b.overlap_at({-1}).real() == 0.5);
    CHECK(b.overlap_at({2}).real() == 0.0);
    CHECK(box_model(2.0).overlap_at({0}).real() == 2.0);
    CHECK(box_model(2.0).overlap_at({1}).real() == 1.0);
    CHECK(box_model(0.5).overlap_at({0}).real() == 0.5);  // unnormalized seed
    CHECK(box_model(0.5).overlap_at({1}).real() == 0.0);
    CHECK_THROWS_AS(box_model(2.5), RefusalError);
    CHECK_THROWS_AS(box_model(0.0), RefusalError);
}

TEST_CASE("dilation model overlaps and known facts") {
    const auto m = dilation_model();
    CHECK(m.overlap_at({3}).real() == Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
    CHECK(m.overlap_at({3}).real() == Approx(0.3535533906).margin(1e-10));
    CHECK(m.known_facts.at("symbol_min").value == Approx(0.1715728753).margin(1e-10));
    CHECK(m.known_facts.at("symbol_max").value == Approx(5.8284271247).margin(1e-10));
    CHECK(m.known_facts.at("dual_c0").value == 3.0);
}

TEST_CASE("geometric model") {
    CHECK_THROWS_AS(geometric_model(1.0), RefusalError);
    CHECK_THROWS_AS(geometric_model(-0.1), RefusalError);

    SECTION("r = 0 is the orthonormal limit") {
        const auto lat = geometric_model(0.0).lattice(3);
        CHECK(lat.at({0}) == Complex(1.0, 0.0));
        CHECK(lat.at({1}) == Complex(0.0, 0.0));
    }

    SECTION("r = 1/sqrt(2) reproduces the dilation model") {
        const auto g = geometric_model(1.0 / std::numbers::sqrt2).lattice(30);
        const auto d = dilation_model().lattice(30);
        CHECK(max_abs_difference(g, d) < 1e-15);
    }

    SECTION("dual closed form at r = 0.3") {
        CHECK(geometric_model(0.3).known_facts.at("dual_c0").value ==
              Approx(1.197802198).margin(1e-9));
    }
}

TEST_CASE("coherent model overlaps") {
    const auto m1 = coherent_model(1);
    CHECK(m1.dimension == 2);
    CHECK(m1.overlap_at({1, 1}).real() == Approx(-std::exp(-std::numbers::pi)).epsilon(1e-15));
    CHECK(m1.overlap_at({1, 1}).real() == Approx(-0.0432139183).margin(1e-9));
    CHECK(m1.overlap_at({1, 0}).real() > 0);  // no sign on the axes

    // (-1)^{L n1 n2} is +1 for L = 2 whatever the site.
    const auto m2 = coherent_model(2);
    CHECK(m2.overlap_at({1, 1}).real() == Approx(std::exp(-2 * std::numbers::pi)).epsilon(1e-15));
    CHECK(m2.overlap_at({1, 1}).real() > 0);

    CHECK(m1.overlap_at({0, 0}).real() == 1.0);
    CHECK(check_hermitian_symmetry(m1.lattice(3), 0.0));
    CHECK(check_hermitian_symmetry(coherent_model(3).lattice(3), 0.0));
    CHECK_THROWS_AS(coherent_model(0), RefusalError);
}

TEST_CASE("every model's overlap lattice is exactly hermitian-symmetric") {
    CHECK(check_hermitian_symmetry(box_model(1.7).lattice(2), 0.0));
    CHECK(check_hermitian_symmetry(dilation_model().lattice(20), 0.0));
    CHECK(check_hermitian_symmetry(geometric_model(0.8).lattice(20), 0.0));
    CHECK(check_hermitian_symmetry(coherent_model(1).lattice(4), 0.0));
}

TEST_CASE("io_bound values") {
    // (sum_m e^{-pi L m^2/2})^2 - 1, frozen against a 120-term reference sum.
    CHECK(io_bound(1) == Approx(1.01496744069).margin(1e-9));
    CHECK(io_bound(2) == Approx(0.18034059902).margin(1e-9));
    CHECK(io_bound(3) == Approx(0.03625598867).margin(1e-9));
    CHECK(io_bound(4) == Approx(0.00748372035).margin(1e-9));
    CHECK(io_bound(1) >= 1.0);
    for (int L : {2, 3, 4, 5}) CHECK(io_bound(L) < 1.0);
    CHECK_THROWS_AS(io_bound(0), RefusalError);
}

TEST_CASE("coherent overlap energies") {
    // Full lattice sums (theta(e^{-pi L})^2); converged well before radius 6.
    CHECK(overlap_energy(1, 6) == Approx(1.18034059902).margin(1e-9));
    CHECK(overlap_energy(2, 6) == Approx(1.00748372035).margin(1e-9));
    // The published table corresponds to the nonnegative-quadrant sum
    // ((1 + theta)/2)^2; both are recorded as known facts.
    CHECK(overlap_energy_quadrant(1, 6) == Approx(1.0883).margin(5e-4));
    CHECK(overlap_energy_quadrant(2, 6) == Approx(1.00374).margin(5e-4));
    CHECK(overlap_energy_quadrant(1, 6) == Approx(1.08830255536).margin(1e-9));
    CHECK(overlap_energy_quadrant(2, 6) == Approx(1.00373837283).margin(1e-9));
    CHECK(coherent_model(1).known_facts.at("overlap_energy_quadrant").source == "tabulated");
}

TEST_CASE("box symbol minimum equals 2-a for 1 < a <= 2") {
    for (double a : {1.2, 1.5, 1.8, 2.0}) {
        const SymbolFunction s(box_model(a).lattice(1));
        const auto mn = find_min_abs(s);
        CHECK(mn.value == Approx(2.0 - a).margin(1e-10));
    }
}

TEST_CASE("classify flags the box zero exactly at a = 2 in the sweep") {
    for (double a : {0.5, 1.0, 1.5, 2.0}) {
        const SymbolFunction s(box_model(a).lattice(1));
        const auto v = classify(s);
        if (a == 2.0)
            CHECK(v.status == Invertibility::has_zero);
        else
            CHECK(v.status == Invertibility::invertible);
    }
}

TEST_CASE("model factory") {
    CHECK(make_model("box", {{"a", 1.5}}).name == "box");
    CHECK(make_model("coherent", {{"L", 3}}).parameters[0].second == 3.0);
    CHECK_THROWS_AS(make_model("nope", {}), std::invalid_argument);
    CHECK(model_names().size() == 4);
}
