#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/errors.hpp"
#include "biortho/summability.hpp"

namespace biortho {

/// A closed-form value shipped with a model, with a note on where it comes
/// from ("closed-form" for exact algebra, "tabulated" for published numeric
/// tables, "numeric" for values frozen from an independent computation).
struct KnownFact {
    double value = 0.0;
    std::string source;
};

/// Analytic overlap family: name, parameters, exact overlap formula and a
/// bag of known facts used as test oracles. Immutable value object.
struct OverlapModel {
    std::string name;
    int dimension = 1;
    std::vector<std::pair<std::string, double>> parameters;  // ordered
    std::map<std::string, KnownFact> known_facts;
    std::function<Complex(const MultiIndex&)> overlap_at;
    int default_radius = 32;

    CoeffLattice lattice(int radius) const {
        CoeffLattice lat(dimension, radius);
        lat.for_each_mut([&](const MultiIndex& idx, Complex& v) { v = overlap_at(idx); });
        return lat;
    }
};

/// Translates of the characteristic function of [0, a). For a <= 1 the
/// family is orthogonal (not normalized); for 1 < a <= 2 nearest neighbors
/// overlap; a = 2 puts a zero in the symbol. a > 2 is unsupported: more
/// than one neighbor overlaps and the two-term formula no longer holds.
inline OverlapModel box_model(double a) {
    if (!(a > 0.0))
        throw RefusalError(RefusalReason::unsupported_parameter, "box model requires a > 0");
    if (a > 2.0)
        throw RefusalError(RefusalReason::unsupported_parameter,
                           "box model is defined only for 0 < a <= 2");
    OverlapModel m;
    m.name = "box";
    m.dimension = 1;
    m.parameters = {{"a", a}};
    m.default_radius = 1;
    m.overlap_at = [a](const MultiIndex& idx) -> Complex {
        const int j = idx[0];
        if (j == 0) return Complex(a, 0.0);
        if (a > 1.0 && (j == 1 || j == -1)) return Complex(a - 1.0, 0.0);
        return Complex(0.0, 0.0);
    };
    if (a <= 1.0) {
        m.known_facts["symbol_min"] = {a, "closed-form"};
        m.known_facts["symbol_max"] = {a, "closed-form"};
    } else {
        m.known_facts["symbol_min"] = {2.0 - a, "closed-form"};
        m.known_facts["symbol_max"] = {a + 2.0 * (a - 1.0), "closed-form"};
    }
    if (a == 1.5) {
        m.known_facts["dual_l2_norm_sq"] = {12.0 / (5.0 * std::sqrt(5.0)), "tabulated"};
        m.known_facts["direct_d0"] = {1.5, "closed-form"};
        m.known_facts["direct_d1"] = {0.5, "closed-form"};
    }
    return m;
}

/// Dyadic dilation orbit of the unit box: overlaps 2^{-|j|/2}. Coincides
/// with geometric_model(1/sqrt(2)).
inline OverlapModel dilation_model() {
    OverlapModel m;
    m.name = "dilation";
    m.dimension = 1;
    m.default_radius = 128;
    m.overlap_at = [](const MultiIndex& idx) -> Complex {
        return Complex(std::pow(2.0, -std::abs(idx[0]) / 2.0), 0.0);
    };
    const double s = 2.0 * std::numbers::sqrt2;  // 2^{3/2}
    m.known_facts["symbol_min"] = {1.0 / (3.0 + s), "closed-form"};
    m.known_facts["symbol_max"] = {1.0 / (3.0 - s), "closed-form"};
    m.known_facts["dual_c0"] = {3.0, "closed-form"};
    m.known_facts["dual_c1"] = {-std::numbers::sqrt2, "closed-form"};
    m.known_facts["dual_l2_norm_sq"] = {13.0, "numeric"};
    m.known_facts["mean_inverse_symbol"] = {3.0, "tabulated"};
    return m;
}

/// Overlaps r^{|j|}, 0 <= r < 1. r = 1/sqrt(2) reproduces the dilation
/// model; r = 0 is the orthonormal limit.
inline OverlapModel geometric_model(double r) {
    if (!(r >= 0.0 && r < 1.0))
        throw RefusalError(RefusalReason::unsupported_parameter,
                           "geometric model requires 0 <= r < 1");
    OverlapModel m;
    m.name = "geometric";
    m.dimension = 1;
    m.parameters = {{"r", r}};
    if (r == 0.0)
        m.default_radius = 1;
    else
        m.default_radius = std::min(512, std::max(8, static_cast<int>(
            std::ceil(std::log(1e-18) / std::log(r)))));
    m.overlap_at = [r](const MultiIndex& idx) -> Complex {
        const int j = std::abs(idx[0]);
        if (j == 0) return Complex(1.0, 0.0);
        return Complex(std::pow(r, j), 0.0);
    };
    m.known_facts["symbol_min"] = {(1.0 - r) / (1.0 + r), "closed-form"};
    m.known_facts["symbol_max"] = {(1.0 + r) / (1.0 - r), "closed-form"};
    m.known_facts["dual_c0"] = {(1.0 + r * r) / (1.0 - r * r), "closed-form"};
    m.known_facts["dual_c1"] = {-r / (1.0 - r * r), "closed-form"};
    return m;
}

/// Closed-form dual of the geometric family: support {0, +-1}.
inline CoeffLattice geometric_dual_closed_form(double r) {
    CoeffLattice c(1, 1);
    c.set({0}, Complex((1.0 + r * r) / (1.0 - r * r), 0.0));
    c.set({1}, Complex(-r / (1.0 - r * r), 0.0));
    c.set({-1}, Complex(-r / (1.0 - r * r), 0.0));
    return c;
}

/// Off-center bound on the coherent-state symbol:
///   sup |I(p) - 1| <= (sum_m e^{-pi L m^2 / 2})^2 - 1,
/// computed with the tail cut once a term drops below 1e-18. L = 1 exceeds
/// one, which is exactly the obstruction the probe demonstrates.
inline double io_bound(int L) {
    if (L < 1)
        throw RefusalError(RefusalReason::unsupported_parameter, "io_bound requires L >= 1");
    double theta = 1.0;
    for (int mm = 1;; ++mm) {
        const double term = std::exp(-std::numbers::pi * L * mm * mm / 2.0);
        if (term < 1e-18) break;
        theta += 2.0 * term;
    }
    return theta * theta - 1.0;
}

/// Von Neumann lattice of coherent states, lattice constant a^2 = 2 pi L.
/// Overlaps I_n = (-1)^{L n1 n2} exp(-(pi/2) L (n1^2 + n2^2)); evaluated
/// lazily, never materialized beyond the requested radius.
inline OverlapModel coherent_model(int L) {
    if (L < 1)
        throw RefusalError(RefusalReason::unsupported_parameter,
                           "coherent model requires L >= 1");
    OverlapModel m;
    m.name = "coherent";
    m.dimension = 2;
    m.parameters = {{"L", static_cast<double>(L)}};
    m.default_radius = 6;
    m.overlap_at = [L](const MultiIndex& idx) -> Complex {
        const long long n1 = idx[0], n2 = idx[1];
        const double mag = std::exp(-std::numbers::pi * L * (n1 * n1 + n2 * n2) / 2.0);
        const bool neg = (static_cast<long long>(L) * n1 * n2) % 2 != 0;
        return Complex(neg ? -mag : mag, 0.0);
    };
    m.known_facts["io_bound"] = {io_bound(L), "closed-form"};
    if (L == 1) {
        m.known_facts["overlap_energy"] = {1.18034059901610, "numeric"};
        m.known_facts["overlap_energy_quadrant"] = {1.0883, "tabulated"};
    } else if (L == 2) {
        m.known_facts["overlap_energy"] = {1.00748372034509, "numeric"};
        m.known_facts["overlap_energy_quadrant"] = {1.00374, "tabulated"};
    }
    return m;
}

/// Lattice sum of |I_n|^2 over the full window [-radius, radius]^2.
inline double overlap_energy(int L, int radius) {
    double acc = 0.0;
    for (int n1 = -radius; n1 <= radius; ++n1)
        for (int n2 = -radius; n2 <= radius; ++n2)
            acc += std::exp(-std::numbers::pi * L * (n1 * n1 + n2 * n2));
    return acc;
}

/// Same sum restricted to the nonnegative quadrant n1 >= 0, n2 >= 0. This
/// is the quantity the published numeric table actually reproduces; see the
/// model's "overlap_energy_quadrant" known facts.
inline double overlap_energy_quadrant(int L, int radius) {
    double acc = 0.0;
    for (int n1 = 0; n1 <= radius; ++n1)
        for (int n2 = 0; n2 <= radius; ++n2)
            acc += std::exp(-std::numbers::pi * L * (n1 * n1 + n2 * n2));
    return acc;
}

/// Factory used by the CLI. Parameter defaults: box a=1.5, geometric r=0.5,
/// coherent L=2.
inline OverlapModel make_model(const std::string& name,
                               const std::map<std::string, double>& params) {
    auto get = [&](const char* key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "box") return box_model(get("a", 1.5));
    if (name == "dilation") return dilation_model();
    if (name == "geometric") return geometric_model(get("r", 0.5));
    if (name == "coherent") return coherent_model(static_cast<int>(get("L", 2)));
    throw std::invalid_argument("unknown model: " + name);
}

inline std::vector<std::string> model_names() {
    return {"box", "dilation", "geometric", "coherent"};
}

/// Partial sums of the model's own overlap family.
inline SummabilityReport summability(const OverlapModel& model, const std::vector<int>& radii) {
    return summability([&model](int r) { return model.lattice(r); }, radii);
}

}  // namespace biortho
