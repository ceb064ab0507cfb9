#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biortho/coeff_lattice.hpp"

namespace biortho {

enum class SummabilityVerdict { summable_l1, summable_l2_only, divergent, inconclusive };

inline const char* to_string(SummabilityVerdict v) {
    switch (v) {
        case SummabilityVerdict::summable_l1: return "summable_l1";
        case SummabilityVerdict::summable_l2_only: return "summable_l2_only";
        case SummabilityVerdict::divergent: return "divergent";
        case SummabilityVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

/// Partial-sum and decay diagnostics for a coefficient family.
/// l1 entries hold sum |a_l|, l2 entries hold sum |a_l|^2, both over the
/// window of the stated radius.
struct SummabilityReport {
    std::vector<std::pair<int, double>> l1_partial_sums;
    std::vector<std::pair<int, double>> l2_partial_sums;
    double decay_exponent_estimate = 0.0;  // exponential rate, or power-law exponent
    bool decay_is_exponential = false;
    double decay_fit_residual = std::numeric_limits<double>::infinity();
    SummabilityVerdict verdict = SummabilityVerdict::inconclusive;
};

namespace detail {

// Divergence rule: partial l1 sums beyond 1e6, or growth by a factor > 1.5
// across three consecutive radius doublings.
constexpr double kBlowupThreshold = 1e6;
constexpr double kDoublingGrowthFactor = 1.5;
constexpr double kConvergedRelTail = 1e-3;

inline SummabilityVerdict verdict_from_partials(
    const std::vector<std::pair<int, double>>& l1,
    const std::vector<std::pair<int, double>>& l2) {
    if (l1.empty()) return SummabilityVerdict::inconclusive;
    for (const auto& [r, s] : l1)
        if (s > kBlowupThreshold) return SummabilityVerdict::divergent;

    int growing_doublings = 0;
    for (std::size_t i = 1; i < l1.size(); ++i) {
        const bool doubling = l1[i].first >= 2 * l1[i - 1].first;
        if (!doubling) continue;
        if (l1[i - 1].second > 0.0 &&
            l1[i].second / l1[i - 1].second > kDoublingGrowthFactor)
            ++growing_doublings;
        else
            growing_doublings = 0;
    }
    if (growing_doublings >= 3) return SummabilityVerdict::divergent;

    auto converged = [](const std::vector<std::pair<int, double>>& s) {
        if (s.size() < 2) return false;
        const double last = s.back().second;
        const double prev = s[s.size() - 2].second;
        return last - prev <= kConvergedRelTail * std::max(last, 1e-300);
    };
    if (converged(l1)) return SummabilityVerdict::summable_l1;
    if (converged(l2)) return SummabilityVerdict::summable_l2_only;
    return SummabilityVerdict::inconclusive;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit f;
    if (std::abs(denom) < 1e-300) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    f.sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        f.sse += e * e;
    }
    return f;
}

}  // namespace detail

/// Partial sums of a coefficient family produced by a radius-indexed
/// generator, evaluated at strictly increasing radii.
inline SummabilityReport summability(const std::function<CoeffLattice(int)>& generator,
                                     const std::vector<int>& radii) {
    if (radii.empty()) throw std::invalid_argument("summability: no radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1])
            throw std::invalid_argument("summability: radii must be strictly increasing");

    SummabilityReport rep;
    CoeffLattice last = generator(radii.back());
    for (int r : radii) {
        const CoeffLattice lat = (r == radii.back()) ? last : generator(r);
        double s1 = 0, s2 = 0;
        lat.for_each([&](const MultiIndex&, Complex v) {
            const double m = std::abs(v);
            s1 += m;
            s2 += m * m;
        });
        rep.l1_partial_sums.emplace_back(r, s1);
        rep.l2_partial_sums.emplace_back(r, s2);
    }
    rep.verdict = detail::verdict_from_partials(rep.l1_partial_sums, rep.l2_partial_sums);

    // Borrow the decay diagnostics from the largest window.
    if (last.dimension() == 1) {
        std::vector<double> ls, logm;
        for (int l = 1; l <= last.radius(); ++l) {
            const double m = std::max(std::abs(last.at({l})), std::abs(last.at({-l})));
            if (m > 1e-300) {
                ls.push_back(static_cast<double>(l));
                logm.push_back(std::log(m));
            }
        }
        if (ls.size() >= 8) {
            auto exp_fit = detail::least_squares(ls, logm);
            std::vector<double> logl(ls.size());
            for (std::size_t i = 0; i < ls.size(); ++i) logl[i] = std::log(ls[i]);
            auto pow_fit = detail::least_squares(logl, logm);
            if (exp_fit.sse <= pow_fit.sse) {
                rep.decay_is_exponential = true;
                rep.decay_exponent_estimate = -exp_fit.slope;
                rep.decay_fit_residual = exp_fit.sse;
            } else {
                rep.decay_is_exponential = false;
                rep.decay_exponent_estimate = -pow_fit.slope;
                rep.decay_fit_residual = pow_fit.sse;
            }
        }
    }
    return rep;
}

/// Decay-class fit of an already materialized lattice. 1D fits directly;
/// 2D fits each axis cross-section and keeps the slower decay.
inline SummabilityReport decay_fit(const CoeffLattice& a) {
    SummabilityReport rep;

    auto fit_profile = [&](const std::vector<double>& ls, const std::vector<double>& logm,
                           double& rate, bool& is_exp, double& sse) -> bool {
        if (ls.size() < 8) return false;
        auto exp_fit = detail::least_squares(ls, logm);
        std::vector<double> logl(ls.size());
        for (std::size_t i = 0; i < ls.size(); ++i) logl[i] = std::log(ls[i]);
        auto pow_fit = detail::least_squares(logl, logm);
        if (exp_fit.sse <= pow_fit.sse) {
            is_exp = true;
            rate = -exp_fit.slope;
            sse = exp_fit.sse;
        } else {
            is_exp = false;
            rate = -pow_fit.slope;
            sse = pow_fit.sse;
        }
        return true;
    };

    auto profile_along = [&](int axis) {
        std::vector<double> ls, logm;
        for (int l = 1; l <= a.radius(); ++l) {
            MultiIndex plus(a.dimension()), minus(a.dimension());
            plus[axis] = l;
            minus[axis] = -l;
            const double m = std::max(std::abs(a.at(plus)), std::abs(a.at(minus)));
            if (m > 1e-300) {
                ls.push_back(static_cast<double>(l));
                logm.push_back(std::log(m));
            }
        }
        return std::make_pair(ls, logm);
    };

    bool any = false;
    double worst_rate = std::numeric_limits<double>::infinity();
    bool worst_is_exp = true;
    double worst_sse = 0;
    for (int axis = 0; axis < a.dimension(); ++axis) {
        auto [ls, logm] = profile_along(axis);
        double rate;
        bool is_exp;
        double sse;
        if (fit_profile(ls, logm, rate, is_exp, sse)) {
            any = true;
            // Exponential decay always beats polynomial; among equals keep
            // the smaller rate.
            if ((worst_is_exp && !is_exp) || (worst_is_exp == is_exp && rate < worst_rate)) {
                worst_is_exp = is_exp;
                worst_rate = rate;
                worst_sse = sse;
            }
        }
    }

    // Cumulative partial sums by window radius.
    for (int r = 0; r <= a.radius(); ++r) {
        double s1 = 0, s2 = 0;
        a.for_each([&](const MultiIndex& idx, Complex v) {
            if (idx.inf_norm() <= r) {
                const double m = std::abs(v);
                s1 += m;
                s2 += m * m;
            }
        });
        rep.l1_partial_sums.emplace_back(r, s1);
        rep.l2_partial_sums.emplace_back(r, s2);
    }

    if (!any) {
        rep.verdict = SummabilityVerdict::inconclusive;
        return rep;
    }
    rep.decay_is_exponential = worst_is_exp;
    rep.decay_exponent_estimate = worst_rate;
    rep.decay_fit_residual = worst_sse;
    if (worst_is_exp && worst_rate > 1e-6)
        rep.verdict = SummabilityVerdict::summable_l1;
    else if (!worst_is_exp && worst_rate > 1.0)
        rep.verdict = SummabilityVerdict::summable_l1;
    else if (!worst_is_exp && worst_rate > 0.5)
        rep.verdict = SummabilityVerdict::summable_l2_only;
    else
        rep.verdict = SummabilityVerdict::inconclusive;
    return rep;
}

}  // namespace biortho
