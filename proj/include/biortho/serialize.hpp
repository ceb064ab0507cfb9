#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/dual.hpp"
#include "biortho/errors.hpp"
#include "biortho/frame.hpp"
#include "biortho/summability.hpp"
#include "biortho/symbol.hpp"

namespace biortho {

/// 12-significant-digit float formatting; the printf conversion rounds
/// half-to-even on IEEE doubles, so identical inputs serialize identically.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Minimal write-only JSON builder with insertion-ordered keys and the
/// fixed float format above. Output is deterministic by construction.
class JsonWriter {
public:
    JsonWriter& begin_object() { return open('{'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('['); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(const std::string& k) {
        comma();
        out_ << '"' << escape(k) << "\":";
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) { return raw(fmt_double(v)); }
    JsonWriter& value(int v) { return raw(std::to_string(v)); }
    JsonWriter& value(std::size_t v) { return raw(std::to_string(v)); }
    JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& value(const char* s) { return raw('"' + escape(s) + '"'); }
    JsonWriter& value(const std::string& s) { return raw('"' + escape(s) + '"'); }
    JsonWriter& value(Complex z) {
        begin_array();
        value(z.real());
        value(z.imag());
        return end_array();
    }

    std::string str() const { return out_.str(); }

private:
    JsonWriter& open(char c) {
        comma();
        out_ << c;
        first_.push_back(true);
        pending_value_ = false;
        return *this;
    }
    JsonWriter& close(char c) {
        out_ << c;
        first_.pop_back();
        if (!first_.empty()) first_.back() = false;
        return *this;
    }
    JsonWriter& raw(const std::string& s) {
        comma();
        out_ << s;
        if (!first_.empty()) first_.back() = false;
        pending_value_ = false;
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_.empty() && !first_.back()) out_ << ',';
        if (!first_.empty()) first_.back() = false;
    }
    static std::string escape(const std::string& s) {
        std::string r;
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r;
    }

    std::ostringstream out_;
    std::vector<bool> first_;
    bool pending_value_ = false;
};

inline void write_lattice(JsonWriter& w, const CoeffLattice& lat) {
    w.begin_object();
    w.key("dimension").value(lat.dimension());
    w.key("radius").value(lat.radius());
    w.key("values").begin_array();
    lat.for_each([&](const MultiIndex& idx, Complex v) {
        w.begin_array();
        for (int i = 0; i < idx.dim(); ++i) w.value(idx[i]);
        w.value(v.real());
        w.value(v.imag());
        w.end_array();
    });
    w.end_array();
    w.end_object();
}

inline std::string lattice_to_json(const CoeffLattice& lat) {
    JsonWriter w;
    write_lattice(w, lat);
    return w.str();
}

/// CSV with one row per index; comma separated, header row, LF endings.
inline std::string lattice_to_csv(const CoeffLattice& lat) {
    std::string out;
    if (lat.dimension() == 1)
        out = "l,re,im\n";
    else
        out = "n1,n2,re,im\n";
    lat.for_each([&](const MultiIndex& idx, Complex v) {
        for (int i = 0; i < idx.dim(); ++i) out += std::to_string(idx[i]) + ",";
        out += fmt_double(v.real()) + "," + fmt_double(v.imag()) + "\n";
    });
    return out;
}

inline void write_verdict(JsonWriter& w, const InvertibilityVerdict& v) {
    w.begin_object();
    w.key("status").value(to_string(v.status));
    w.key("min_abs").value(v.min_abs);
    w.key("argmin").begin_array();
    for (double p : v.argmin) w.value(p);
    w.end_array();
    w.key("max_abs").value(v.max_abs);
    w.key("margin").value(v.margin);
    w.key("zero_tol").value(v.zero_tol);
    w.key("near_tol").value(v.near_tol);
    w.end_object();
}

inline void write_summability(JsonWriter& w, const SummabilityReport& rep) {
    w.begin_object();
    w.key("verdict").value(to_string(rep.verdict));
    w.key("decay_exponent_estimate").value(rep.decay_exponent_estimate);
    w.key("decay_is_exponential").value(rep.decay_is_exponential);
    w.key("l1_partial_sums").begin_array();
    for (const auto& [r, s] : rep.l1_partial_sums) {
        w.begin_array();
        w.value(r);
        w.value(s);
        w.end_array();
    }
    w.end_array();
    w.key("l2_partial_sums").begin_array();
    for (const auto& [r, s] : rep.l2_partial_sums) {
        w.begin_array();
        w.value(r);
        w.value(s);
        w.end_array();
    }
    w.end_array();
    w.end_object();
}

inline void write_dual_pair(JsonWriter& w, const DualPair& pair) {
    w.begin_object();
    w.key("c");
    write_lattice(w, pair.c);
    w.key("d");
    write_lattice(w, pair.d);
    w.key("delta_residual").value(pair.delta_residual);
    w.key("check_radius").value(pair.check_radius);
    w.key("quadrature_nodes").value(pair.quadrature_nodes);
    w.key("pairing_sum").value(pair.pairing);
    w.key("coeff_l2_norm_sq").value(pair.coeff_l2_norm_sq);
    w.key("parseval_integral").value(pair.parseval_integral);
    w.key("mean_inverse_symbol").value(pair.mean_inverse_symbol);
    w.key("c_summability");
    write_summability(w, pair.c_summability);
    w.key("d_summability");
    write_summability(w, pair.d_summability);
    w.end_object();
}

inline void write_triple_report(JsonWriter& w, const TripleReport& rep) {
    w.begin_object();
    w.key("R").value(rep.R);
    w.key("interior_margin").value(rep.interior_margin);
    w.key("h_built").value(rep.h_built);
    w.key("gram_min_eigenvalue").value(rep.gram_min_eigenvalue);
    w.key("x_min_eigenvalue").value(rep.x_min_eigenvalue);
    w.key("spectra_max_imag").value(rep.spectra_max_imag);
    w.key("h_hermiticity_raw").value(rep.h_hermiticity_raw);
    w.key("h_hermiticity_weighted").value(rep.h_hermiticity_weighted);
    w.key("intertwine_residuals").begin_object();
    for (const auto& [name, val] : rep.intertwine_residuals) w.key(name).value(val);
    w.end_object();
    auto spectrum = [&](const char* name, const std::vector<double>& s) {
        w.key(name).begin_array();
        for (double v : s) w.value(v);
        w.end_array();
    };
    spectrum("spectrum_h", rep.spectrum_h);
    spectrum("spectrum_H", rep.spectrum_H);
    spectrum("spectrum_Hdag", rep.spectrum_Hdag);
    w.end_object();
}

/// Machine-readable refusal document; the reason strings form a closed
/// enumeration shared with the exit-code contract.
inline std::string refusal_to_json(const RefusalError& e) {
    JsonWriter w;
    w.begin_object();
    w.key("status").value(to_string(e.reason()));
    w.key("reason").value(to_string(e.reason()));
    w.key("message").value(e.what());
    if (!e.argmin.empty()) {
        w.key("argmin").begin_array();
        for (double p : e.argmin) w.value(p);
        w.end_array();
        w.key("min_abs").value(e.min_abs);
    }
    if (e.nodes > 0) w.key("nodes").value(e.nodes);
    if (e.last_change > 0) w.key("last_change").value(e.last_change);
    if (e.min_eigenvalue != 0) w.key("min_eigenvalue").value(e.min_eigenvalue);
    w.end_object();
    return w.str();
}

}  // namespace biortho
