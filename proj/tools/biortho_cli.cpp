// Command-line front end for the biortho library: model catalog, symbol
// diagnostics, dual construction, verification tables, coherent-state
// reports and pseudo-hermitian spectra. Machine-readable by default so the
// test harness can diff runs byte for byte.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "biortho/coeff_lattice.hpp"
#include "biortho/coherent.hpp"
#include "biortho/dual.hpp"
#include "biortho/errors.hpp"
#include "biortho/frame.hpp"
#include "biortho/models.hpp"
#include "biortho/serialize.hpp"
#include "biortho/summability.hpp"
#include "biortho/symbol.hpp"

namespace {

using namespace biortho;

struct GlobalOpts {
    std::string format = "json";  // json | csv | pretty
    std::string out;              // empty = stdout
    double tol = -1.0;            // negative = per-dimension default
};

struct ModelOpts {
    std::string model = "box";
    double a = 1.5;
    double r = 0.5;
    int L = 2;

    OverlapModel build() const {
        std::map<std::string, double> params;
        params["a"] = a;
        params["r"] = r;
        params["L"] = static_cast<double>(L);
        return make_model(model, params);
    }
};

void add_model_flags(CLI::App* cmd, ModelOpts& m) {
    cmd->add_option("--model", m.model, "model name (box, dilation, geometric, coherent)")
        ->check(CLI::IsMember(model_names()));
    cmd->add_option("--a", m.a, "box width parameter");
    cmd->add_option("--r", m.r, "geometric overlap ratio");
    cmd->add_option("--L", m.L, "coherent lattice density parameter");
}

QuadratureOptions quadrature_from_env() {
    QuadratureOptions opts;
    if (const char* cap = std::getenv("BIORTHO_MAX_NODES")) {
        const int n = std::atoi(cap);
        if (n >= opts.initial_nodes) {
            opts.max_nodes_1d = std::min(opts.max_nodes_1d, n);
            opts.max_nodes_2d = std::min(opts.max_nodes_2d, n);
        }
    }
    return opts;
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream f(g.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + g.out);
        f << text;
    }
}

void write_model_header(JsonWriter& w, const OverlapModel& m) {
    w.key("model").value(m.name);
    w.key("dimension").value(m.dimension);
    w.key("parameters").begin_object();
    for (const auto& [k, v] : m.parameters) w.key(k).value(v);
    w.end_object();
}

int cmd_symbol(const GlobalOpts& g, const ModelOpts& mo, int radius, int grid,
               int samples) {
    const OverlapModel model = mo.build();
    const int rad = radius > 0 ? radius : model.default_radius;
    const SymbolFunction s(model.lattice(rad));
    const auto verdict = classify(s, 1e-8, -1.0, grid);

    if (g.format == "csv") {
        // Sample table (p, alpha(p)); 2D rows carry both momenta.
        std::string out = s.dimension == 1 ? "p,re,im\n" : "p1,p2,re,im\n";
        if (s.dimension == 1) {
            for (int j = 0; j < samples; ++j) {
                const double p = 2.0 * std::numbers::pi * j / samples;
                const Complex v = symbol_eval(s, p);
                out += fmt_double(p) + "," + fmt_double(v.real()) + "," +
                       fmt_double(v.imag()) + "\n";
            }
        } else {
            for (int j1 = 0; j1 < samples; ++j1)
                for (int j2 = 0; j2 < samples; ++j2) {
                    const double p1 = 2.0 * std::numbers::pi * j1 / samples;
                    const double p2 = 2.0 * std::numbers::pi * j2 / samples;
                    const Complex v = symbol_eval(s, {p1, p2});
                    out += fmt_double(p1) + "," + fmt_double(p2) + "," +
                           fmt_double(v.real()) + "," + fmt_double(v.imag()) + "\n";
                }
        }
        emit(g, out);
        return 0;
    }
    if (g.format == "pretty") {
        std::string out;
        out += "model: " + model.name + "  (radius " + std::to_string(rad) + ")\n";
        out += "status: " + std::string(to_string(verdict.status)) + "\n";
        out += "min |alpha| = " + fmt_double(verdict.min_abs) + " at p = (";
        for (std::size_t i = 0; i < verdict.argmin.size(); ++i)
            out += (i ? ", " : "") + fmt_double(verdict.argmin[i]);
        out += ")\nmax |alpha| = " + fmt_double(verdict.max_abs) + "\n";
        out += "margin = " + fmt_double(verdict.margin) + "\n";
        emit(g, out);
        return 0;
    }
    JsonWriter w;
    w.begin_object();
    write_model_header(w, model);
    w.key("radius").value(rad);
    w.key("verdict");
    write_verdict(w, verdict);
    w.end_object();
    emit(g, w.str());
    return 0;
}

int cmd_dual(const GlobalOpts& g, const ModelOpts& mo, int radius, int d_radius,
             int check_radius) {
    const OverlapModel model = mo.build();
    const SymbolFunction s(model.lattice(model.default_radius));
    const int c_rad = radius > 0 ? radius : (s.dimension == 1 ? 32 : 6);
    const int d_rad = d_radius > 0 ? d_radius : c_rad;
    const DualPair pair =
        make_dual_pair(s, c_rad, d_rad, g.tol, check_radius, quadrature_from_env());

    if (g.format == "csv") {
        emit(g, lattice_to_csv(pair.c));
        return 0;
    }
    if (g.format == "pretty") {
        std::string out;
        out += "model: " + model.name + "\n";
        out += "dual radius " + std::to_string(pair.c.radius()) + ", direct radius " +
               std::to_string(pair.d.radius()) + ", nodes " +
               std::to_string(pair.quadrature_nodes) + "\n";
        out += "delta residual (|l| <= " + std::to_string(pair.check_radius) +
               ") = " + fmt_double(pair.delta_residual) + "\n";
        out += "pairing sum c.d = " + fmt_double(pair.pairing.real()) + "\n";
        out += "l2(c)^2 = " + fmt_double(pair.coeff_l2_norm_sq) +
               "   (1/2pi)^D int 1/alpha^2 = " + fmt_double(pair.parseval_integral) +
               "   (1/2pi)^D int 1/alpha = " + fmt_double(pair.mean_inverse_symbol) + "\n";
        out += "c summability: " + std::string(to_string(pair.c_summability.verdict)) +
               ", d summability: " + std::string(to_string(pair.d_summability.verdict)) +
               "\n";
        emit(g, out);
        return 0;
    }
    JsonWriter w;
    w.begin_object();
    write_model_header(w, model);
    w.key("pair");
    write_dual_pair(w, pair);
    w.end_object();
    emit(g, w.str());
    return 0;
}

int cmd_verify(const GlobalOpts& g, const ModelOpts& mo, int radius, int check_radius) {
    const OverlapModel model = mo.build();
    const SymbolFunction s(model.lattice(model.default_radius));
    const int rad = radius > 0 ? radius : (s.dimension == 1 ? 32 : 4);
    const auto opts = quadrature_from_env();

    // Residual-vs-radius curve across halvings of the requested radius.
    std::vector<std::pair<int, double>> curve;
    for (int r = std::max(2, rad / 4); r <= rad; r *= 2) {
        const DualPair p = make_dual_pair(s, r, r, g.tol, check_radius, opts);
        curve.emplace_back(r, p.delta_residual);
    }
    const DualPair pair = make_dual_pair(s, rad, rad, g.tol, check_radius, opts);
    const double roundtrip = max_abs_difference(pair.d, s.overlaps.truncated(pair.d.radius()));

    if (g.format == "pretty") {
        std::string out = "model: " + model.name + "\n";
        out += "roundtrip max |d - alpha| = " + fmt_double(roundtrip) + "\n";
        out += "radius  delta_residual\n";
        for (const auto& [r, res] : curve)
            out += "  " + std::to_string(r) + "  " + fmt_double(res) + "\n";
        out += "parseval: l2(c)^2 = " + fmt_double(pair.coeff_l2_norm_sq) +
               " vs integral " + fmt_double(pair.parseval_integral) + "\n";
        emit(g, out);
        return 0;
    }
    JsonWriter w;
    w.begin_object();
    write_model_header(w, model);
    w.key("roundtrip_max_error").value(roundtrip);
    w.key("residual_curve").begin_array();
    for (const auto& [r, res] : curve) {
        w.begin_array();
        w.value(r);
        w.value(res);
        w.end_array();
    }
    w.end_array();
    w.key("coeff_l2_norm_sq").value(pair.coeff_l2_norm_sq);
    w.key("parseval_integral").value(pair.parseval_integral);
    w.key("mean_inverse_symbol").value(pair.mean_inverse_symbol);
    w.key("pairing_sum").value(pair.pairing);
    w.end_object();
    emit(g, w.str());
    return 0;
}

int cmd_coherent(const GlobalOpts& g, int L, const std::string& mode, int radius,
                 int doublings) {
    const auto opts = quadrature_from_env();
    if (mode == "perturbative") {
        const PerturbativeDual p = perturbative_dual(L);
        if (g.format == "csv") {
            emit(g, lattice_to_csv(p.coefficients));
            return 0;
        }
        JsonWriter w;
        w.begin_object();
        w.key("L").value(L);
        w.key("mode").value("perturbative");
        w.key("coefficients");
        write_lattice(w, p.coefficients);
        w.end_object();
        emit(g, w.str());
        return 0;
    }
    if (mode == "exact") {
        const int rad = radius > 0 ? radius : 4;
        int nodes = 0;
        const CoeffLattice c = exact_dual_2d(L, rad, g.tol < 0 ? 1e-10 : g.tol, opts, &nodes);
        if (g.format == "csv") {
            emit(g, lattice_to_csv(c));
            return 0;
        }
        JsonWriter w;
        w.begin_object();
        w.key("L").value(L);
        w.key("mode").value("exact");
        w.key("quadrature_nodes").value(nodes);
        w.key("coefficients");
        write_lattice(w, c);
        w.end_object();
        emit(g, w.str());
        return 0;
    }
    if (mode == "table") {
        // One row per L up to the requested one: biorthogonality overlaps of
        // the first-order dual and the closed-form operator bound.
        std::string out = "L,offdiag,diag,bound\n";
        for (int l = 1; l <= L; ++l) {
            const PerturbativeDual p = perturbative_dual(l);
            const double offdiag =
                std::abs(gram_overlap(p.coefficients, l, {1, 0}, {0, 0}, 8));
            const double diag =
                std::abs(gram_overlap(p.coefficients, l, {0, 0}, {0, 0}, 8));
            const double bound = norm_bound_check(l).bound;
            out += std::to_string(l) + "," + fmt_double(offdiag) + "," +
                   fmt_double(diag) + "," + fmt_double(bound) + "\n";
        }
        emit(g, out);
        return 0;
    }
    if (mode == "zak") {
        const ZakZeroResult z = locate_zak_zero(radius > 0 ? radius : 64);
        JsonWriter w;
        w.begin_object();
        w.key("zero").begin_array();
        w.value(z.location.k);
        w.value(z.location.q);
        w.end_array();
        w.key("value").value(z.value);
        w.key("basins").begin_array();
        for (const auto& b : z.basins) {
            w.begin_array();
            w.value(b.k);
            w.value(b.q);
            w.end_array();
        }
        w.end_array();
        w.end_object();
        emit(g, w.str());
        return 0;
    }
    if (mode == "obstruction") {
        const ObstructionProbe probe = l1_obstruction_probe(coherent_model(L), doublings);
        JsonWriter w;
        w.begin_object();
        w.key("L").value(L);
        w.key("verdict").value(to_string(probe.verdict));
        w.key("steps").begin_array();
        for (const auto& s : probe.steps) {
            w.begin_object();
            w.key("nodes").value(s.nodes);
            w.key("radius").value(s.radius);
            w.key("l1_partial").value(s.l1_partial);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        emit(g, w.str());
        // A divergent probe is the documented obstruction: refusal exit.
        return probe.verdict == SummabilityVerdict::divergent ? 2 : 0;
    }
    throw CLI::ValidationError("--mode", "unknown coherent mode: " + mode);
}

int cmd_spectra(const GlobalOpts& g, const ModelOpts& mo, int R, const std::string& eps_scheme,
                unsigned seed, int margin) {
    const OverlapModel model = mo.build();
    const SymbolFunction s(model.lattice(model.default_radius));
    const DualPair pair = make_dual_pair(s, 2 * R + 2, 2 * R + 2, g.tol,
                                         std::min(2 * R, 10), quadrature_from_env());
    const FrameMatrices f = build_frame(model, pair, R);
    const std::vector<double> eps = make_eps(eps_scheme, f, seed);
    const TripleReport rep = build_triple(f, eps, margin);

    if (g.format == "csv") {
        std::string out = "index,h,H,Hdag\n";
        for (std::size_t i = 0; i < rep.spectrum_H.size(); ++i) {
            out += std::to_string(i) + ",";
            out += (i < rep.spectrum_h.size() ? fmt_double(rep.spectrum_h[i]) : "") +
                   std::string(",");
            out += fmt_double(rep.spectrum_H[i]) + ",";
            out += fmt_double(rep.spectrum_Hdag[i]) + "\n";
        }
        emit(g, out);
        return 0;
    }
    JsonWriter w;
    w.begin_object();
    write_model_header(w, model);
    w.key("eps_scheme").value(eps_scheme);
    w.key("report");
    write_triple_report(w, rep);
    w.end_object();
    emit(g, w.str());
    return 0;
}

int cmd_models_list(const GlobalOpts& g) {
    JsonWriter w;
    w.begin_array();
    for (const auto& name : model_names()) {
        w.begin_object();
        w.key("name").value(name);
        if (name == "box") {
            w.key("dimension").value(1);
            w.key("parameters").begin_object();
            w.key("a").value("real in (0, 2]");
            w.end_object();
        } else if (name == "dilation") {
            w.key("dimension").value(1);
            w.key("parameters").begin_object().end_object();
        } else if (name == "geometric") {
            w.key("dimension").value(1);
            w.key("parameters").begin_object();
            w.key("r").value("real in [0, 1)");
            w.end_object();
        } else {
            w.key("dimension").value(2);
            w.key("parameters").begin_object();
            w.key("L").value("integer >= 1");
            w.end_object();
        }
        w.end_object();
    }
    w.end_array();
    emit(g, w.str());
    return 0;
}

int cmd_models_eval(const GlobalOpts& g, const ModelOpts& mo, const std::vector<int>& index) {
    const OverlapModel model = mo.build();
    if (static_cast<int>(index.size()) != model.dimension)
        throw CLI::ValidationError("--index", "index arity must match the model dimension");
    MultiIndex idx(model.dimension);
    for (int i = 0; i < model.dimension; ++i) idx[i] = index[static_cast<std::size_t>(i)];
    const Complex v = model.overlap_at(idx);
    JsonWriter w;
    w.begin_object();
    write_model_header(w, model);
    w.key("index").begin_array();
    for (int i = 0; i < model.dimension; ++i) w.value(idx[i]);
    w.end_array();
    w.key("overlap").value(v);
    w.end_object();
    emit(g, w.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"biorthogonal dual families from unitary-orbit overlap sequences"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name
    app.set_config("--config", "", "read options from a TOML config file");

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "pretty"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "write output to a file instead of stdout");
    app.add_option("--tol", g.tol, "quadrature convergence tolerance");

    ModelOpts sym_m, dual_m, verify_m, spectra_m, eval_m;
    int sym_radius = 0, sym_grid = 256, sym_samples = 256;
    auto* sym = app.add_subcommand("symbol", "evaluate the symbol and its invertibility");
    add_model_flags(sym, sym_m);
    sym->add_option("--radius", sym_radius, "overlap truncation radius");
    sym->add_option("--grid", sym_grid, "scan grid per axis")->check(CLI::Range(8, 65536));
    sym->add_option("--samples", sym_samples, "CSV sample count per axis");

    int dual_radius = 0, dual_d_radius = 0, dual_check = 10;
    auto* dual = app.add_subcommand("dual", "invert the symbol into dual coefficients");
    add_model_flags(dual, dual_m);
    dual->add_option("--radius", dual_radius, "dual coefficient radius");
    dual->add_option("--d-radius", dual_d_radius, "direct coefficient radius");
    dual->add_option("--check-radius", dual_check, "residual check radius");

    int verify_radius = 0, verify_check = 10;
    auto* verify = app.add_subcommand("verify", "round-trip and residual tables");
    add_model_flags(verify, verify_m);
    verify->add_option("--radius", verify_radius, "largest radius in the curve");
    verify->add_option("--check-radius", verify_check, "residual check radius");

    int coh_L = 2, coh_radius = 0, coh_doublings = 3;
    std::string coh_mode = "table";
    auto* coh = app.add_subcommand("coherent", "coherent-state lattice reports");
    coh->add_option("--L", coh_L, "lattice density parameter")->check(CLI::Range(1, 64));
    coh->add_option("--mode", coh_mode, "report kind")
        ->check(CLI::IsMember({"perturbative", "exact", "table", "zak", "obstruction"}));
    coh->add_option("--radius", coh_radius, "coefficient radius / scan grid");
    coh->add_option("--doublings", coh_doublings, "probe doublings")->check(CLI::Range(3, 8));

    int spectra_R = 8, spectra_margin = -1;
    std::string spectra_eps = "linear";
    unsigned spectra_seed = 12345;
    auto* spectra = app.add_subcommand("spectra", "pseudo-hermitian triple report");
    add_model_flags(spectra, spectra_m);
    spectra->add_option("--R", spectra_R, "window truncation radius")->check(CLI::Range(1, 64));
    spectra->add_option("--eps", spectra_eps, "spectrum scheme")
        ->check(CLI::IsMember({"linear", "random-seeded", "constant"}));
    spectra->add_option("--seed", spectra_seed, "seed for random-seeded eps");
    spectra->add_option("--margin", spectra_margin, "interior margin for residuals");

    auto* models = app.add_subcommand("models", "model catalog");
    models->require_subcommand(1);
    auto* mlist = models->add_subcommand("list", "enumerate models and parameter schemas");
    auto* meval = models->add_subcommand("eval", "print a single overlap");
    std::vector<int> eval_index{0};
    add_model_flags(meval, eval_m);
    meval->add_option("--name", eval_m.model, "model name")
        ->check(CLI::IsMember(model_names()));
    meval->add_option("--index", eval_index, "lattice index components");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors are exit 1, whatever CLI11 thinks
    }

    try {
        if (sym->parsed()) return cmd_symbol(g, sym_m, sym_radius, sym_grid, sym_samples);
        if (dual->parsed()) return cmd_dual(g, dual_m, dual_radius, dual_d_radius, dual_check);
        if (verify->parsed()) return cmd_verify(g, verify_m, verify_radius, verify_check);
        if (coh->parsed()) return cmd_coherent(g, coh_L, coh_mode, coh_radius, coh_doublings);
        if (spectra->parsed())
            return cmd_spectra(g, spectra_m, spectra_R, spectra_eps, spectra_seed,
                               spectra_margin);
        if (models->parsed()) {
            if (mlist->parsed()) return cmd_models_list(g);
            if (meval->parsed()) return cmd_models_eval(g, eval_m, eval_index);
        }
    } catch (const biortho::RefusalError& e) {
        std::cout << biortho::refusal_to_json(e) << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
