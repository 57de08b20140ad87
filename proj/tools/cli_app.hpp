#pragma once

// kolmo-lab command implementations. run() is the whole program; main() only
// forwards argv and the standard streams.

#include "checks.hpp"
#include "report.hpp"

#include <kolmo/besov.hpp>
#include <kolmo/euclid.hpp>
#include <kolmo/frames.hpp>
#include <kolmo/operators.hpp>
#include <kolmo/parallel.hpp>
#include <kolmo/symbol.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kolmo::cli {

enum ExitCode
{
    exit_ok = 0,
    exit_failed_checks = 1,
    exit_config = 2,
    exit_numeric = 3,
    exit_inconclusive = 4,
};

struct Globals
{
    bool no_timestamp = false;
    int threads = 0;
    std::uint64_t seed = 20240917;
    bool strict = false;
    std::string out;
    std::string csv;
};

struct FrameTailsOptions
{
    std::string frame = "bergman";
    double p = 2.0;
    double band = 0.5;
    double fock_c = pi / 2.0;
    std::string family = "monomials:0..10";
    int depth = 20;
    std::string exhaustion = "default";
    double r0 = 0.5;
    double eps = 1e-3;
};

struct ToeplitzOptions
{
    std::string symbol;
    ToeplitzReportOptions report;
    bool no_localization = false;
};

struct HankelOptions
{
    std::string fourier;
    std::string symbol;
    HankelReportOptions report;
};

struct BesovOptions
{
    std::string space = "hardy";
    double p = 2.0;
    int order = 1;
    double t = 0.0;
    std::string family = "monomials:1..10";
    int depth = 10;
    int n_radial = 64;
    double eps = 1e-3;
    bool bp = false;
};

struct L2Options
{
    std::string preset = "translated-gaussians";
    int count = 11;
    int kmax = 20;
    double band = 0.5;
    std::vector<double> radii{1.0, 2.0, 5.0, 10.0};
    std::vector<int> shift_steps{1, 4, 16, 64};
    bool stft = false;
    int samples = 0;
    double half_width = 0.0;
    double eps = 1e-6;
};

struct UmbrellaCliOptions
{
    std::string frame = "bergman";
    double p = 2.0;
    double band = 0.5;
    double fock_c = pi / 2.0;
    std::string umbrella = "coeffs:1";
    double scale = 1.0;
    double delta = 0.1;
    double eps_net = 0.04;
    int depth = 0;
    std::string exhaustion = "default";
    double r0 = 0.5;
};

namespace detail {

using report::json;

/// A complex constant written in the symbol grammar, e.g. "0.5-2*i".
inline Complex parse_constant(const std::string &text, const std::string &field)
{
    PolySymbol s;
    try {
        s = parse_symbol(text);
    } catch (const ParseError &e) {
        throw ParameterError(field + ": '" + text + "' is not a number (" + e.what() + ")");
    }
    if (s.degree() != 0)
        throw ParameterError(field + ": '" + text + "' is not a constant");
    const auto it = s.terms().find({0, 0});
    return it == s.terms().end() ? Complex(0.0) : it->second;
}

inline std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<Complex> parse_constants(const std::string &text, const std::string &field)
{
    std::vector<Complex> c;
    for (const auto &part : split(text, ','))
        c.push_back(parse_constant(part, field));
    return c;
}

/// "monomials:A..B" (basis vectors A..B) or "coeffs:c0,c1;c0,c1,c2" (one
/// coefficient vector per ';').
inline std::vector<FunctionRep> parse_family(const std::string &spec)
{
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    std::vector<FunctionRep> fam;
    if (kind == "monomials") {
        const auto dots = rest.find("..");
        if (dots == std::string::npos)
            throw ParameterError("family: expected monomials:A..B, got '" + spec + "'");
        int a = 0, b = 0;
        try {
            a = std::stoi(rest.substr(0, dots));
            b = std::stoi(rest.substr(dots + 2));
        } catch (const std::exception &) {
            throw ParameterError("family: bad index range in '" + spec + "'");
        }
        if (a < 0)
            throw ParameterError("family: indices must be >= 0");
        for (int j = a; j <= b; ++j)
            fam.push_back(FunctionRep::basis(j));
    } else if (kind == "coeffs") {
        if (rest.empty())
            throw ParameterError("family: coeffs list is empty");
        for (const auto &vec : split(rest, ';'))
            fam.push_back(FunctionRep::from_coeffs(parse_constants(vec, "family")));
    } else {
        throw ParameterError("family: unknown preset '" + kind + "' (monomials:A..B or coeffs:...)");
    }
    if (fam.empty())
        throw ParameterError("family: empty family '" + spec + "'");
    return fam;
}

inline FrameSpec make_frame(const std::string &name, double p, double band, double fock_c)
{
    if (name == "bergman")
        return FrameSpec::bergman(p);
    if (name == "fock")
        return FrameSpec::fock(fock_c);
    if (name == "paley-wiener")
        return FrameSpec::paley_wiener(band);
    if (name == "hardy")
        return FrameSpec::hardy_boundary();
    throw ParameterError("frame: unknown frame '" + name + "' (bergman, fock, paley-wiener, hardy)");
}

inline Exhaustion make_exhaustion(const std::string &kind, const FrameSpec &fr, int depth, double r0)
{
    if (depth < 1)
        throw ParameterError("depth: must be >= 1, got " + std::to_string(depth));
    if (kind == "default")
        return Exhaustion::default_for(fr, depth);
    if (kind == "ball")
        return Exhaustion::ball(depth);
    if (kind == "hyperbolic")
        return Exhaustion::hyperbolic(r0, depth);
    if (kind == "plane")
        return Exhaustion::plane(depth);
    if (kind == "box")
        return Exhaustion::plane(depth, ExhaustionKind::box);
    throw ParameterError("exhaustion: unknown schedule '" + kind +
                         "' (default, ball, hyperbolic, plane, box)");
}

/// Resolved option values of the parent app and the chosen subcommand.
inline json echo_options(const CLI::App &app, const CLI::App &sub)
{
    json cfg;
    auto add = [&](const CLI::App &a) {
        for (const CLI::Option *o : a.get_options()) {
            const std::string name = o->get_single_name();
            if (name.empty() || name == "help")
                continue;
            if (o->get_expected_max() == 0) {
                cfg[name] = o->count() > 0;
                continue;
            }
            if (o->count() > 0) {
                const auto &res = o->results();
                std::string v;
                for (std::size_t i = 0; i < res.size(); ++i)
                    v += (i ? "," : "") + res[i];
                cfg[name] = v;
            } else {
                cfg[name] = o->get_default_str();
            }
        }
    };
    add(app);
    add(sub);
    return cfg;
}

class Output
{
public:
    Output(const Globals &g, std::ostream &out) : g_(g), out_(out) {}

    void json_report(const json &j) const
    {
        const std::string text = j.dump(2) + "\n";
        if (g_.out.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(g_.out, std::ios::binary);
        if (!f)
            throw ParameterError("out: cannot write '" + g_.out + "'");
        f << text;
    }

    template <typename Writer>
    void csv(Writer &&write) const
    {
        if (g_.csv.empty())
            return;
        std::ofstream f(g_.csv, std::ios::binary);
        if (!f)
            throw ParameterError("csv: cannot write '" + g_.csv + "'");
        f.imbue(std::locale::classic());
        write(f);
    }

private:
    const Globals &g_;
    std::ostream &out_;
};

inline int verdict_exit(const Globals &g, bool inconclusive)
{
    return (g.strict && inconclusive) ? exit_inconclusive : exit_ok;
}

//----------------------------------------------------------------------------
// Commands
//----------------------------------------------------------------------------

inline int frame_tails(const FrameTailsOptions &o, const Globals &g, json rep, const Output &out)
{
    const auto fr = make_frame(o.frame, o.p, o.band, o.fock_c);
    const auto ex = make_exhaustion(o.exhaustion, fr, o.depth, o.r0);
    const auto fam = parse_family(o.family);
    const auto prof = family_tail_profile(fr, fam, ex, o.depth);
    const auto v = compactness_verdict(prof, o.eps);
    json res;
    res["frame"] = to_string(fr.kind);
    res["p"] = fr.p;
    res["exhaustion"] = to_string(ex.kind);
    res["family_size"] = prof.family_size;
    res["profile"] = report::tail_profile(prof, "R");
    res["eps"] = o.eps;
    res["level_reached"] = v.level_reached;
    rep["result"] = res;
    rep["verdict"] = to_string(v.verdict);
    out.json_report(rep);
    out.csv([&](std::ostream &f) {
        f << "level,R,q_n\n";
        for (std::size_t n = 0; n < prof.values.size(); ++n)
            f << n + 1 << ',' << report::csv_num(prof.levels[n]) << ',' << report::csv_num(prof.values[n]) << '\n';
    });
    return verdict_exit(g, false);
}

inline void diagnostic_csv(const DiagnosticReport &r, const Output &out)
{
    out.csv([&](std::ostream &f) {
        report::SeriesCsv c;
        for (const auto &p : r.berezin_profile) {
            c.add("berezin_max", p.r, p.max_abs);
            c.add("berezin_min", p.r, p.min_abs);
        }
        for (const auto &p : r.operator_profile)
            c.add("operator_berezin_max", p.r, p.max_abs);
        for (std::size_t j = 0; j < r.singular_values.size(); ++j)
            c.add("singular_value", static_cast<double>(j), r.singular_values[j]);
        for (const auto &row : r.localization) {
            c.add("localization_columns", row.R, row.columns_sup);
            c.add("localization_complements", row.R, row.complements_sup);
        }
        for (const auto &row : r.vmo)
            c.add("vmo_modulus", row.r, row.modulus);
        c.write(f);
    });
}

inline int toeplitz(ToeplitzOptions o, const Globals &g, json rep, const Output &out)
{
    const auto u = SymbolField::parse(o.symbol);
    o.report.localization = !o.no_localization;
    const auto r = toeplitz_report(u, o.report);
    rep["result"] = report::diagnostic(r);
    rep["verdict"] = to_string(r.verdict);
    out.json_report(rep);
    diagnostic_csv(r, out);
    return verdict_exit(g, r.verdict == Verdict::inconclusive);
}

inline int hankel(const HankelOptions &o, const Globals &g, json rep, const Output &out)
{
    if (o.fourier.empty() == o.symbol.empty())
        throw ParameterError("hankel: give exactly one of --fourier and --symbol");
    SymbolField gs;
    if (!o.fourier.empty()) {
        gs = SymbolField::from_fourier(parse_constants(o.fourier, "fourier"));
    } else {
        const auto p = parse_symbol(o.symbol);
        std::vector<Complex> c(p.degree() + 1);
        for (const auto &[k, v] : p.terms()) {
            if (k.second != 0)
                throw ParameterError("symbol: the Hankel symbol must be holomorphic (no conj(z) terms)");
            c[k.first] = v;
        }
        gs = SymbolField::from_fourier(c);
        gs.label = o.symbol;
    }
    const auto r = hankel_report(gs, o.report);
    rep["result"] = report::diagnostic(r);
    rep["verdict"] = to_string(r.verdict);
    out.json_report(rep);
    diagnostic_csv(r, out);
    return verdict_exit(g, r.verdict == Verdict::inconclusive);
}

inline BesovSpec make_besov(const BesovOptions &o)
{
    if (o.space == "hardy") {
        if (o.p != 2.0)
            throw ParameterError("p: the Hardy preset is a p = 2 space");
        return BesovSpec::hardy(o.order);
    }
    if (o.space == "dirichlet")
        return BesovSpec::dirichlet(o.p, o.order);
    if (o.space == "bergman")
        return BesovSpec::bergman(o.p);
    if (o.space == "weighted-bergman")
        return BesovSpec::weighted_bergman(o.p, o.t);
    throw ParameterError("space: unknown Besov preset '" + o.space +
                         "' (hardy, dirichlet, bergman, weighted-bergman)");
}

inline int besov(const BesovOptions &o, const Globals &g, json rep, const Output &out)
{
    const auto s = make_besov(o);
    const auto fam = parse_family(o.family);
    if (o.depth < 1)
        throw ParameterError("depth: must be >= 1, got " + std::to_string(o.depth));
    if (o.n_radial < 4)
        throw ParameterError("n-radial: must be >= 4");
    BesovQuadrature q;
    q.n_radial = o.n_radial;
    const auto prof = family_besov_profile(s, fam, dyadic_deltas(o.depth), q);
    const auto v = compactness_verdict(prof, o.eps);
    json res;
    res["space"] = o.space;
    res["p"] = s.p;
    res["order"] = s.order;
    res["weight"] = s.weight.describe();
    res["family_size"] = prof.family_size;
    res["profile"] = report::tail_profile(prof, "delta");
    json norms = json::array();
    for (const auto &f : fam)
        norms.push_back(report::number(besov_norm(s, f, q)));
    res["norms"] = norms;
    if (o.bp) {
        if (!(s.p > 1.0))
            throw ParameterError("bp: admissibility needs p > 1");
        res["bp_admissibility"] = report::bp(bp_admissibility(s.p, s.weight));
    }
    res["eps"] = o.eps;
    res["level_reached"] = v.level_reached;
    rep["result"] = res;
    rep["verdict"] = to_string(v.verdict);
    out.json_report(rep);
    out.csv([&](std::ostream &f) {
        report::SeriesCsv c;
        for (std::size_t n = 0; n < prof.values.size(); ++n)
            c.add("besov_tail", prof.levels[n], prof.values[n]);
        c.write(f);
    });
    return verdict_exit(g, false);
}

inline int l2(const L2Options &o, const Globals &g, json rep, const Output &out)
{
    const bool sinc = o.preset == "sinc";
    const int n = o.samples > 0 ? o.samples : (sinc ? 32768 : default_signal_samples);
    const double L = o.half_width > 0.0 ? o.half_width : (sinc ? 160.0 : default_signal_half_width);
    if (o.samples < 0 || o.half_width < 0.0)
        throw ParameterError("samples/half-width: must be positive");
    std::vector<SampledSignal> fam;
    if (o.preset == "gaussian") {
        fam.push_back(SampledSignal::from_function(normalized_gaussian, n, L));
    } else if (o.preset == "translated-gaussians") {
        if (o.count < 1)
            throw ParameterError("count: must be >= 1");
        for (int j = 0; j < o.count; ++j) {
            const double t = o.count == 1 ? 0.0 : static_cast<double>(j) / (o.count - 1);
            fam.push_back(SampledSignal::from_function([t](double x) { return normalized_gaussian(x - t); }, n, L));
        }
    } else if (o.preset == "modulated-gaussians") {
        if (o.kmax < 0)
            throw ParameterError("kmax: must be >= 0");
        for (int k = 0; k <= o.kmax; ++k)
            fam.push_back(SampledSignal::from_function(
                [k](double x) { return std::polar(1.0, 2.0 * pi * k * x) * normalized_gaussian(x); }, n, L));
    } else if (sinc) {
        if (!(o.band > 0.0))
            throw ParameterError("band: must be positive");
        const double norm = 1.0 / std::sqrt(2.0 * o.band);
        fam.push_back(SampledSignal::band_limited([norm](double) { return Complex(norm); }, o.band, n, L));
    } else {
        throw ParameterError("preset: unknown l2 preset '" + o.preset +
                             "' (gaussian, translated-gaussians, modulated-gaussians, sinc)");
    }
    if (o.radii.empty())
        throw ParameterError("radii: empty list");

    const auto rows = family_tails(fam, o.radii, false);
    std::vector<StftField> fields;
    if (o.stft)
        for (const auto &f : fam)
            fields.push_back(stft_field(f));
    json res;
    res["preset"] = o.preset;
    res["family_size"] = fam.size();
    res["samples"] = n;
    res["spacing"] = fam[0].spacing;
    res["window"] = {-L, fam[0].x_max()};
    json jr = json::array();
    std::vector<double> stft_sup(rows.size(), -1.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        json row{{"R", r.R},
                 {"spatial", report::number(r.spatial)},
                 {"fourier", report::number(r.fourier)},
                 {"spatial_argmax", r.spatial_argmax},
                 {"fourier_argmax", r.fourier_argmax}};
        if (o.stft && r.R <= fields[0].reach()) {
            double sup = -1.0;
            std::size_t arg = 0;
            for (std::size_t k = 0; k < fields.size(); ++k) {
                const double t = stft_tail(fields[k], r.R);
                if (t > sup) {
                    sup = t;
                    arg = k;
                }
            }
            stft_sup[i] = sup;
            row["stft"] = report::number(sup);
            row["stft_argmax"] = arg;
        } else if (o.stft) {
            row["stft"] = nullptr;
        }
        if (sinc)
            row["paley_wiener"] = report::number(pw_tail(fam[0], o.band, r.R));
        jr.push_back(row);
    }
    res["tails"] = jr;
    json tr = json::array();
    for (int m : o.shift_steps) {
        if (m < 0)
            throw ParameterError("shift-steps: must be >= 0");
        const double h = m * fam[0].spacing;
        double sup = 0.0;
        for (const auto &f : fam)
            sup = std::max(sup, translation_modulus(f, h));
        tr.push_back({{"h", h}, {"steps", m}, {"sup_modulus", report::number(sup)}});
    }
    res["translation"] = tr;
    if (o.stft) {
        res["stft_grid_id"] = fields[0].grid_id;
        res["stft_reach"] = fields[0].reach();
    }
    const auto &last = rows.back();
    const bool decayed = last.spatial <= o.eps && last.fourier <= o.eps;
    res["eps"] = o.eps;
    rep["result"] = res;
    rep["verdict"] = decayed ? "precompact_evidence" : "not_decayed";
    out.json_report(rep);
    out.csv([&](std::ostream &f) {
        report::SeriesCsv c;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            c.add("spatial_tail", rows[i].R, rows[i].spatial);
            c.add("fourier_tail", rows[i].R, rows[i].fourier);
            if (stft_sup[i] >= 0.0)
                c.add("stft_tail", rows[i].R, stft_sup[i]);
        }
        c.write(f);
    });
    return verdict_exit(g, false);
}

inline std::function<double(Complex)> make_umbrella(const UmbrellaCliOptions &o, const FrameSpec &fr)
{
    if (!(o.scale >= 0.0))
        throw ParameterError("scale: must be >= 0");
    const double s = o.scale;
    if (o.umbrella == "zero")
        return [](Complex) { return 0.0; };
    if (o.umbrella.rfind("coeffs:", 0) == 0) {
        const auto f = FunctionRep::from_coeffs(parse_constants(o.umbrella.substr(7), "umbrella"));
        return [fr, f, s](Complex x) { return s * std::abs(frame_coeff(fr, f, x)); };
    }
    if (o.umbrella == "gaussian") {
        const double c = fr.kind == FrameKind::fock ? fr.space.fock_c : pi / 2.0;
        return [c, s](Complex x) { return s * std::exp(-c * std::norm(x)); };
    }
    if (o.umbrella == "cauchy")
        return [s](Complex x) { return s / (1.0 + std::norm(x)); };
    throw ParameterError("umbrella: unknown umbrella '" + o.umbrella + "' (zero, coeffs:..., gaussian, cauchy)");
}

inline int umbrella(const UmbrellaCliOptions &o, const Globals &g, json rep, const Output &out)
{
    const auto fr = make_frame(o.frame, o.p, o.band, o.fock_c);
    const int depth = o.depth > 0 ? o.depth
                      : fr.kind == FrameKind::paley_wiener ? 40
                      : fr.kind == FrameKind::fock         ? 8
                                                           : 14;
    const auto ex = make_exhaustion(o.exhaustion, fr, depth, o.r0);
    const auto U = make_umbrella(o, fr);
    json res;
    res["frame"] = to_string(fr.kind);
    res["delta"] = o.delta;
    res["eps_net"] = o.eps_net;
    res["depth"] = depth;
    bool inconclusive = false;
    try {
        res["capacity"] = report::umbrella(umbrella_capacity(fr, U, o.delta, ex, o.eps_net));
        rep["verdict"] = "finite_capacity";
    } catch (const InconclusiveError &e) {
        inconclusive = true;
        res["capacity"] = nullptr;
        res["message"] = e.what();
        rep["verdict"] = "inconclusive";
    }
    rep["result"] = res;
    out.json_report(rep);
    return verdict_exit(g, inconclusive);
}

inline int selftest(const Globals &g, json rep, std::ostream &os, const Output &out)
{
    const bool stamp = !g.no_timestamp;
    os << "kolmo-lab " << KOLMO_VERSION << " selftest (seed " << g.seed << ")\n";
    if (stamp)
        os << "started " << report::utc_timestamp() << "\n";
    std::vector<checks::Result> results;
    auto run = [&](const std::function<checks::Result(std::uint64_t)> &c) {
        const auto t0 = std::chrono::steady_clock::now();
        checks::Result r;
        try {
            r = c(g.seed);
        } catch (const std::exception &e) {
            r.pass = false;
            r.name = "check raised an error";
            r.detail = e.what();
        }
        os << checks::format_line(r);
        if (stamp)
            os << " [" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s]";
        os << "\n" << std::flush;
        results.push_back(r);
    };
    for (const auto &c : checks::criteria())
        run(c);
    for (const auto &c : checks::extras())
        run(c);
    int failed = 0;
    json list = json::array();
    for (const auto &r : results) {
        failed += !r.pass;
        list.push_back({{"id", r.id},
                        {"name", r.name},
                        {"pass", r.pass},
                        {"measured", report::number(r.measured)},
                        {"tolerance", r.tolerance},
                        {"detail", r.detail}});
    }
    os << (results.size() - failed) << "/" << results.size() << " checks passed\n";
    if (!g.out.empty()) {
        rep["result"] = {{"checks", list}, {"passed", results.size() - failed}, {"failed", failed}};
        rep["verdict"] = failed ? "failed" : "passed";
        out.json_report(rep);
    }
    return failed ? exit_failed_checks : exit_ok;
}

} // namespace detail

/// Runs kolmo-lab with argv; JSON reports go to `out` unless --out is given.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"kolmo-lab: numerical compactness diagnostics in reproducing kernel spaces"};
    app.name("kolmo-lab");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "INI file; sections name commands, flags override it");

    Globals g;
    app.add_flag("--no-timestamp", g.no_timestamp, "omit timestamps so runs are byte-identical");
    app.add_option("--threads", g.threads, "worker cap (default KOLMO_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", g.seed, "seed for sampled inputs");
    app.add_flag("--strict", g.strict, "exit 4 when a verdict is inconclusive");
    app.add_option("--out", g.out, "write the JSON report here instead of stdout");
    app.add_option("--csv", g.csv, "write plot data (CSV) here");

    FrameTailsOptions ft;
    auto *c_ft = app.add_subcommand("frame-tails", "sup tail masses of a family along an exhaustion");
    c_ft->add_option("--frame", ft.frame, "bergman, fock, paley-wiener or hardy");
    c_ft->add_option("--p", ft.p, "Bergman p-frame exponent");
    c_ft->add_option("--band", ft.band, "Paley-Wiener band half-width");
    c_ft->add_option("--fock-c", ft.fock_c, "Fock weight parameter");
    c_ft->add_option("--family", ft.family, "monomials:A..B or coeffs:c0,c1;...");
    c_ft->add_option("--depth", ft.depth, "number of exhaustion levels");
    c_ft->add_option("--exhaustion", ft.exhaustion, "default, ball, hyperbolic, plane or box");
    c_ft->add_option("--r0", ft.r0, "hyperbolic step");
    c_ft->add_option("--eps", ft.eps, "tail threshold for the verdict");

    ToeplitzOptions tp;
    auto *c_tp = app.add_subcommand("toeplitz", "Berezin profile, singular values and localization of T_u");
    c_tp->add_option("--symbol", tp.symbol, "polynomial symbol in z, conj(z), |z|^2")->required();
    c_tp->add_option("--deg", tp.report.deg, "section degree");
    c_tp->add_option("--radii", tp.report.radii, "profile radii")->delimiter(',');
    c_tp->add_option("--verdict-radius", tp.report.verdict_radius, "radius where the verdict reads the Berezin profile");
    c_tp->add_option("--compact-below", tp.report.compact_below, "compact_evidence below this value");
    c_tp->add_option("--noncompact-above", tp.report.noncompact_above, "noncompact_evidence above this value");
    c_tp->add_option("--p", tp.report.p, "exponent of the localization test");
    c_tp->add_option("--delta", tp.report.delta, "localization delta (0: min(p,p')/2)");
    c_tp->add_option("--localization-R", tp.report.localization_R, "hyperbolic radii")->delimiter(',');
    c_tp->add_option("--sup-radii", tp.report.sup_radii, "radii sampled for the sup over z");
    c_tp->add_option("--sup-angles", tp.report.sup_angles, "angles sampled for the sup over z");
    c_tp->add_flag("--no-localization", tp.no_localization, "skip the localization table");

    HankelOptions hk;
    auto *c_hk = app.add_subcommand("hankel", "little Hankel section, singular values and VMO modulus");
    c_hk->add_option("--fourier", hk.fourier, "Fourier coefficients g^(0),g^(1),...");
    c_hk->add_option("--symbol", hk.symbol, "holomorphic polynomial symbol");
    c_hk->add_option("--deg", hk.report.deg);
    c_hk->add_option("--n-boundary", hk.report.n_boundary, "boundary nodes (0: max(1024, 4 deg))");
    c_hk->add_option("--rank-tol", hk.report.rank_tolerance);
    c_hk->add_option("--vmo-radii", hk.report.vmo_radii)->delimiter(',');
    c_hk->add_option("--vmo-nodes", hk.report.vmo_boundary_nodes);

    BesovOptions bs;
    auto *c_bs = app.add_subcommand("besov", "Besov-Sobolev tails of a family near the boundary");
    c_bs->add_option("--space", bs.space, "hardy, dirichlet, bergman or weighted-bergman");
    c_bs->add_option("--p", bs.p);
    c_bs->add_option("--J", bs.order, "derivative order");
    c_bs->add_option("--t", bs.t, "weighted-bergman exponent");
    c_bs->add_option("--family", bs.family, "monomials:A..B (z^j) or coeffs:a0,a1;...");
    c_bs->add_option("--depth", bs.depth, "deltas 2^-1 .. 2^-depth");
    c_bs->add_option("--n-radial", bs.n_radial);
    c_bs->add_option("--eps", bs.eps);
    c_bs->add_flag("--bp", bs.bp, "also run the B_p weight check");

    L2Options l2o;
    auto *c_l2 = app.add_subcommand("l2", "spatial, Fourier, STFT and Paley-Wiener tails on L2(R)");
    c_l2->add_option("--preset", l2o.preset, "gaussian, translated-gaussians, modulated-gaussians or sinc");
    c_l2->add_option("--count", l2o.count);
    c_l2->add_option("--kmax", l2o.kmax);
    c_l2->add_option("--band", l2o.band);
    c_l2->add_option("--radii", l2o.radii)->delimiter(',');
    c_l2->add_option("--shift-steps", l2o.shift_steps, "translation steps in samples")->delimiter(',');
    c_l2->add_flag("--stft", l2o.stft, "add STFT tails");
    c_l2->add_option("--samples", l2o.samples);
    c_l2->add_option("--half-width", l2o.half_width);
    c_l2->add_option("--eps", l2o.eps);

    UmbrellaCliOptions um;
    auto *c_um = app.add_subcommand("umbrella", "capacity bound for separated families under an umbrella");
    c_um->add_option("--frame", um.frame);
    c_um->add_option("--p", um.p);
    c_um->add_option("--band", um.band);
    c_um->add_option("--fock-c", um.fock_c);
    c_um->add_option("--umbrella", um.umbrella, "zero, coeffs:c0,c1,..., gaussian or cauchy");
    c_um->add_option("--scale", um.scale);
    c_um->add_option("--delta", um.delta);
    c_um->add_option("--eps-net", um.eps_net);
    c_um->add_option("--depth", um.depth, "exhaustion depth (0: per-frame default)");
    c_um->add_option("--exhaustion", um.exhaustion);
    c_um->add_option("--r0", um.r0);

    auto *c_st = app.add_subcommand("selftest", "run the oracle suite, one PASS/FAIL line per invariant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "kolmo-lab: config error: " << e.what() << "\n";
        return exit_config;
    }

    if (g.threads > 0)
        set_max_threads(static_cast<unsigned>(g.threads));

    const CLI::App *sub = app.get_subcommands().front();
    auto rep = report::envelope(sub->get_name(), detail::echo_options(app, *sub), !g.no_timestamp);
    const detail::Output output(g, out);
    try {
        if (sub == c_ft)
            return detail::frame_tails(ft, g, rep, output);
        if (sub == c_tp)
            return detail::toeplitz(tp, g, rep, output);
        if (sub == c_hk)
            return detail::hankel(hk, g, rep, output);
        if (sub == c_bs)
            return detail::besov(bs, g, rep, output);
        if (sub == c_l2)
            return detail::l2(l2o, g, rep, output);
        if (sub == c_um)
            return detail::umbrella(um, g, rep, output);
        if (sub == c_st)
            return detail::selftest(g, rep, out, output);
    } catch (const ParseError &e) {
        err << "kolmo-lab: parse error: " << e.what() << "\n";
        return exit_config;
    } catch (const ParameterError &e) {
        err << "kolmo-lab: parameter error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError &e) {
        err << "kolmo-lab: domain error: " << e.what() << "\n";
        return exit_config;
    } catch (const WindowError &e) {
        err << "kolmo-lab: window error: " << e.what() << "\n";
        return exit_config;
    } catch (const PreconditionError &e) {
        err << "kolmo-lab: precondition error: " << e.what() << "\n";
        return exit_config;
    } catch (const NumericError &e) {
        err << "kolmo-lab: numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const ResolutionError &e) {
        err << "kolmo-lab: resolution error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const InconclusiveError &e) {
        err << "kolmo-lab: inconclusive: " << e.what() << "\n";
        return g.strict ? exit_inconclusive : exit_numeric;
    }
    err << "kolmo-lab: no command\n";
    return exit_config;
}

} // namespace kolmo::cli
