// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.
//
// Command-line front end.  One verb per invocation:
//
//   list       built-in manifold catalog (or an external manifest file)
//   curvature  pointwise curvature summaries
//   classify   pointwise model fits: constant, quasi-constant, conformally
//              flat, recurrent
//   planes     tangent-plane taxonomy and degenerate-plane diagnostics
//   conformal  rescale by e^{2 sigma}: deformation tensor, curvature
//              verification, pullback classification
//   limit      sectional-curvature ratios along plane families collapsing
//              onto a degenerate plane
//   lemma A|B|C    pointwise equivalence suites for the degenerate-plane
//                  characterizations of c*pi1 and of Weyl = 0
//   theorem 1|2|3  property suites for the conformal pair (g, e^{2 sigma} g)
//
// Exit codes: 0 pass or informational, 1 verdict failure, 2 usage, parse
// or input error.  With --format json the output follows the report_v1
// schema (documented in README.md) and is byte-identical for identical
// (command, seed).

#include "curved/chart.hpp"
#include "curved/classify.hpp"
#include "curved/conformal.hpp"
#include "curved/diffeo.hpp"
#include "curved/dsl.hpp"
#include "curved/errors.hpp"
#include "curved/planes.hpp"
#include "curved/registry.hpp"
#include "curved/tensor.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using curved::Vec;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Command-level problems that are not CLI11 parse errors: bad points,
// missing sigma, signatures that do not admit the requested planes.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- helpers

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_real(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError(what + ": not a number: '" + text + "'");
    }
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError(what + ": not an unsigned integer: '" + text + "'");
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::string point_str(const Vec& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ", ";
        out += num(p[i]);
    }
    return out + ")";
}

json vec_json(std::span<const double> v) {
    json a = json::array();
    for (double c : v) a.push_back(c);
    return a;
}

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

double symmetric_double(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
}

double flat_floor(const curved::SymmetricBilinear& g) {
    const double m = g.max_abs();
    return 1e-9 * (1.0 + m * m);
}

// --------------------------------------------------------------- options

struct Options {
    std::string verb;
    std::string argument; // lemma statement / theorem number
    std::string manifold;
    std::string inline_dsl;
    std::string c_override, s_override, n_override, f_override, h_override;
    std::string sigma_text;
    std::vector<std::string> at;
    std::string domain_text;
    std::string manifest_path;
    std::string kind = "weak";
    int points = 3;
    int samples = 32;
    bool samples_set = false;
    int steps = 8;
    double tol = 0.0;
    bool tol_set = false;
    std::uint64_t seed = 2026;
    bool fd = false;
    std::string format = "text";

    double tol_or(double def) const { return tol_set ? tol : def; }
};

Vec parse_point(const std::string& text) {
    Vec p;
    for (const std::string& part : split(text, ','))
        p.push_back(parse_real(part, "--at"));
    return p;
}

curved::Box parse_domain(const std::string& text, int dim) {
    const std::vector<std::string> parts = split(text, ',');
    std::vector<std::array<double, 2>> axes;
    for (const std::string& part : parts) {
        const std::vector<std::string> lohi = split(part, ':');
        if (lohi.size() != 2) throw UsageError("--domain: expected lo:hi, got '" + part + "'");
        const double lo = parse_real(lohi[0], "--domain");
        const double hi = parse_real(lohi[1], "--domain");
        if (!(lo < hi)) throw UsageError("--domain: need lo < hi in '" + part + "'");
        axes.push_back({lo, hi});
    }
    if (axes.size() == 1) {
        curved::Box box;
        for (int i = 0; i < dim; ++i) box.axes.push_back(axes[0]);
        return box;
    }
    if (static_cast<int>(axes.size()) != dim)
        throw UsageError("--domain: got " + std::to_string(axes.size()) + " axes, chart has " +
                         std::to_string(dim));
    return curved::Box{axes};
}

// ---------------------------------------------------------------- source

struct Source {
    curved::MetricChart chart;
    std::optional<curved::MetricChart> partner; // conformal pairs only
    std::optional<curved::ScalarField> sigma;
    std::string sigma_echo;
    std::string label;
    json echo;
};

std::map<std::string, std::string> collect_overrides(const Options& opt) {
    std::map<std::string, std::string> ov;
    if (!opt.c_override.empty()) ov["c"] = opt.c_override;
    if (!opt.s_override.empty()) ov["s"] = opt.s_override;
    if (!opt.n_override.empty()) ov["n"] = opt.n_override;
    if (!opt.f_override.empty()) ov["f"] = opt.f_override;
    if (!opt.h_override.empty()) ov["h"] = opt.h_override;
    return ov;
}

Source load_source(const Options& opt) {
    const bool has_manifold = !opt.manifold.empty();
    const bool has_inline = !opt.inline_dsl.empty();
    if (has_manifold == has_inline)
        throw UsageError("need exactly one metric source: --manifold or --inline");

    if (has_inline) {
        if (!collect_overrides(opt).empty())
            throw UsageError("--c/--s/--n/--f/--h apply to --manifold sources only");
        curved::MetricGrid grid;
        try {
            grid = curved::parse_metric_dsl(opt.inline_dsl);
        } catch (const curved::ParseError& e) {
            throw UsageError("inline metric: " + std::string(e.what()));
        }
        const curved::Box box = opt.domain_text.empty()
                                    ? curved::Box::cube(grid.dim, -1.0, 1.0)
                                    : parse_domain(opt.domain_text, grid.dim);
        Source src{curved::MetricChart(grid, box), {}, {}, "", "inline", {}};
        src.echo["inline"] = opt.inline_dsl;
        if (!opt.domain_text.empty()) src.echo["domain"] = opt.domain_text;
        if (!opt.sigma_text.empty()) {
            src.sigma = curved::ScalarField(curved::parse_expression(opt.sigma_text, grid.dim),
                                            grid.dim);
            src.sigma_echo = opt.sigma_text;
        }
        return src;
    }

    const std::map<std::string, std::string> ov = collect_overrides(opt);
    curved::ManifoldSpec spec;
    try {
        spec = curved::resolve_spec(opt.manifold, ov);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (spec.kind == "ppwave_pair" && !opt.sigma_text.empty())
        spec.profiles["sigma"] = opt.sigma_text;
    if (!opt.domain_text.empty()) {
        int n = spec.params.count("n") ? static_cast<int>(spec.params.at("n"))
                                       : curved::instantiate(spec).chart.dim();
        spec.domain = parse_domain(opt.domain_text, n);
    }
    curved::Manifold m = [&] {
        try {
            return curved::instantiate(spec);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    std::string label = opt.manifold;
    if (!ov.empty()) {
        label += "(";
        bool first = true;
        for (const auto& [k, v] : ov) {
            if (!first) label += ",";
            label += k + "=" + v;
            first = false;
        }
        label += ")";
    }
    Source src{std::move(m.chart), std::move(m.partner), std::move(m.sigma), "", label, {}};
    src.echo["manifold"] = opt.manifold;
    if (!ov.empty()) src.echo["overrides"] = ov;
    if (!opt.domain_text.empty()) src.echo["domain"] = opt.domain_text;
    if (!opt.sigma_text.empty()) {
        const int n = src.chart.dim();
        src.sigma = curved::ScalarField(curved::parse_expression(opt.sigma_text, n), n);
        src.sigma_echo = opt.sigma_text;
    } else if (src.sigma) {
        src.sigma_echo = spec.profiles.count("sigma") ? spec.profiles.at("sigma") : "";
    }
    return src;
}

std::vector<Vec> select_points(const Options& opt, const curved::MetricChart& chart) {
    std::vector<Vec> pts;
    if (!opt.at.empty()) {
        for (const std::string& text : opt.at) {
            Vec p = parse_point(text);
            if (static_cast<int>(p.size()) != chart.dim())
                throw UsageError("--at " + text + ": expected " + std::to_string(chart.dim()) +
                                 " coordinates");
            try {
                chart.require_inside(p);
            } catch (const curved::OutsideDomainError& e) {
                throw UsageError(e.what());
            }
            pts.push_back(std::move(p));
        }
    } else {
        pts = curved::sample_domain_points(chart.domain(), opt.points, opt.seed);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

// ------------------------------------------------------------------ list

std::string render_params(const curved::ManifoldSpec& spec) {
    std::string out;
    for (const auto& [k, v] : spec.params) {
        if (!out.empty()) out += " ";
        out += k + "=" + num(v);
    }
    for (const auto& [k, v] : spec.profiles) {
        if (!out.empty()) out += " ";
        out += k + "=" + v;
    }
    return out.empty() ? "-" : out;
}

std::string verb_list(const Options& opt, json& results, std::ostringstream& tx) {
    std::vector<curved::ManifoldSpec> entries;
    if (opt.manifest_path.empty()) {
        entries = curved::builtin_catalog();
    } else {
        std::ifstream in(opt.manifest_path);
        if (!in) throw UsageError("cannot open manifest: " + opt.manifest_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            entries = curved::parse_manifest(buf.str());
        } catch (const std::invalid_argument& e) {
            throw UsageError("manifest: " + std::string(e.what()));
        }
    }

    json rows = json::array();
    for (const curved::ManifoldSpec& spec : entries) {
        json row;
        row["name"] = spec.name;
        row["kind"] = spec.kind;
        row["construction"] = curved::construction_name(spec.construction);
        row["parameters"] = spec.params;
        row["profiles"] = spec.profiles;
        json dom = json::array();
        for (const auto& ax : spec.domain.axes) dom.push_back(json::array({ax[0], ax[1]}));
        row["domain"] = dom;
        row["note"] = spec.note;
        rows.push_back(std::move(row));

        std::string dtext;
        for (const auto& ax : spec.domain.axes) {
            if (!dtext.empty()) dtext += " ";
            dtext += num(ax[0]) + ":" + num(ax[1]);
        }
        tx << "  " << spec.name << " | " << spec.kind << " | "
           << curved::construction_name(spec.construction) << " | " << render_params(spec)
           << " | " << dtext << " | " << spec.note << "\n";
    }
    results["manifolds"] = std::move(rows);
    results["count"] = static_cast<int>(entries.size());
    return "info";
}

// ------------------------------------------------------------- curvature

std::string verb_curvature(const Options& opt, const Source& src, json& results,
                           std::ostringstream& tx) {
    const curved::MetricChart& chart = src.chart;
    const std::vector<Vec> pts = select_points(opt, chart);
    json rows = json::array();
    for (const Vec& p : pts) {
        const curved::CurvatureBundle b = curved::curvature_bundle(chart, p);
        const curved::Tensor5 nabla = curved::covariant_derivative_R(chart, p);
        const double bianchi = curved::second_bianchi_violation(nabla);
        const curved::SymmetryCheck sym = curved::check_curvature_symmetries(b.riemann);

        json row;
        row["point"] = vec_json(p);
        row["scalar"] = b.scalar;
        row["riemann_max"] = b.riemann.max_abs();
        row["ricci_max"] = b.ricci.max_abs();
        row["traceless_ricci_max"] = b.traceless_ricci.max_abs();
        row["weyl_max"] = b.weyl ? json(b.weyl->max_abs()) : json(nullptr);
        row["cotton_max"] = b.cotton ? json(b.cotton->max_abs()) : json(nullptr);
        row["nabla_r_max"] = nabla.max_abs();
        row["second_bianchi"] = bianchi;
        row["symmetry_violation"] = sym.max_violation();
        rows.push_back(std::move(row));

        tx << "point " << point_str(p) << "\n";
        tx << "  scalar " << num(b.scalar) << "  |R| " << num(b.riemann.max_abs()) << "  |Ric| "
           << num(b.ricci.max_abs()) << "  |Ric0| " << num(b.traceless_ricci.max_abs());
        if (b.weyl) tx << "  |Weyl| " << num(b.weyl->max_abs());
        if (b.cotton) tx << "  |Cotton| " << num(b.cotton->max_abs());
        tx << "\n";
        tx << "  |nabla R| " << num(nabla.max_abs()) << "  bianchi " << sci(bianchi)
           << "  symmetry " << sci(sym.max_violation()) << "\n";
    }
    results["points"] = std::move(rows);
    return "info";
}

// -------------------------------------------------------------- classify

json quasi_json(const curved::QuasiFit& q) {
    json out;
    out["status"] = curved::quasi_status_name(q.status);
    out["H"] = q.H;
    out["N"] = q.N;
    out["eps"] = q.eps;
    out["V"] = q.V.empty() ? json(nullptr) : vec_json(q.V);
    out["residual"] = q.residual;
    out["lambda_v"] = q.lambda_v;
    out["lambda_perp"] = q.lambda_perp;
    return out;
}

std::string verb_classify(const Options& opt, const Source& src, json& results,
                          std::ostringstream& tx) {
    const curved::MetricChart& chart = src.chart;
    const std::vector<Vec> pts = select_points(opt, chart);
    curved::ClassifyOptions copt;
    if (opt.tol_set) {
        copt.tol_symbolic = opt.tol;
        copt.tol_fd = opt.tol;
    }
    copt.plane_samples = opt.samples;
    copt.seed = opt.seed;

    json rows = json::array();
    for (const Vec& p : pts) {
        const curved::ClassificationReport rep = curved::classify_point(chart, p, copt);
        json row;
        row["point"] = vec_json(p);
        row["label"] = rep.label;
        row["tol"] = rep.tol;
        row["r_norm"] = rep.r_norm;
        row["constant_curvature"] =
            json{{"pass", rep.constant_curvature}, {"c", rep.fit_c}, {"residual", rep.fit_c_residual}};
        json q = quasi_json(rep.quasi);
        q["pass"] = rep.quasi_constant;
        q["relative_residual"] = rep.quasi_residual;
        row["quasi_constant"] = std::move(q);
        row["conformally_flat"] =
            json{{"pass", rep.conformally_flat}, {"obstruction", rep.conformal_obstruction}};
        row["recurrence"] = json{
            {"mode", curved::recurrence_mode_name(rep.recurrence.mode)},
            {"alpha", rep.recurrence.alpha.empty() ? json(nullptr) : vec_json(rep.recurrence.alpha)},
            {"residual", rep.recurrence.residual},
            {"nabla_rel", rep.recurrence.nabla_rel}};
        rows.push_back(std::move(row));

        tx << "point " << point_str(p) << "  label " << rep.label << "\n";
        tx << "  constant curvature  " << (rep.constant_curvature ? "pass" : "fail") << "  c "
           << num(rep.fit_c) << "  residual " << sci(rep.fit_c_residual) << "\n";
        tx << "  quasi constant      " << (rep.quasi_constant ? "pass" : "fail") << "  status "
           << curved::quasi_status_name(rep.quasi.status) << "  H " << num(rep.quasi.H) << "  N "
           << num(rep.quasi.N) << "  residual " << sci(rep.quasi_residual) << "\n";
        tx << "  conformally flat    " << (rep.conformally_flat ? "pass" : "fail")
           << "  obstruction " << sci(rep.conformal_obstruction) << "\n";
        tx << "  recurrence          " << curved::recurrence_mode_name(rep.recurrence.mode)
           << "  residual " << sci(rep.recurrence.residual) << "\n";
    }
    results["points"] = std::move(rows);
    return "info";
}

// ---------------------------------------------------------------- planes

std::string verb_planes(const Options& opt, const Source& src, json& results,
                        std::ostringstream& tx) {
    const curved::MetricChart& chart = src.chart;
    const int n = chart.dim();
    const curved::Signature sig = chart.signature();
    const bool weak_ok = sig.indefinite();
    const bool strong_ok = sig.negative >= 2 && sig.positive >= 2;
    const double tol = opt.tol_or(opt.fd ? 1e-3 : 1e-6);
    const std::vector<Vec> pts = select_points(opt, chart);

    json rows = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec& p = pts[i];
        const curved::CurvatureBundle b = curved::curvature_bundle(chart, p);
        const curved::SymmetricBilinear& g = b.metric;
        json row;
        row["point"] = vec_json(p);

        // Census of random planes plus the sectional curvature range over
        // the nondegenerate ones.
        std::mt19937_64 rng(mix64(opt.seed, 1000 + i));
        int census[3] = {0, 0, 0};
        double kmin = 0.0, kmax = 0.0;
        bool have_k = false;
        for (int s = 0; s < opt.samples; ++s) {
            curved::TangentPlane pl;
            pl.point = p;
            pl.x.resize(n);
            pl.y.resize(n);
            for (int a = 0; a < n; ++a) pl.x[a] = symmetric_double(rng);
            for (int a = 0; a < n; ++a) pl.y[a] = symmetric_double(rng);
            try {
                const curved::PlaneClass pc = curved::classify_plane(g, pl);
                census[static_cast<int>(pc.tag)]++;
                if (pc.tag == curved::PlaneKind::Nondegenerate) {
                    const double k = curved::sectional_curvature(b.riemann, g, pl);
                    if (!have_k || k < kmin) kmin = k;
                    if (!have_k || k > kmax) kmax = k;
                    have_k = true;
                }
            } catch (const curved::Error&) {
                // dependent draw or borderline plane: not counted
            }
        }
        row["random_planes"] = json{{"nondegenerate", census[0]},
                                    {"weakly_degenerate", census[1]},
                                    {"strongly_degenerate", census[2]}};
        row["sectional_range"] = have_k ? json::array({kmin, kmax}) : json(nullptr);

        const double gscale = 1.0 + g.max_abs();
        for (int kindsel = 0; kindsel < 2; ++kindsel) {
            const bool is_weak = kindsel == 0;
            const char* key = is_weak ? "weak" : "strong";
            const bool available = is_weak ? weak_ok : strong_ok;
            if (!available) {
                row[key] = json{{"available", false}};
                continue;
            }
            const curved::PlaneKind kind = is_weak ? curved::PlaneKind::WeaklyDegenerate
                                                   : curved::PlaneKind::StronglyDegenerate;
            const auto planes =
                curved::sample_degenerate_planes(g, kind, opt.samples, mix64(opt.seed, 2000 + i), p);
            int confirmed = 0;
            double pi1max = 0.0;
            const curved::Tensor4 pi1 = curved::build_pi1(g);
            for (const curved::TangentPlane& pl : planes) {
                const curved::PlaneClass pc = curved::classify_plane(g, pl);
                if (pc.tag == kind) ++confirmed;
                double ex = 0.0, ey = 0.0;
                for (double c : pl.x) ex += c * c;
                for (double c : pl.y) ey += c * c;
                const double val = std::abs(pi1.apply(pl.x, pl.y, pl.y, pl.x)) /
                                   (gscale * gscale * std::max(ex * ey, 1e-30));
                pi1max = std::max(pi1max, val);
            }
            const curved::VanishingTest vt = curved::degenerate_vanishing_test(
                b.riemann, g, kind, opt.samples, tol, mix64(opt.seed, 3000 + i));
            json vj = json{{"pass", vt.pass}, {"max_normalized", vt.max_normalized}};
            if (!vt.pass) {
                vj["worst_x"] = vec_json(vt.worst.x);
                vj["worst_y"] = vec_json(vt.worst.y);
            }
            row[key] = json{{"available", true},
                            {"samples", static_cast<int>(planes.size())},
                            {"confirmed", confirmed},
                            {"pi1_max_normalized", pi1max},
                            {"vanishing", std::move(vj)}};
        }

        if (n >= 4) {
            const curved::QuadrupleTest qt = curved::orthonormal_quadruple_test(
                b.riemann, g, opt.samples, tol, mix64(opt.seed, 4000 + i));
            row["quadruple"] = json{{"available", true},
                                    {"pass", qt.pass},
                                    {"max_normalized", qt.max_normalized},
                                    {"frames", qt.frames}};
        } else {
            row["quadruple"] = json{{"available", false}};
        }
        rows.push_back(std::move(row));

        tx << "point " << point_str(p) << "\n";
        tx << "  random planes " << census[0] << " nondegenerate, " << census[1] << " weak, "
           << census[2] << " strong";
        if (have_k) tx << "; K in [" << num(kmin) << ", " << num(kmax) << "]";
        tx << "\n";
        for (const char* key : {"weak", "strong"}) {
            const json& sec = rows.back()[key];
            tx << "  " << key << (std::string(key) == "weak" ? "   " : " ");
            if (!sec["available"].get<bool>()) {
                tx << "not available in signature (" << sig.negative << "," << sig.positive
                   << ")\n";
            } else {
                tx << sec["samples"].get<int>() << " planes, pi1 max "
                   << sci(sec["pi1_max_normalized"].get<double>()) << ", R vanishing "
                   << (sec["vanishing"]["pass"].get<bool>() ? "pass" : "fail") << " (max "
                   << sci(sec["vanishing"]["max_normalized"].get<double>()) << ")\n";
            }
        }
        const json& quad = rows.back()["quadruple"];
        if (quad["available"].get<bool>())
            tx << "  quadruple " << (quad["pass"].get<bool>() ? "pass" : "fail") << " (max "
               << sci(quad["max_normalized"].get<double>()) << ")\n";
    }
    results["points"] = std::move(rows);
    return "info";
}

// ------------------------------------------------------------- conformal

json pullback_json(const curved::PullbackReport& pb) {
    json out;
    out["class"] = curved::map_class_name(pb.map_class);
    out["lambda"] = pb.lambda;
    out["sign_flip"] = pb.sign_flip;
    out["gradient_class"] = pb.map_class == curved::MapClass::Conformal
                                ? json(curved::gradient_class_name(pb.gradient_class))
                                : json(nullptr);
    out["max_residual"] = pb.max_residual;
    out["sigma_spread"] = pb.sigma_spread;
    out["cone_preserved"] = pb.cone_preserved;
    out["cone_residual"] = pb.cone_residual;
    out["cone_samples"] = pb.cone_samples;
    return out;
}

const curved::ScalarField& require_sigma(const Source& src) {
    if (!src.sigma)
        throw UsageError("this verb needs --sigma <expr> (or a conformal-pair manifold)");
    return *src.sigma;
}

std::string verb_conformal(const Options& opt, const Source& src, json& results,
                           std::ostringstream& tx) {
    const curved::MetricChart& chart = src.chart;
    const curved::ScalarField& sigma = require_sigma(src);
    const curved::Signature sig = chart.signature();

    const curved::ConformalChange cc =
        curved::conformal_change(chart, sigma, std::max(3, opt.points), opt.seed);
    const double vtol = opt.tol_or(1e-7);
    const bool verify_pass = cc.verify_residual < vtol;
    results["verification"] = json{{"residual", cc.verify_residual},
                                   {"points", cc.verify_points},
                                   {"tol", vtol},
                                   {"pass", verify_pass}};

    const curved::PullbackReport pb =
        curved::pullback_classify(curved::Diffeo::identity(chart.dim()), chart, cc.bar,
                                  opt.samples, opt.tol_or(1e-6), mix64(opt.seed, 5));
    results["pullback"] = pullback_json(pb);

    const double ctol = opt.tol_or(1e-6);
    for (int kindsel = 0; kindsel < 2; ++kindsel) {
        const bool is_weak = kindsel == 0;
        const char* key = is_weak ? "weak_condition" : "strong_condition";
        const bool available = is_weak ? sig.indefinite() : (sig.negative >= 2 && sig.positive >= 2);
        if (!available) {
            results[key] = json{{"available", false}};
            continue;
        }
        const curved::DegenerateConditionResult r = curved::degenerate_condition_check(
            chart, sigma,
            is_weak ? curved::PlaneKind::WeaklyDegenerate : curved::PlaneKind::StronglyDegenerate,
            opt.points, opt.samples, ctol, opt.seed);
        results[key] = json{{"available", true},
                            {"residual", r.residual},
                            {"pass", r.pass},
                            {"tol", r.tol},
                            {"points", r.points},
                            {"planes_per_point", r.planes_per_point}};
    }

    // The tensor relation is asserted under the weak-plane precondition, so
    // it needs an indefinite metric.
    std::optional<curved::ConformalRelationResult> rel;
    if (sig.indefinite()) {
        rel = curved::verify_conformal_relation(chart, sigma, opt.points, ctol, opt.seed);
        results["relation"] = json{{"available", true},
                                   {"precondition_ok", rel->precondition_ok},
                                   {"precondition_residual", rel->precondition_residual},
                                   {"residual", rel->residual},
                                   {"pass", rel->pass}};
    } else {
        results["relation"] = json{{"available", false}};
    }

    const std::vector<Vec> pts = select_points(opt, chart);
    json rows = json::array();
    for (const Vec& p : pts) {
        const curved::CurvatureBundle b = curved::curvature_bundle(chart, p);
        const curved::SymmetricBilinear q = curved::conformal_Q(b, sigma);
        const Vec grad = sigma.gradient(p);
        const double grad_sq = b.inverse_metric.apply(grad, grad);
        json row;
        row["point"] = vec_json(p);
        row["sigma"] = sigma.value(p);
        row["grad_norm_sq"] = grad_sq;
        row["q_max"] = q.max_abs();
        rows.push_back(std::move(row));
    }
    results["points"] = std::move(rows);

    tx << "verification  residual " << sci(cc.verify_residual) << "  "
       << (verify_pass ? "pass" : "fail") << " (tol " << sci(vtol) << ", " << cc.verify_points
       << " points)\n";
    tx << "pullback      " << curved::map_class_name(pb.map_class);
    if (pb.map_class == curved::MapClass::Conformal)
        tx << ", gradient " << curved::gradient_class_name(pb.gradient_class);
    if (pb.map_class == curved::MapClass::Homothety) tx << ", lambda " << num(pb.lambda);
    tx << ", cone " << (pb.cone_preserved ? "preserved" : "broken") << "\n";
    for (const char* key : {"weak_condition", "strong_condition"}) {
        const json& sec = results[key];
        tx << (std::string(key) == "weak_condition" ? "weak planes  " : "strong planes");
        if (!sec["available"].get<bool>())
            tx << "  not available in signature (" << sig.negative << "," << sig.positive << ")\n";
        else
            tx << "  residual " << sci(sec["residual"].get<double>()) << "  "
               << (sec["pass"].get<bool>() ? "pass" : "fail") << "\n";
    }
    tx << "relation      ";
    if (!rel)
        tx << "not available in signature (" << sig.negative << "," << sig.positive << ")\n";
    else if (!rel->precondition_ok)
        tx << "precondition failed (weak residual " << sci(rel->precondition_residual) << ")\n";
    else
        tx << "residual " << sci(rel->residual) << "  " << (rel->pass ? "pass" : "fail") << "\n";
    for (const json& row : results["points"])
        tx << "point " << point_str(row["point"].get<Vec>()) << "  sigma "
           << num(row["sigma"].get<double>()) << "  |grad sigma|^2 "
           << num(row["grad_norm_sq"].get<double>()) << "  |Q| "
           << num(row["q_max"].get<double>()) << "\n";

    const bool pass = verify_pass && pb.map_class != curved::MapClass::General;
    return pass ? "pass" : "fail";
}

// ----------------------------------------------------------------- limit

std::string verb_limit(const Options& opt, const Source& src, json& results,
                       std::ostringstream& tx) {
    const curved::MetricChart& chart = src.chart;
    const curved::Signature sig = chart.signature();
    curved::PlaneKind kind;
    if (opt.kind == "weak") {
        if (!sig.indefinite())
            throw UsageError("weakly degenerate planes need an indefinite metric");
        kind = curved::PlaneKind::WeaklyDegenerate;
    } else if (opt.kind == "strong") {
        if (sig.negative < 2 || sig.positive < 2)
            throw UsageError("strongly degenerate planes need signature s >= 2, n-s >= 2");
        kind = curved::PlaneKind::StronglyDegenerate;
    } else {
        throw UsageError("--kind must be weak or strong");
    }

    // Conformal pairs ship their rescaled partner; anything else needs an
    // explicit sigma to rebuild it.
    const curved::MetricChart target =
        src.partner ? *src.partner
                    : curved::conformal_change(chart, require_sigma(src), 0, opt.seed).bar;
    const curved::Diffeo identity = curved::Diffeo::identity(chart.dim());
    const int per_point = opt.samples_set ? opt.samples : 4;
    const double tol = opt.tol_or(1e-5);
    const std::vector<Vec> pts = select_points(opt, chart);

    int usable = 0, skipped = 0;
    double maxdev = 0.0;
    json rows = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec& p = pts[i];
        const curved::SymmetricBilinear g = chart.metric_at(p);
        const auto planes =
            curved::sample_degenerate_planes(g, kind, per_point, mix64(opt.seed, 6000 + i), p);
        json plist = json::array();
        for (std::size_t j = 0; j < planes.size(); ++j) {
            const curved::TangentPlane& pl = planes[j];
            json r;
            r["x"] = vec_json(pl.x);
            r["y"] = vec_json(pl.y);
            try {
                const curved::LimitEstimate est = curved::limit_ratio_estimate(
                    chart, target, identity, pl, mix64(opt.seed, 7000 + i * 64 + j), opt.steps);
                if (std::isfinite(est.value)) {
                    const double dev = std::abs(est.value - 1.0);
                    maxdev = std::max(maxdev, dev);
                    ++usable;
                    r["status"] = "ok";
                    r["value"] = est.value;
                    r["error"] = est.error;
                    r["deviation"] = dev;
                    r["resamples"] = est.resamples;
                } else {
                    ++skipped;
                    r["status"] = "indeterminate";
                    r["value"] = nullptr;
                }
            } catch (const curved::Error&) {
                ++skipped;
                r["status"] = "no usable family";
                r["value"] = nullptr;
            }
            plist.push_back(std::move(r));
        }
        json row;
        row["point"] = vec_json(p);
        row["planes"] = std::move(plist);
        rows.push_back(std::move(row));

        tx << "point " << point_str(p) << "\n";
        for (const json& r : rows.back()["planes"]) {
            tx << "  ";
            if (r["status"] == "ok")
                tx << "ratio " << num(r["value"].get<double>()) << "  deviation "
                   << sci(r["deviation"].get<double>()) << "  error "
                   << sci(r["error"].get<double>()) << "\n";
            else
                tx << r["status"].get<std::string>() << "\n";
        }
    }
    results["kind"] = opt.kind;
    results["expected"] = 1.0;
    results["usable"] = usable;
    results["skipped"] = skipped;
    results["max_deviation"] = usable ? json(maxdev) : json(nullptr);
    results["tol"] = tol;
    results["points"] = std::move(rows);

    if (usable == 0) {
        tx << "no usable plane families (curvature degenerate along every ladder)\n";
        return "info";
    }
    tx << "max deviation from 1: " << sci(maxdev) << " over " << usable << " planes (tol "
       << sci(tol) << ")\n";
    return maxdev <= tol ? "pass" : "fail";
}

// ----------------------------------------------------------------- lemma

std::string verb_lemma(const Options& opt, const Source& src, json& results,
                       std::ostringstream& tx) {
    std::string stmt = opt.argument;
    std::transform(stmt.begin(), stmt.end(), stmt.begin(), ::toupper);
    if (stmt != "A" && stmt != "B" && stmt != "C")
        throw UsageError("lemma statement must be A, B or C");

    const curved::MetricChart& chart = src.chart;
    const int n = chart.dim();
    const curved::Signature sig = chart.signature();
    const double tol = opt.tol_or(opt.fd ? 1e-3 : 1e-6);

    if (stmt == "B" && n < 4) throw UsageError("lemma B needs dimension >= 4");
    if (stmt == "C" && (sig.negative < 2 || sig.positive < 2))
        throw UsageError("lemma C needs signature s >= 2, n-s >= 2");

    const char* statement =
        stmt == "A"
            ? "a curvature-like tensor vanishes on every weakly degenerate plane iff it is a "
              "constant multiple of pi1"
            : stmt == "B" ? "every orthonormal quadruple annihilates R iff the Weyl tensor vanishes"
                          : "R vanishes on every strongly degenerate plane iff the Weyl tensor "
                            "vanishes";
    results["statement"] = statement;
    tx << "statement: " << statement << "\n";

    const bool weak_available = sig.indefinite();
    const std::vector<Vec> pts = select_points(opt, chart);
    bool all_consistent = true;
    json rows = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec& p = pts[i];
        const curved::CurvatureBundle b = curved::curvature_bundle(chart, p);
        const double rnorm = std::max(b.riemann.max_abs(), flat_floor(b.metric));
        json row;
        row["point"] = vec_json(p);
        bool consistent = true;

        if (stmt == "A") {
            const curved::ConstantFit fit = curved::fit_c_pi1(b.riemann, b.metric);
            const double rel = fit.residual / rnorm;
            const bool model = rel < tol;
            row["fit"] = json{{"c", fit.c}, {"residual", fit.residual}, {"relative", rel}};
            row["model_holds"] = model;
            if (weak_available) {
                const curved::VanishingTest vt = curved::degenerate_vanishing_test(
                    b.riemann, b.metric, curved::PlaneKind::WeaklyDegenerate, opt.samples, tol,
                    mix64(opt.seed, 8000 + i));
                consistent = vt.pass == model;
                row["vanishing"] = json{{"available", true},
                                        {"pass", vt.pass},
                                        {"max_normalized", vt.max_normalized}};
                tx << "point " << point_str(p) << "  vanishing "
                   << (vt.pass ? "pass" : "fail") << " (max " << sci(vt.max_normalized)
                   << ")  c " << num(fit.c) << "  fit residual " << sci(rel) << "  "
                   << (consistent ? "consistent" : "INCONSISTENT") << "\n";
            } else {
                row["vanishing"] = json{{"available", false}};
                tx << "point " << point_str(p)
                   << "  no weakly degenerate planes in this signature; hypothesis vacuous, c "
                   << num(fit.c) << "\n";
            }
        } else {
            const double weyl_rel = b.weyl->max_abs() / rnorm;
            const bool conf_flat = weyl_rel < tol;
            row["weyl_relative"] = weyl_rel;
            row["conformally_flat"] = conf_flat;
            if (stmt == "B") {
                const curved::QuadrupleTest qt = curved::orthonormal_quadruple_test(
                    b.riemann, b.metric, opt.samples, tol, mix64(opt.seed, 8000 + i));
                consistent = qt.pass == conf_flat;
                row["quadruple"] = json{{"pass", qt.pass}, {"max_normalized", qt.max_normalized}};
                tx << "point " << point_str(p) << "  quadruple " << (qt.pass ? "pass" : "fail")
                   << " (max " << sci(qt.max_normalized) << ")  weyl " << sci(weyl_rel) << "  "
                   << (consistent ? "consistent" : "INCONSISTENT") << "\n";
            } else {
                const curved::VanishingTest vt = curved::degenerate_vanishing_test(
                    b.riemann, b.metric, curved::PlaneKind::StronglyDegenerate, opt.samples, tol,
                    mix64(opt.seed, 8000 + i));
                consistent = vt.pass == conf_flat;
                row["vanishing"] = json{{"pass", vt.pass}, {"max_normalized", vt.max_normalized}};
                tx << "point " << point_str(p) << "  vanishing " << (vt.pass ? "pass" : "fail")
                   << " (max " << sci(vt.max_normalized) << ")  weyl " << sci(weyl_rel) << "  "
                   << (consistent ? "consistent" : "INCONSISTENT") << "\n";
            }
        }
        row["consistent"] = consistent;
        all_consistent = all_consistent && consistent;
        rows.push_back(std::move(row));
    }
    results["points"] = std::move(rows);
    results["consistent"] = all_consistent;
    return all_consistent ? "pass" : "fail";
}

// --------------------------------------------------------------- theorem

std::string verb_theorem(const Options& opt, const Source& src, json& results,
                         std::ostringstream& tx) {
    const std::string& which = opt.argument;
    if (which != "1" && which != "2" && which != "3")
        throw UsageError("theorem number must be 1, 2 or 3");

    const curved::MetricChart& chart = src.chart;
    const curved::Signature sig = chart.signature();
    const double tol = opt.tol_or(opt.fd ? 1e-3 : 1e-6);

    auto bar_chart = [&]() -> curved::MetricChart {
        if (src.partner && opt.sigma_text.empty()) return *src.partner;
        return curved::conformal_change(chart, require_sigma(src), 0, opt.seed).bar;
    };

    if (which == "1") {
        results["statement"] =
            "the rescaled pair is recognized as conformal-family (isometry, homothety or "
            "conformal) and maps the isotropic cone into itself";
        if (!src.sigma && !src.partner) require_sigma(src);
        const curved::MetricChart bar = bar_chart();
        const curved::PullbackReport pb = curved::pullback_classify(
            curved::Diffeo::identity(chart.dim()), chart, bar, opt.samples, tol,
            mix64(opt.seed, 5));
        results["pullback"] = pullback_json(pb);
        const bool conformal_family = pb.map_class != curved::MapClass::General;
        const bool pass = conformal_family && pb.cone_preserved;
        results["conformal_family"] = conformal_family;
        tx << "pullback " << curved::map_class_name(pb.map_class) << "  residual "
           << sci(pb.max_residual) << "\n";
        tx << "isotropic cone " << (pb.cone_preserved ? "preserved" : "broken") << " (residual "
           << sci(pb.cone_residual) << ", " << pb.cone_samples << " samples)\n";
        return pass ? "pass" : "fail";
    }

    if (which == "2") {
        results["statement"] =
            "a conformal change preserving curvature on weakly degenerate planes satisfies the "
            "pi1-correction identity with the scalar-curvature difference";
        const curved::ScalarField& sigma = require_sigma(src);
        if (!sig.indefinite())
            throw UsageError("weakly degenerate planes need an indefinite metric");
        const curved::DegenerateConditionResult weak = curved::degenerate_condition_check(
            chart, sigma, curved::PlaneKind::WeaklyDegenerate, opt.points, opt.samples, tol,
            opt.seed);
        results["weak_condition"] = json{{"residual", weak.residual},
                                         {"pass", weak.pass},
                                         {"tol", weak.tol},
                                         {"points", weak.points},
                                         {"planes_per_point", weak.planes_per_point}};
        tx << "weak planes  residual " << sci(weak.residual) << "  "
           << (weak.pass ? "pass" : "fail") << " (" << weak.points << " points x "
           << weak.planes_per_point << " planes)\n";

        bool pass = weak.pass;
        if (weak.pass) {
            const curved::ConformalRelationResult rel =
                curved::verify_conformal_relation(chart, sigma, opt.points, tol, opt.seed);
            results["relation"] = json{{"precondition_ok", rel.precondition_ok},
                                       {"residual", rel.residual},
                                       {"pass", rel.pass}};
            tx << "relation     residual " << sci(rel.residual) << "  "
               << (rel.pass ? "pass" : "fail") << "\n";
            pass = pass && rel.pass;
        } else {
            results["relation"] = json{{"skipped", true}};
            tx << "relation     skipped (weak condition fails, identity not asserted)\n";
        }

        const curved::PullbackReport pb = curved::pullback_classify(
            curved::Diffeo::identity(chart.dim()), chart, bar_chart(), opt.samples, tol,
            mix64(opt.seed, 5));
        results["pullback"] = json{{"class", curved::map_class_name(pb.map_class)},
                                   {"gradient_class",
                                    pb.map_class == curved::MapClass::Conformal
                                        ? json(curved::gradient_class_name(pb.gradient_class))
                                        : json(nullptr)}};
        tx << "pullback     " << curved::map_class_name(pb.map_class);
        if (pb.map_class == curved::MapClass::Conformal)
            tx << ", gradient " << curved::gradient_class_name(pb.gradient_class);
        tx << "\n";
        return pass ? "pass" : "fail";
    }

    results["statement"] =
        "with strongly degenerate planes present and curvature visible on them, only sigma = 0 "
        "preserves the strong-plane curvature values";
    const curved::ScalarField& sigma = require_sigma(src);
    if (sig.negative < 2 || sig.positive < 2)
        throw UsageError("strongly degenerate planes need signature s >= 2, n-s >= 2");
    const curved::DegenerateConditionResult strong = curved::degenerate_condition_check(
        chart, sigma, curved::PlaneKind::StronglyDegenerate, opt.points, opt.samples, tol,
        opt.seed);
    results["strong_condition"] = json{{"residual", strong.residual},
                                       {"pass", strong.pass},
                                       {"tol", strong.tol},
                                       {"points", strong.points},
                                       {"planes_per_point", strong.planes_per_point}};

    // Context: rigidity needs curvature the strong planes can see; a chart
    // with Weyl = 0 everywhere sampled passes for any sigma.
    const std::vector<Vec> pts = select_points(opt, chart);
    double min_weyl = std::numeric_limits<double>::infinity();
    for (const Vec& p : pts) {
        const curved::CurvatureBundle b = curved::curvature_bundle(chart, p);
        const double rel = b.weyl->max_abs() / std::max(b.riemann.max_abs(), flat_floor(b.metric));
        min_weyl = std::min(min_weyl, rel);
    }
    results["min_relative_weyl"] = min_weyl;

    tx << "strong planes  residual " << sci(strong.residual) << "  "
       << (strong.pass ? "pass" : "fail") << " (" << strong.points << " points x "
       << strong.planes_per_point << " planes)\n";
    tx << "min relative Weyl over sample: " << sci(min_weyl)
       << (min_weyl > tol ? " (curvature visible: only sigma = 0 can pass)" : "") << "\n";
    return strong.pass ? "pass" : "fail";
}

// ---------------------------------------------------------------- config

const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys = {"seed", "tol",    "points", "samples",
                                               "steps", "format", "kind",  "fd"};
    return keys;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!config_keys().count(key))
            throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                             "'");
        out[key] = value;
    }
    return out;
}

bool parse_flag(const std::string& value, const std::string& what) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw UsageError(what + ": not a boolean: '" + value + "'");
}

// Precedence: command-line flags, then config file, then the environment
// seed, then built-in defaults.
void apply_config_and_env(CLI::App* sub, const std::map<std::string, std::string>& cfg,
                          Options& opt) {
    auto unset = [&](const char* flag) {
        return sub->get_option_no_throw(flag) != nullptr && sub->count(flag) == 0;
    };
    if (cfg.count("seed") && unset("--seed")) opt.seed = parse_seed(cfg.at("seed"), "config seed");
    if (cfg.count("tol") && unset("--tol")) {
        opt.tol = parse_real(cfg.at("tol"), "config tol");
        opt.tol_set = true;
    }
    if (cfg.count("points") && unset("--points"))
        opt.points = static_cast<int>(parse_real(cfg.at("points"), "config points"));
    if (cfg.count("samples") && unset("--samples")) {
        opt.samples = static_cast<int>(parse_real(cfg.at("samples"), "config samples"));
        opt.samples_set = true;
    }
    if (cfg.count("steps") && unset("--steps"))
        opt.steps = static_cast<int>(parse_real(cfg.at("steps"), "config steps"));
    if (cfg.count("format") && unset("--format")) opt.format = cfg.at("format");
    if (cfg.count("kind") && unset("--kind")) opt.kind = cfg.at("kind");
    if (cfg.count("fd") && unset("--fd")) opt.fd = parse_flag(cfg.at("fd"), "config fd");

    if (sub->get_option_no_throw("--seed") != nullptr && sub->count("--seed") == 0 &&
        !cfg.count("seed")) {
        if (const char* env = std::getenv("CURVEDCHECK_SEED"))
            opt.seed = parse_seed(env, "CURVEDCHECK_SEED");
    }
}

// ------------------------------------------------------------------ main

int run(int argc, char** argv) {
    Options opt;
    std::string config_path;

    CLI::App app{"curvature diagnostics for pseudo-Riemannian metric charts", "curvedcheck"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "curvedcheck 1.0");
    // long-form help only: -h is taken by the wave profile override --h
    app.set_help_flag("--help", "print help and exit");

    const std::vector<std::pair<std::string, std::string>> verbs = {
        {"list", "built-in manifold catalog"},
        {"curvature", "pointwise curvature summaries"},
        {"classify", "pointwise model fits"},
        {"planes", "tangent-plane taxonomy and diagnostics"},
        {"conformal", "conformal change pipeline for e^{2 sigma} g"},
        {"limit", "curvature ratio limits on collapsing plane families"},
        {"lemma", "equivalence suite A|B|C"},
        {"theorem", "property suite 1|2|3"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, desc] : verbs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "print help and exit");
        subs[name] = sub;
        if (name == "lemma")
            sub->add_option("statement", opt.argument, "A, B or C")->required();
        if (name == "theorem")
            sub->add_option("number", opt.argument, "1, 2 or 3")->required();
        if (name == "list") {
            sub->add_option("--manifest", opt.manifest_path, "manifest file to load");
        } else {
            sub->add_option("--manifold", opt.manifold, "registry manifold name");
            sub->add_option("--inline", opt.inline_dsl, "inline metric DSL text");
            sub->add_option("--c", opt.c_override, "curvature parameter override");
            sub->add_option("--s", opt.s_override, "signature parameter override");
            sub->add_option("--n", opt.n_override, "dimension parameter override");
            sub->add_option("--f", opt.f_override, "profile f(t) override");
            sub->add_option("--h", opt.h_override, "profile h(u) override");
            sub->add_option("--sigma", opt.sigma_text, "conformal factor exponent sigma(x)");
            sub->add_option("--at", opt.at, "evaluation point x0,x1,... (repeatable)")
                ->type_size(1);
            sub->add_option("--domain", opt.domain_text, "box lo:hi[,lo:hi,...]");
            sub->add_option("--points", opt.points, "sampled points when --at is absent");
            sub->add_option("--samples", opt.samples, "planes/frames per point");
            sub->add_option("--steps", opt.steps, "halvings in the limit ladder");
            sub->add_option("--tol", opt.tol, "verdict tolerance override");
            sub->add_flag("--fd", opt.fd, "finite-difference derivative path");
            if (name == "limit")
                sub->add_option("--kind", opt.kind, "plane kind: weak or strong");
        }
        sub->add_option("--seed", opt.seed, "sampling seed (default: CURVEDCHECK_SEED or 2026)");
        sub->add_option("--format", opt.format, "output format: text or json");
        sub->add_option("--config", config_path, "config file with key=value lines");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "curvedcheck: error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    opt.verb = sub->get_name();
    opt.tol_set = sub->get_option_no_throw("--tol") && sub->count("--tol") > 0;
    opt.samples_set = sub->get_option_no_throw("--samples") && sub->count("--samples") > 0;

    std::map<std::string, std::string> cfg;
    if (!config_path.empty()) cfg = read_config(config_path);
    apply_config_and_env(sub, cfg, opt);

    if (opt.format != "text" && opt.format != "json")
        throw UsageError("--format must be text or json");
    if (opt.points < 1) throw UsageError("--points must be >= 1");
    if (opt.samples < 1) throw UsageError("--samples must be >= 1");
    if (opt.steps < 3 || opt.steps > 24) throw UsageError("--steps must be in [3, 24]");

    // The conformal-change pipeline differentiates the rescaled components
    // exactly; verbs that must build that chart have no finite-difference
    // variant.
    static const std::set<std::string> fd_verbs = {"curvature", "classify", "planes", "lemma"};
    const bool fd_conflict =
        opt.fd && !fd_verbs.count(opt.verb) && !(opt.verb == "theorem" && opt.argument == "3");
    if (fd_conflict)
        throw UsageError("--fd is not available for this verb: the rescaled chart needs exact "
                         "component derivatives");

    json cmd;
    cmd["verb"] = opt.verb;
    cmd["argument"] = opt.argument.empty() ? json(nullptr) : json(opt.argument);
    cmd["seed"] = opt.seed;
    cmd["tolerance"] = opt.tol_set ? json(opt.tol) : json(nullptr);
    cmd["points"] = opt.points;
    cmd["samples"] = opt.samples_set ? json(opt.samples) : json(nullptr);
    cmd["steps"] = opt.steps;
    cmd["format"] = opt.format;

    std::ostringstream tx;
    json metric;
    json results;
    std::string verdict;
    std::string header_source;
    std::string header_metric;

    if (opt.verb == "list") {
        cmd["source"] = opt.manifest_path.empty() ? json("builtin") : json(opt.manifest_path);
        header_source = opt.manifest_path.empty() ? "builtin" : opt.manifest_path;
        verdict = verb_list(opt, results, tx);
    } else {
        Source src = load_source(opt);
        if (opt.fd) src.chart = curved::MetricChart::finite_difference_view(src.chart);
        cmd["source"] = src.echo;
        cmd["sigma"] = src.sigma ? json(src.sigma_echo) : json(nullptr);
        const curved::Signature sig = src.chart.signature();
        metric["dim"] = src.chart.dim();
        metric["signature"] = json{{"negative", sig.negative}, {"positive", sig.positive}};
        json dom = json::array();
        for (const auto& ax : src.chart.domain().axes)
            dom.push_back(json::array({ax[0], ax[1]}));
        metric["domain"] = std::move(dom);
        metric["derivative_path"] = curved::derivative_path_name(src.chart.path());

        header_source = src.label;
        header_metric = "  dim=" + std::to_string(src.chart.dim()) + "  signature=(" +
                        std::to_string(sig.negative) + "," + std::to_string(sig.positive) +
                        ")  path=" + std::string(curved::derivative_path_name(src.chart.path()));

        if (opt.verb == "curvature")
            verdict = verb_curvature(opt, src, results, tx);
        else if (opt.verb == "classify")
            verdict = verb_classify(opt, src, results, tx);
        else if (opt.verb == "planes")
            verdict = verb_planes(opt, src, results, tx);
        else if (opt.verb == "conformal")
            verdict = verb_conformal(opt, src, results, tx);
        else if (opt.verb == "limit")
            verdict = verb_limit(opt, src, results, tx);
        else if (opt.verb == "lemma")
            verdict = verb_lemma(opt, src, results, tx);
        else
            verdict = verb_theorem(opt, src, results, tx);
    }

    json j;
    j["schema"] = "report_v1";
    j["command"] = std::move(cmd);
    if (!metric.is_null()) j["metric"] = std::move(metric);
    j["results"] = std::move(results);
    j["verdict"] = verdict;

    if (opt.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "curvedcheck " << opt.verb;
        if (!opt.argument.empty()) std::cout << " " << opt.argument;
        std::cout << "  source=" << header_source << header_metric << "  seed=" << opt.seed
                  << "\n";
        std::cout << tx.str();
        std::cout << "verdict: " << verdict << "\n";
    }
    return verdict == "fail" ? kExitFail : 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "curvedcheck: error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const curved::ParseError& e) {
        std::cerr << "curvedcheck: parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "curvedcheck: error: " << e.what() << "\n";
        return kExitUsage;
    }
}
