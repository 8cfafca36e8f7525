// Part of curvedcheck. BSD 3-Clause License.
//
// Built-in example manifolds: flat and constant-curvature models, the
// product and rotational-hypersurface examples, plane-fronted waves, the
// matched conformal wave pair, and a frozen generic split-signature
// metric.  All charts are symbolic so every module downstream gets exact
// derivatives.

#include "curved/registry.hpp"

#include "curved/dsl.hpp"
#include "curved/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace curved {

namespace {

// The published component text of generic22.  Two curved definite blocks
// whose curvatures add on strongly degenerate planes, glued by small trig
// off-diagonal terms so no product or symmetry structure survives.
const char* const kGeneric22Dsl =
    "dim=4;\n"
    "g[0][0]=-exp((x0^2+x0*x1/2)/4);\n"
    "g[1][1]=-exp((x0^2+x0*x1/2)/4);\n"
    "g[2][2]=exp(-(x2^2+x2*x3/3)/4);\n"
    "g[3][3]=exp(-(x2^2+x2*x3/3)/4);\n"
    "g[0][2]=0.1*sin(x1+x3);\n"
    "g[1][3]=0.1*cos(x0-x2);\n";

const char* const kPairProfile = "1/(1-exp(-2*x0))";
const char* const kPairSigma = "-x0";

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Rewrites the single-variable profile expression from x0 to x<index>.
std::string replace_var0(const std::string& text, int index) {
    const std::string to = "x" + std::to_string(index);
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == 'x' && i + 1 < text.size() && text[i + 1] == '0') {
            out += to;
            i += 2;
        } else {
            out += text[i];
            ++i;
        }
    }
    return out;
}

void require_dim_range(int n, const char* kind) {
    if (n < kMinDim || n > kMaxDim)
        throw std::invalid_argument(std::string(kind) + ": dimension n must be in [" +
                                    std::to_string(kMinDim) + ", " + std::to_string(kMaxDim) +
                                    "], got " + std::to_string(n));
}

void require_signature_range(int s, int limit, const char* kind) {
    if (s < 0 || s > limit)
        throw std::invalid_argument(std::string(kind) + ": signature count s must be in [0, " +
                                    std::to_string(limit) + "], got " + std::to_string(s));
}

void check_profile(const std::string& text, const char* kind, const char* key) {
    if (text.empty())
        throw std::invalid_argument(std::string(kind) + ": missing profile " + key);
    const ExprPtr e = parse_expression(text, 1); // throws on syntax / other variables
    (void)e;
}

double real_param(const ManifoldSpec& spec, const std::string& key) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw std::invalid_argument("manifold " + spec.kind + ": missing parameter " + key);
    return it->second;
}

int int_param(const ManifoldSpec& spec, const std::string& key) {
    const double v = real_param(spec, key);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        throw std::invalid_argument("manifold " + spec.kind + ": parameter " + key +
                                    " must be an integer, got " + fmt(v));
    return static_cast<int>(r);
}

std::string profile_param(const ManifoldSpec& spec, const std::string& key) {
    const auto it = spec.profiles.find(key);
    if (it == spec.profiles.end())
        throw std::invalid_argument("manifold " + spec.kind + ": missing profile " + key);
    return it->second;
}

Box domain_or(const ManifoldSpec& spec, Box fallback) {
    if (spec.domain.axes.empty()) return fallback;
    if (spec.domain.dim() != fallback.dim())
        throw std::invalid_argument("manifold " + spec.kind + ": domain has " +
                                    std::to_string(spec.domain.dim()) + " axes, expected " +
                                    std::to_string(fallback.dim()));
    return spec.domain;
}

// Signed coordinate square sum -x0^2 - .. + .. over `count` coordinates,
// the first `s` negative.
ExprPtr signed_square_sum(int s, int count) {
    ExprPtr q;
    for (int i = 0; i < count; ++i) {
        ExprPtr t = ex::x(i) * ex::x(i);
        if (i < s) t = -t;
        q = q ? q + t : t;
    }
    return q;
}

// Constant-curvature conformal factor 1/(1 + c q/4)^2 over the first
// `count` coordinates with signature s.
ExprPtr conformal_model_factor(double c, int s, int count) {
    const ExprPtr den = ex::c(1.0) + ex::c(c / 4.0) * signed_square_sum(s, count);
    return ex::pow(den, -2);
}

MetricGrid empty_grid(int n) {
    MetricGrid grid;
    grid.dim = n;
    grid.components.resize(static_cast<std::size_t>(n) * n);
    return grid;
}

MetricChart build_constant_curvature(const ManifoldSpec& spec, bool flat) {
    const int n = int_param(spec, "n");
    const int s = int_param(spec, "s");
    require_dim_range(n, spec.kind.c_str());
    require_signature_range(s, n, spec.kind.c_str());
    const double c = flat ? 0.0 : real_param(spec, "c");
    MetricGrid grid = empty_grid(n);
    const ExprPtr conf = flat ? ex::c(1.0) : conformal_model_factor(c, s, n);
    for (int i = 0; i < n; ++i) grid.at(i, i) = i < s ? -conf : conf;
    return MetricChart(std::move(grid), domain_or(spec, Box::cube(n, -0.75, 0.75)));
}

MetricChart build_product_example1(const ManifoldSpec& spec) {
    const int n = int_param(spec, "n");
    const int s = int_param(spec, "s");
    require_dim_range(n, spec.kind.c_str());
    require_signature_range(s, n - 1, spec.kind.c_str());
    const double c = real_param(spec, "c");
    MetricGrid grid = empty_grid(n);
    const ExprPtr conf = conformal_model_factor(c, s, n - 1);
    for (int i = 0; i + 1 < n; ++i) grid.at(i, i) = i < s ? -conf : conf;
    grid.at(n - 1, n - 1) = ex::c(1.0);
    return MetricChart(std::move(grid), domain_or(spec, Box::cube(n, -0.75, 0.75)));
}

MetricChart build_example2(const ManifoldSpec& spec) {
    const int n = int_param(spec, "n");
    const int s = int_param(spec, "s");
    require_dim_range(n, spec.kind.c_str());
    require_signature_range(s, n - 1, spec.kind.c_str());
    const std::string f_text = profile_param(spec, "f");
    check_profile(f_text, spec.kind.c_str(), "f");

    // Chart coordinates x0..x_{n-1} are the surface parameters; the last
    // one is the generator variable.  Ambient flat space has n+1
    // coordinates, the first s carrying the minus sign.
    const ExprPtr f = parse_expression(replace_var0(f_text, n - 1), n);
    const ExprPtr yn = ex::x(n - 1);
    const ExprPtr delta = ex::c(1.0) + signed_square_sum(s, n - 1);

    std::vector<ExprPtr> X(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i + 1 < n; ++i) X[i] = ex::c(2.0) * ex::x(i) * yn / delta;
    X[n - 1] = yn * (delta - ex::c(2.0)) / delta;
    X[n] = f;

    std::vector<std::vector<ExprPtr>> dX(X.size(), std::vector<ExprPtr>(n));
    for (std::size_t I = 0; I < X.size(); ++I)
        for (int a = 0; a < n; ++a) dX[I][a] = X[I]->diff(a);

    MetricGrid grid = empty_grid(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            ExprPtr sum;
            for (std::size_t I = 0; I < X.size(); ++I) {
                ExprPtr term = dX[I][a] * dX[I][b];
                if (static_cast<int>(I) < s) term = -term;
                sum = sum ? sum + term : term;
            }
            grid.at(a, b) = sum;
            grid.at(b, a) = sum;
        }

    Box box = domain_or(spec, [&] {
        Box b = Box::cube(n, -0.2, 0.2);
        b.axes[n - 1] = {0.8, 1.2};
        return b;
    }());

    // The parametrization needs x^n > 0 and Delta > 0 throughout.
    for (const Vec& p : sample_domain_points(box, 16, 0xE2, 0.0)) {
        if (p[n - 1] <= 0.0)
            throw OutsideDomainError("example2: generator coordinate must stay positive");
        if (delta->eval(p) <= 0.0)
            throw OutsideDomainError("example2: Delta <= 0 inside the requested domain");
    }
    return MetricChart(std::move(grid), std::move(box));
}

MetricChart build_ppwave(const ManifoldSpec& spec, const Box& fallback_box) {
    const int n = int_param(spec, "n");
    if (n < 4 || n > kMaxDim)
        throw std::invalid_argument("ppwave: dimension n must be in [4, " +
                                    std::to_string(kMaxDim) + "], got " + std::to_string(n));
    const std::string h_text = profile_param(spec, "h");
    check_profile(h_text, spec.kind.c_str(), "h");
    const ExprPtr h = parse_expression(h_text, n);
    ExprPtr q;
    for (int i = 2; i < n; ++i) {
        const ExprPtr t = ex::x(i) * ex::x(i);
        q = q ? q + t : t;
    }
    MetricGrid grid = empty_grid(n);
    grid.at(0, 0) = h * q;
    grid.at(0, 1) = ex::c(1.0);
    grid.at(1, 0) = grid.at(0, 1);
    for (int i = 2; i < n; ++i) grid.at(i, i) = ex::c(1.0);
    return MetricChart(std::move(grid), domain_or(spec, fallback_box));
}

} // namespace

const char* construction_name(Construction c) {
    switch (c) {
    case Construction::ClosedForm: return "closed_form";
    case Construction::EmbeddingInduced: return "embedding_induced";
    case Construction::Product: return "product";
    case Construction::ConformalPair: return "conformal_pair";
    }
    return "unknown";
}

Manifold instantiate(const ManifoldSpec& spec) {
    if (spec.kind == "flat")
        return {spec, build_constant_curvature(spec, true), std::nullopt, std::nullopt};
    if (spec.kind == "constant_curvature")
        return {spec, build_constant_curvature(spec, false), std::nullopt, std::nullopt};
    if (spec.kind == "product_example1")
        return {spec, build_product_example1(spec), std::nullopt, std::nullopt};
    if (spec.kind == "example2")
        return {spec, build_example2(spec), std::nullopt, std::nullopt};
    if (spec.kind == "ppwave")
        return {spec, build_ppwave(spec, Box::cube(int_param(spec, "n"), -1.0, 1.0)),
                std::nullopt, std::nullopt};
    if (spec.kind == "ppwave_pair") {
        const Box box{{{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
        MetricChart chart = build_ppwave(spec, box);
        ScalarField sigma(parse_expression(profile_param(spec, "sigma"), chart.dim()),
                          chart.dim());
        MetricChart partner = conformal_change(chart, sigma, 0, 1).bar;
        return {spec, std::move(chart), std::move(partner), std::move(sigma)};
    }
    if (spec.kind == "generic22")
        return {spec,
                MetricChart(parse_metric_dsl(kGeneric22Dsl),
                            domain_or(spec, Box::cube(4, -0.4, 0.4))),
                std::nullopt, std::nullopt};
    throw std::invalid_argument("unknown manifold kind: " + spec.kind);
}

ManifoldSpec flat_spec(int s, int n) {
    require_dim_range(n, "flat");
    require_signature_range(s, n, "flat");
    ManifoldSpec spec;
    spec.name = "flat";
    spec.kind = "flat";
    spec.construction = Construction::ClosedForm;
    spec.params = {{"s", static_cast<double>(s)}, {"n", static_cast<double>(n)}};
    spec.domain = Box::cube(n, -0.75, 0.75);
    spec.note = "flat block metric, curvature zero";
    return spec;
}

ManifoldSpec constant_curvature_spec(double c, int s, int n) {
    require_dim_range(n, "constant_curvature");
    require_signature_range(s, n, "constant_curvature");
    ManifoldSpec spec;
    spec.name = "constant_curvature";
    spec.kind = "constant_curvature";
    spec.construction = Construction::ClosedForm;
    spec.params = {{"c", c}, {"s", static_cast<double>(s)}, {"n", static_cast<double>(n)}};
    spec.domain = Box::cube(n, -0.75, 0.75);
    spec.note = "conformal model with sectional curvature " + fmt(c);
    return spec;
}

ManifoldSpec product_example1_spec(double c, int s, int n) {
    require_dim_range(n, "product_example1");
    require_signature_range(s, n - 1, "product_example1");
    ManifoldSpec spec;
    spec.name = "product_example1";
    spec.kind = "product_example1";
    spec.construction = Construction::Product;
    spec.params = {{"c", c}, {"s", static_cast<double>(s)}, {"n", static_cast<double>(n)}};
    spec.domain = Box::cube(n, -0.75, 0.75);
    spec.note = "curvature-" + fmt(c) + " factor times a line; quasi-constant with N = 0";
    return spec;
}

ManifoldSpec example2_spec(const std::string& f, int s, int n) {
    require_dim_range(n, "example2");
    require_signature_range(s, n - 1, "example2");
    check_profile(f, "example2", "f");
    ManifoldSpec spec;
    spec.name = "example2";
    spec.kind = "example2";
    spec.construction = Construction::EmbeddingInduced;
    spec.params = {{"s", static_cast<double>(s)}, {"n", static_cast<double>(n)}};
    spec.profiles = {{"f", f}};
    Box box = Box::cube(n, -0.2, 0.2);
    box.axes[n - 1] = {0.8, 1.2};
    spec.domain = box;
    spec.note = "rotational hypersurface generated by f, induced metric";
    return spec;
}

ManifoldSpec ppwave_spec(const std::string& h, int n) {
    if (n < 4 || n > kMaxDim)
        throw std::invalid_argument("ppwave: dimension n must be in [4, " +
                                    std::to_string(kMaxDim) + "], got " + std::to_string(n));
    check_profile(h, "ppwave", "h");
    ManifoldSpec spec;
    spec.name = "ppwave";
    spec.kind = "ppwave";
    spec.construction = Construction::ClosedForm;
    spec.params = {{"n", static_cast<double>(n)}};
    spec.profiles = {{"h", h}};
    spec.domain = Box::cube(n, -1.0, 1.0);
    spec.note = "plane-fronted wave, conformally flat for every profile";
    return spec;
}

ManifoldSpec ppwave_pair_spec() {
    ManifoldSpec spec;
    spec.name = "ppwave_pair";
    spec.kind = "ppwave_pair";
    spec.construction = Construction::ConformalPair;
    spec.params = {{"n", 4.0}};
    spec.profiles = {{"h", kPairProfile}, {"sigma", kPairSigma}};
    spec.domain = Box{{{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
    spec.note = "wave and rescaling that agree on every weakly degenerate plane";
    return spec;
}

ManifoldSpec generic22_spec() {
    ManifoldSpec spec;
    spec.name = "generic22";
    spec.kind = "generic22";
    spec.construction = Construction::ClosedForm;
    spec.domain = Box::cube(4, -0.4, 0.4);
    spec.note = "frozen split-signature metric, Weyl bounded away from zero";
    return spec;
}

const std::vector<ManifoldSpec>& builtin_catalog() {
    static const std::vector<ManifoldSpec> catalog = [] {
        auto named = [](ManifoldSpec spec, const char* name) {
            spec.name = name;
            return spec;
        };
        std::vector<ManifoldSpec> list;
        list.push_back(named(flat_spec(1, 4), "flat_s1_n4"));
        list.push_back(named(constant_curvature_spec(1.0, 0, 3), "sphere_n3"));
        list.push_back(named(constant_curvature_spec(-1.0, 0, 4), "hyperbolic_n4"));
        list.push_back(named(constant_curvature_spec(1.0, 1, 4), "lorentz_sphere_n4"));
        list.push_back(named(constant_curvature_spec(1.0, 2, 4), "pseudosphere_22"));
        list.push_back(named(product_example1_spec(1.0, 0, 4), "product_example1_n4"));
        list.push_back(named(example2_spec("x0^2", 2, 4), "example2_s2_n4"));
        list.push_back(named(ppwave_spec("exp(x0)", 4), "ppwave_exp_n4"));
        list.push_back(named(ppwave_spec("1", 4), "ppwave_const_n4"));
        list.push_back(named(ppwave_pair_spec(), "ppwave_pair_n4"));
        list.push_back(named(generic22_spec(), "generic22"));
        return list;
    }();
    return catalog;
}

ManifoldSpec resolve_spec(const std::string& name,
                          const std::map<std::string, std::string>& overrides) {
    ManifoldSpec spec;
    bool found = false;
    for (const ManifoldSpec& entry : builtin_catalog())
        if (entry.name == name) {
            spec = entry;
            found = true;
            break;
        }
    if (!found) {
        if (name == "flat")
            spec = flat_spec(1, 4);
        else if (name == "constant_curvature")
            spec = constant_curvature_spec(1.0, 1, 4);
        else if (name == "product_example1")
            spec = product_example1_spec(1.0, 0, 4);
        else if (name == "example2")
            spec = example2_spec("x0^2", 2, 4);
        else if (name == "ppwave")
            spec = ppwave_spec("exp(x0)", 4);
        else if (name == "ppwave_pair")
            spec = ppwave_pair_spec();
        else if (name == "generic22")
            spec = generic22_spec();
        else {
            std::string known;
            for (const ManifoldSpec& entry : builtin_catalog()) known += " " + entry.name;
            throw std::invalid_argument("unknown manifold '" + name + "'; known names:" + known +
                                        " plus the kind names");
        }
    }
    for (const auto& [key, value] : overrides) {
        if (key == "c" || key == "s" || key == "n") {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != value.size())
                throw std::invalid_argument("parameter " + key + ": not a number: " + value);
            // A new dimension invalidates the stored default box; drop it so
            // instantiation falls back to the kind default for the new n.
            if (key == "n" && spec.params.count("n") && spec.params["n"] != v)
                spec.domain = Box{};
            spec.params[key] = v;
        } else if (key == "f" || key == "h" || key == "sigma") {
            spec.profiles[key] = value;
        } else {
            throw std::invalid_argument("unknown manifold parameter: " + key);
        }
    }
    return spec;
}

std::string manifest_text() {
    std::ostringstream os;
    os << "# curvedcheck built-in manifolds\n";
    os << "# name | kind | construction | parameters | domain | note\n";
    for (const ManifoldSpec& spec : builtin_catalog()) {
        os << spec.name << " | " << spec.kind << " | " << construction_name(spec.construction)
           << " | ";
        bool first = true;
        for (const auto& [key, value] : spec.params) {
            os << (first ? "" : " ") << key << "=" << fmt(value);
            first = false;
        }
        for (const auto& [key, value] : spec.profiles) {
            os << (first ? "" : " ") << key << "=" << value;
            first = false;
        }
        if (first) os << "-";
        os << " | ";
        for (int a = 0; a < spec.domain.dim(); ++a)
            os << (a ? " " : "") << fmt(spec.domain.axes[a][0]) << ":"
               << fmt(spec.domain.axes[a][1]);
        os << " | " << spec.note << "\n";
    }
    return os.str();
}

std::vector<ManifoldSpec> parse_manifest(const std::string& text) {
    std::vector<ManifoldSpec> specs;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty() || row[0] == '#') continue;
        std::vector<std::string> fields;
        std::string::size_type start = 0;
        while (true) {
            const auto bar = row.find('|', start);
            fields.push_back(trim(row.substr(start, bar - start)));
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        if (fields.size() != 6)
            throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                        ": expected 6 fields, got " +
                                        std::to_string(fields.size()));
        ManifoldSpec spec;
        spec.name = fields[0];
        spec.kind = fields[1];
        bool known = false;
        for (Construction c : {Construction::ClosedForm, Construction::EmbeddingInduced,
                               Construction::Product, Construction::ConformalPair})
            if (fields[2] == construction_name(c)) {
                spec.construction = c;
                known = true;
            }
        if (!known)
            throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                        ": unknown construction " + fields[2]);
        if (fields[3] != "-") {
            std::istringstream ps(fields[3]);
            std::string item;
            while (ps >> item) {
                const auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                                ": bad parameter " + item);
                const std::string key = item.substr(0, eq);
                const std::string value = item.substr(eq + 1);
                if (key == "c" || key == "s" || key == "n")
                    spec.params[key] = std::stod(value);
                else
                    spec.profiles[key] = value;
            }
        }
        {
            std::istringstream ds(fields[4]);
            std::string axis;
            while (ds >> axis) {
                const auto colon = axis.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                                ": bad axis " + axis);
                spec.domain.axes.push_back(
                    {std::stod(axis.substr(0, colon)), std::stod(axis.substr(colon + 1))});
            }
        }
        spec.note = fields[5];
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::pair<double, double> example2_reference_HN(const std::string& f, int s,
                                                std::span<const double> p) {
    const int n = static_cast<int>(p.size());
    require_dim_range(n, "example2_reference_HN");
    require_signature_range(s, n - 1, "example2_reference_HN");
    const double t = p[n - 1];
    if (t <= 0.0)
        throw OutsideDomainError("example2_reference_HN: generator coordinate must be positive");
    double delta = 1.0;
    for (int i = 0; i + 1 < n; ++i) delta += (i < s ? -1.0 : 1.0) * p[i] * p[i];
    if (delta <= 0.0) throw OutsideDomainError("example2_reference_HN: Delta <= 0");

    const ExprPtr fe = parse_expression(f, 1);
    const Vec at{t};
    const double f1 = fe->diff(0)->eval(at);
    const double f2 = fe->diff(0)->diff(0)->eval(at);
    const double H = f1 * f1 / (t * t * (1.0 + f1 * f1));
    const double N = 4.0 * f1 * f2 / (t * (1.0 + f1 * f1));
    return {H, N};
}

} // namespace curved
