// Part of curvedcheck. BSD 3-Clause License.
//
// Conformal metric changes gbar = e^{2 sigma} g, the deformation tensor Q
// linking the two curvature tensors, pullback classification of diffeos,
// and the degenerate-plane curvature conditions for conformal pairs.

#include "curved/conformal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curved {

namespace {

double euclid_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Curvature magnitudes below this count as flat; also the division floor
// for relative residuals.  Quadratic in the metric scale, like R itself.
double flat_scale(const SymmetricBilinear& g) {
    const double mg = g.max_abs();
    return 1e-9 * (1.0 + mg * mg);
}

} // namespace

ScalarField::ScalarField(ExprPtr expr, int dim) : expr_(std::move(expr)), dim_(dim) {
    if (!expr_) throw std::invalid_argument("ScalarField: null expression");
    if (dim_ < 1) throw std::invalid_argument("ScalarField: dimension must be positive");
    if (expr_->min_dimension() > dim_)
        throw std::invalid_argument("ScalarField: expression uses coordinates beyond the chart");
    grad_.reserve(static_cast<std::size_t>(dim_));
    for (int a = 0; a < dim_; ++a) grad_.push_back(expr_->diff(a));
    hess_.reserve(static_cast<std::size_t>(dim_) * (dim_ + 1) / 2);
    for (int a = 0; a < dim_; ++a)
        for (int b = a; b < dim_; ++b) hess_.push_back(grad_[a]->diff(b));
}

ScalarField ScalarField::constant(double k, int dim) {
    return ScalarField(Expr::constant(k), dim);
}

double ScalarField::value(std::span<const double> p) const { return expr_->eval(p); }

Vec ScalarField::gradient(std::span<const double> p) const {
    Vec out(static_cast<std::size_t>(dim_));
    for (int a = 0; a < dim_; ++a) out[a] = grad_[a]->eval(p);
    return out;
}

std::vector<double> ScalarField::hessian(std::span<const double> p) const {
    std::vector<double> out(static_cast<std::size_t>(dim_) * dim_);
    std::size_t k = 0;
    for (int a = 0; a < dim_; ++a)
        for (int b = a; b < dim_; ++b, ++k) {
            const double v = hess_[k]->eval(p);
            out[static_cast<std::size_t>(a) * dim_ + b] = v;
            out[static_cast<std::size_t>(b) * dim_ + a] = v;
        }
    return out;
}

SymmetricBilinear conformal_Q(const CurvatureBundle& bundle, const ScalarField& sigma) {
    const int n = bundle.metric.dim();
    if (sigma.dim() != n) throw std::invalid_argument("conformal_Q: dimension mismatch");
    const Vec grad = sigma.gradient(bundle.point);
    const std::vector<double> hess = sigma.hessian(bundle.point);
    double norm2 = 0.0; // g(grad sigma, grad sigma)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) norm2 += bundle.inverse_metric(a, b) * grad[a] * grad[b];
    SymmetricBilinear q(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            // covariant Hessian: partial^2 sigma - Gamma^m_ab partial_m sigma
            double cov = hess[static_cast<std::size_t>(a) * n + b];
            for (int m = 0; m < n; ++m) cov -= bundle.christoffel(m, a, b) * grad[m];
            q.set(a, b, grad[a] * grad[b] - cov - 0.5 * norm2 * bundle.metric(a, b));
        }
    return q;
}

ConformalChange conformal_change(const MetricChart& chart, const ScalarField& sigma,
                                 int verify_points, std::uint64_t seed) {
    if (!chart.grid().has_value())
        throw std::invalid_argument(
            "conformal_change: needs a symbolic chart; rebuild finite-difference charts "
            "from expressions first");
    if (sigma.dim() != chart.dim())
        throw std::invalid_argument("conformal_change: sigma dimension mismatch");
    const int n = chart.dim();
    const MetricGrid& grid = *chart.grid();
    const ExprPtr factor = ex::exp(ex::c(2.0) * sigma.expr());
    MetricGrid bar_grid;
    bar_grid.dim = n;
    bar_grid.components.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const ExprPtr& comp = grid.components[static_cast<std::size_t>(i) * n + j];
            if (comp) bar_grid.components[static_cast<std::size_t>(i) * n + j] = factor * comp;
        }
    ConformalChange out{MetricChart(std::move(bar_grid), chart.domain()), 0.0,
                        std::max(verify_points, 0)};

    for (const Vec& p : sample_domain_points(chart.domain(), out.verify_points, seed)) {
        const CurvatureBundle src = curvature_bundle(chart, p);
        const CurvatureBundle bar = curvature_bundle(out.bar, p);
        const SymmetricBilinear q = conformal_Q(src, sigma);
        const Tensor4 phi = build_phi(src.metric, q);
        const double s2 = std::exp(2.0 * sigma.value(p));
        double defect = 0.0;
        std::span<const double> bf = bar.riemann.flat();
        std::span<const double> rf = src.riemann.flat();
        std::span<const double> pf = phi.flat();
        for (std::size_t i = 0; i < bf.size(); ++i)
            defect = std::max(defect, std::abs(bf[i] - s2 * (rf[i] + pf[i])));
        const double denom = std::max(bar.riemann.max_abs(), flat_scale(bar.metric));
        out.verify_residual = std::max(out.verify_residual, defect / denom);
    }
    return out;
}

const char* map_class_name(MapClass c) {
    switch (c) {
    case MapClass::Isometry: return "isometry";
    case MapClass::Homothety: return "homothety";
    case MapClass::Conformal: return "conformal";
    case MapClass::General: return "general";
    }
    return "unknown";
}

const char* gradient_class_name(GradientClass c) {
    switch (c) {
    case GradientClass::Zero: return "zero";
    case GradientClass::Isotropic: return "isotropic";
    case GradientClass::Nonnull: return "nonnull";
    case GradientClass::Mixed: return "mixed";
    }
    return "unknown";
}

namespace {

struct PullbackSample {
    double sigma_hat = 0.0;
    double sign = 1.0;
    double residual = 1.0;
    bool ok = false;
};

// Pulled-back metric (f* gbar)_{ik} = J^j_i gbar_{jl} J^l_k at p, compared
// against sign * e^{2 sigma_hat} g(p).
PullbackSample pullback_at(const Diffeo& map, const MetricChart& source,
                           const MetricChart& target, std::span<const double> p) {
    const int n = source.dim();
    const Vec image = map.apply(p);
    const SymmetricBilinear g = source.metric_at(p);
    const SymmetricBilinear gbar = target.metric_at(image);
    const std::vector<double> jac = map.jacobian(p);

    Eigen::MatrixXd j(n, n), gb(n, n), gm(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            j(i, k) = jac[static_cast<std::size_t>(i) * n + k];
            gb(i, k) = gbar(i, k);
            gm(i, k) = g(i, k);
        }
    const Eigen::MatrixXd pb = j.transpose() * gb * j;

    PullbackSample out;
    const double det_pb = pb.determinant();
    const double det_g = gm.determinant();
    if (!(std::abs(det_g) > 0.0) || !(std::abs(det_pb) > 0.0)) return out; // degenerate image
    out.sigma_hat = std::log(std::abs(det_pb / det_g)) / (2.0 * n);
    const double frob = (pb.array() * gm.array()).sum();
    out.sign = frob < 0.0 ? -1.0 : 1.0;
    const double factor = out.sign * std::exp(2.0 * out.sigma_hat);
    const double defect = (pb - factor * gm).cwiseAbs().maxCoeff();
    const double scale =
        std::max(pb.cwiseAbs().maxCoeff(), std::abs(factor) * gm.cwiseAbs().maxCoeff());
    out.residual = defect / std::max(scale, 1e-30);
    out.ok = true;
    return out;
}

} // namespace

PullbackReport pullback_classify(const Diffeo& map, const MetricChart& source,
                                 const MetricChart& target, int samples, double tol,
                                 std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("pullback_classify: need at least 2 samples");
    const int n = source.dim();
    if (map.dim() != n || target.dim() != n)
        throw std::invalid_argument("pullback_classify: dimension mismatch");

    PullbackReport rep;
    rep.points = sample_domain_points(source.domain(), samples, seed);
    std::vector<double> signs;
    bool all_ok = true;
    for (const Vec& p : rep.points) {
        const PullbackSample s = pullback_at(map, source, target, p);
        all_ok = all_ok && s.ok;
        rep.max_residual = std::max(rep.max_residual, s.residual);
        rep.sigma_hat.push_back(s.sigma_hat);
        signs.push_back(s.sign);
    }
    const bool sign_consistent =
        std::all_of(signs.begin(), signs.end(), [&](double s) { return s == signs.front(); });
    rep.sign_flip = sign_consistent && signs.front() < 0.0;

    const auto [lo_it, hi_it] = std::minmax_element(rep.sigma_hat.begin(), rep.sigma_hat.end());
    rep.sigma_spread = *hi_it - *lo_it;
    double mean = 0.0;
    for (double s : rep.sigma_hat) mean += s;
    mean /= static_cast<double>(rep.sigma_hat.size());

    if (!all_ok || !sign_consistent || rep.max_residual >= tol) {
        rep.map_class = MapClass::General;
    } else if (rep.sigma_spread < tol * std::max(1.0, std::abs(mean))) {
        const double mu = std::exp(2.0 * mean);
        rep.lambda = signs.front() * mu;
        rep.map_class = std::abs(mu - 1.0) < tol ? MapClass::Isometry : MapClass::Homothety;
        rep.gradient_class = GradientClass::Zero;
    } else {
        rep.map_class = MapClass::Conformal;
        // sigma_hat is smooth in p; classify its gradient by the causal type
        // of the g-dual vector at each sample, via central differences.
        const Box& box = source.domain();
        double min_width = box.width(0), max_width = box.width(0);
        for (int a = 1; a < n; ++a) {
            min_width = std::min(min_width, box.width(a));
            max_width = std::max(max_width, box.width(a));
        }
        const double h = 1e-5 * min_width;
        const double gzero = 1e-4 * rep.sigma_spread / max_width;
        // FD noise on the gradient sits near 1e-10 * scale; 1e-4 leaves four
        // decades of headroom on both sides of the isotropy decision.
        const double iso_tol = 1e-4;
        int zero_count = 0, iso_count = 0, nonnull_count = 0;
        for (const Vec& p : rep.points) {
            Vec d(static_cast<std::size_t>(n));
            Vec shifted(p.begin(), p.end());
            for (int a = 0; a < n; ++a) {
                shifted[a] = p[a] + h;
                const double up = pullback_at(map, source, target, shifted).sigma_hat;
                shifted[a] = p[a] - h;
                const double dn = pullback_at(map, source, target, shifted).sigma_hat;
                shifted[a] = p[a];
                d[a] = (up - dn) / (2.0 * h);
            }
            const double norm_e = euclid_norm(d);
            if (norm_e < gzero) {
                ++zero_count;
                continue;
            }
            const SymmetricBilinear gi = source.inverse_metric_at(p);
            double q = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) q += gi(a, b) * d[a] * d[b];
            const double qn = std::abs(q) / (std::max(gi.max_abs(), 1e-30) * norm_e * norm_e);
            if (qn < iso_tol)
                ++iso_count;
            else
                ++nonnull_count;
        }
        if (iso_count > 0 && nonnull_count > 0)
            rep.gradient_class = GradientClass::Mixed;
        else if (nonnull_count > 0)
            rep.gradient_class = GradientClass::Nonnull;
        else if (iso_count > 0)
            rep.gradient_class = GradientClass::Isotropic;
        else
            rep.gradient_class = GradientClass::Zero;
        (void)zero_count;
    }

    // Isotropic cone preservation: push isotropic vectors xi = t +/- s from a
    // pseudo-orthonormal frame through J and test gbar(J xi, J xi) = 0.
    const Signature sig = source.signature();
    if (sig.negative == 0 || sig.positive == 0) {
        rep.cone_preserved = true; // definite metric, no cone to preserve
    } else {
        const int s = sig.negative;
        for (std::size_t idx = 0; idx < rep.points.size(); ++idx) {
            const Vec& p = rep.points[idx];
            const SymmetricBilinear g = source.metric_at(p);
            const std::vector<Vec> frame = pseudo_orthonormal_frame(g, mix_seed(seed, idx));
            std::vector<Vec> cone;
            auto combine = [&](int a, int b, double sgn) {
                Vec v(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) v[i] = frame[a][i] + sgn * frame[b][i];
                cone.push_back(std::move(v));
            };
            combine(0, s, 1.0);
            combine(0, s, -1.0);
            if (s >= 2) combine(1, s, 1.0);
            if (n - s >= 2) combine(0, s + 1, 1.0);
            const Vec image = map.apply(p);
            const SymmetricBilinear gbar = target.metric_at(image);
            for (const Vec& xi : cone) {
                const Vec w = map.push_vector(p, xi);
                double q = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) q += gbar(a, b) * w[a] * w[b];
                const double wn = euclid_norm(w);
                const double qn =
                    std::abs(q) / (std::max(gbar.max_abs(), 1e-30) * std::max(wn * wn, 1e-30));
                rep.cone_residual = std::max(rep.cone_residual, qn);
                ++rep.cone_samples;
            }
        }
        rep.cone_preserved = rep.cone_residual < tol;
    }
    return rep;
}

DegenerateConditionResult degenerate_condition_check(const MetricChart& source,
                                                     const ScalarField& sigma, PlaneKind kind,
                                                     int points, int planes_per_point,
                                                     double tol, std::uint64_t seed) {
    if (points < 1 || planes_per_point < 1)
        throw std::invalid_argument("degenerate_condition_check: need at least one point/plane");
    if (kind == PlaneKind::Nondegenerate)
        throw std::invalid_argument("degenerate_condition_check: kind must be degenerate");
    if (sigma.dim() != source.dim())
        throw std::invalid_argument("degenerate_condition_check: sigma dimension mismatch");

    DegenerateConditionResult res;
    res.kind = kind;
    res.tol = tol;
    res.points = points;
    res.planes_per_point = planes_per_point;

    const std::vector<Vec> pts = sample_domain_points(source.domain(), points, seed);

    if (kind == PlaneKind::WeaklyDegenerate) {
        // Rbar(x,xi,xi,x) = e^{4 sigma} R(x,xi,xi,x) with Rbar computed
        // independently from the rescaled chart.
        const ConformalChange change = conformal_change(source, sigma, 0, seed);
        for (std::size_t idx = 0; idx < pts.size(); ++idx) {
            const Vec& p = pts[idx];
            const CurvatureBundle src = curvature_bundle(source, p);
            const CurvatureBundle bar = curvature_bundle(change.bar, p);
            const double s4 = std::exp(4.0 * sigma.value(p));
            const double scale = std::max({bar.riemann.max_abs(), s4 * src.riemann.max_abs(),
                                           flat_scale(src.metric)});
            const auto planes = sample_degenerate_planes(src.metric, kind, planes_per_point,
                                                         mix_seed(seed, idx), p);
            for (const TangentPlane& pl : planes) {
                const double lhs = bar.riemann.apply(pl.x, pl.y, pl.y, pl.x);
                const double rhs = s4 * src.riemann.apply(pl.x, pl.y, pl.y, pl.x);
                const double e = euclid_norm(pl.x) * euclid_norm(pl.y);
                res.residual = std::max(res.residual, std::abs(lhs - rhs) / (scale * e * e));
            }
        }
    } else {
        // Curvature on strong planes is blind to the conformal factor, so the
        // condition collapses to (e^{2 sigma} - 1) R(xi,eta,eta,xi) = 0.
        for (std::size_t idx = 0; idx < pts.size(); ++idx) {
            const Vec& p = pts[idx];
            const CurvatureBundle src = curvature_bundle(source, p);
            const double factor = std::exp(2.0 * sigma.value(p)) - 1.0;
            const double scale = std::max(src.riemann.max_abs(), flat_scale(src.metric));
            const auto planes = sample_degenerate_planes(src.metric, kind, planes_per_point,
                                                         mix_seed(seed, idx), p);
            for (const TangentPlane& pl : planes) {
                const double k = src.riemann.apply(pl.x, pl.y, pl.y, pl.x);
                const double e = euclid_norm(pl.x) * euclid_norm(pl.y);
                res.residual =
                    std::max(res.residual, std::abs(factor * k) / (scale * e * e));
            }
        }
    }
    res.pass = res.residual < tol;
    return res;
}

ConformalRelationResult verify_conformal_relation(const MetricChart& source,
                                                  const ScalarField& sigma, int points,
                                                  double tol, std::uint64_t seed) {
    if (points < 1) throw std::invalid_argument("verify_conformal_relation: need points >= 1");
    ConformalRelationResult res;
    res.tol = tol;
    res.points = points;

    const DegenerateConditionResult weak = degenerate_condition_check(
        source, sigma, PlaneKind::WeaklyDegenerate, points, 8, tol, seed);
    res.precondition_ok = weak.pass;
    res.precondition_residual = weak.residual;
    if (!res.precondition_ok) return res;

    const int n = source.dim();
    const ConformalChange change = conformal_change(source, sigma, 0, seed);
    for (const Vec& p : sample_domain_points(source.domain(), points, seed)) {
        const CurvatureBundle src = curvature_bundle(source, p);
        const CurvatureBundle bar = curvature_bundle(change.bar, p);
        const Tensor4 pi1 = build_pi1(src.metric);
        const double c = (bar.scalar - src.scalar) / (static_cast<double>(n) * (n - 1));
        const double s4 = std::exp(4.0 * sigma.value(p));
        double defect = 0.0;
        std::span<const double> bf = bar.riemann.flat();
        std::span<const double> rf = src.riemann.flat();
        std::span<const double> pf = pi1.flat();
        for (std::size_t i = 0; i < bf.size(); ++i)
            defect = std::max(defect, std::abs(bf[i] - s4 * (rf[i] + c * pf[i])));
        const double denom = std::max(bar.riemann.max_abs(), flat_scale(src.metric));
        res.residual = std::max(res.residual, defect / denom);
    }
    res.pass = res.residual < tol;
    return res;
}

} // namespace curved
