// Part of curvedcheck. BSD 3-Clause License.
//
// Fits of algebraic curvature models (c pi1, quasi-constant), vanishing
// tests on degenerate planes and orthonormal quadruples, and the
// recurrence structure of nabla R.

#include "curved/classify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace curved {

namespace {

double euclid_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

double dot_flat(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_diff_scaled(std::span<const double> r, std::span<const double> a, double ca,
                       std::span<const double> b, double cb) {
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        m = std::max(m, std::abs(r[i] - ca * a[i] - cb * b[i]));
    return m;
}

// Scale below which curvature counts as numerically zero.
double flat_scale(const SymmetricBilinear& g) {
    const double mg = g.max_abs();
    return 1e-9 * (1.0 + mg * mg);
}

// Fix sign and Euclidean length of a covector determined up to scale.
void normalize_covector(Vec& a) {
    const double n = euclid_norm(a);
    if (n == 0.0) return;
    double lead = 0.0;
    for (double c : a)
        if (std::abs(c) > 1e-8 * n) {
            lead = c;
            break;
        }
    const double s = (lead < 0.0 ? -1.0 : 1.0) / n;
    for (double& c : a) c *= s;
}

} // namespace

ConstantFit fit_c_pi1(const Tensor4& t, const SymmetricBilinear& g) {
    require_same_dim(t.dim(), g.dim());
    const Tensor4 pi1 = build_pi1(g);
    const double pp = dot_flat(pi1.flat(), pi1.flat());
    ConstantFit out;
    out.c = dot_flat(t.flat(), pi1.flat()) / pp;
    double m = 0.0;
    std::span<const double> tf = t.flat();
    std::span<const double> pf = pi1.flat();
    for (std::size_t i = 0; i < tf.size(); ++i)
        m = std::max(m, std::abs(tf[i] - out.c * pf[i]));
    out.residual = m;
    return out;
}

VanishingTest degenerate_vanishing_test(const Tensor4& t, const SymmetricBilinear& g,
                                        PlaneKind kind, int samples, double tol,
                                        std::uint64_t seed) {
    VanishingTest out;
    out.tol = tol;
    out.samples = samples;
    const double tnorm = std::max(t.max_abs(), 1e-30);
    const std::vector<TangentPlane> planes = sample_degenerate_planes(g, kind, samples, seed);
    for (const TangentPlane& plane : planes) {
        const double ex = euclid_norm(plane.x);
        const double ey = euclid_norm(plane.y);
        const double value = std::abs(t.apply(plane.x, plane.y, plane.y, plane.x)) /
                             (tnorm * ex * ex * ey * ey);
        if (value > out.max_normalized) {
            out.max_normalized = value;
            out.worst = plane;
        }
    }
    out.pass = out.max_normalized < tol;
    return out;
}

QuadrupleTest orthonormal_quadruple_test(const Tensor4& riemann, const SymmetricBilinear& g,
                                         int frames, double tol, std::uint64_t seed) {
    const int n = g.dim();
    if (n < 4)
        throw std::invalid_argument("orthonormal_quadruple_test: needs dimension >= 4");
    QuadrupleTest out;
    out.tol = tol;
    out.frames = frames;
    const double rnorm = std::max(riemann.max_abs(), 1e-30);
    for (int f = 0; f < frames; ++f) {
        const std::uint64_t sub = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(f + 1);
        const std::vector<Vec> frame = pseudo_orthonormal_frame(g, sub == 0 ? 1 : sub);
        double enorm = 0.0;
        for (const Vec& e : frame) enorm = std::max(enorm, euclid_norm(e));
        const double scale = rnorm * enorm * enorm * enorm * enorm;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
                        const double v =
                            std::abs(riemann.apply(frame[a], frame[b], frame[c], frame[d])) /
                            scale;
                        out.max_normalized = std::max(out.max_normalized, v);
                    }
    }
    out.pass = out.max_normalized < tol;
    return out;
}

const char* quasi_status_name(QuasiStatus s) {
    switch (s) {
    case QuasiStatus::Fitted: return "fitted";
    case QuasiStatus::ConstantCurvature: return "constant_curvature";
    case QuasiStatus::NotQuasiConstant: return "not_quasi_constant";
    case QuasiStatus::NonDiagonalizable: return "non_diagonalizable";
    case QuasiStatus::IsotropicEigenvector: return "isotropic_eigenvector";
    }
    return "unknown";
}

QuasiFit fit_quasi_constant(const Tensor4& riemann, const SymmetricBilinear& g,
                            const SymmetricBilinear& g_inv, double tol) {
    const int n = g.dim();
    require_same_dim(riemann.dim(), n);
    QuasiFit out;

    const RicciContraction ric = contract_ricci(riemann, g_inv);
    Eigen::MatrixXd gm(n, n), gi(n, n), s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            gm(i, j) = g(i, j);
            gi(i, j) = g_inv(i, j);
            s(i, j) = ric.ricci(i, j);
        }

    // Spectrum of the Ricci operator A^i_j = g^{ik} S_kj.  For definite
    // metrics the generalized symmetric solver is exact and stable; for
    // indefinite ones A need not be diagonalizable and the general solver
    // is used, with defect detection below.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sig(gm);
    int negatives = 0;
    for (int i = 0; i < n; ++i)
        if (sig.eigenvalues()(i) < 0.0) ++negatives;
    const bool definite = (negatives == 0) || (negatives == n);

    Eigen::VectorXd lambda(n);
    Eigen::MatrixXd vecs(n, n);
    bool defective = false;
    if (definite) {
        Eigen::MatrixXd b = (negatives == 0) ? gm : Eigen::MatrixXd(-gm);
        Eigen::MatrixXd a = (negatives == 0) ? s : Eigen::MatrixXd(-s);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b);
        lambda = ges.eigenvalues();
        vecs = ges.eigenvectors();
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(gi * s);
        const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i)
            if (std::abs(es.eigenvalues()(i).imag()) > 1e-6 * std::max(scale, 1e-30))
                defective = true;
        if (!defective) {
            for (int i = 0; i < n; ++i) lambda(i) = es.eigenvalues()(i).real();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) vecs(i, j) = es.eigenvectors()(i, j).real();
            for (int j = 0; j < n; ++j) {
                const double cn = vecs.col(j).norm();
                if (cn > 0.0) vecs.col(j) /= cn;
            }
            // Defective operators come back with linearly dependent columns.
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(vecs);
            if (svd.singularValues()(n - 1) < 1e-6 * svd.singularValues()(0)) defective = true;
        }
    }

    const Tensor4 pi1 = build_pi1(g);
    const double rnorm = std::max(riemann.max_abs(), 1e-30);

    if (defective) {
        out.status = QuasiStatus::NonDiagonalizable;
        out.residual = rnorm;
        return out;
    }

    // Isotropic spectrum: plain constant-curvature fit.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lambda(a) < lambda(b); });
    const double spread = lambda(order.back()) - lambda(order.front());
    const double lscale = std::max(std::abs(lambda(order.front())),
                                   std::abs(lambda(order.back())));
    if (spread <= 1e-5 * std::max(lscale, 1e-30) || spread <= tol * rnorm) {
        const ConstantFit cf = fit_c_pi1(riemann, g);
        out.H = out.N = cf.c;
        out.residual = cf.residual;
        out.lambda_v = out.lambda_perp = lambda(order.front());
        out.status = (cf.residual < tol * rnorm) ? QuasiStatus::ConstantCurvature
                                                 : QuasiStatus::NotQuasiConstant;
        return out;
    }

    // Candidate distinguished direction: the end of the spectrum whose
    // removal leaves the tightest cluster.
    auto margin = [&](bool low) {
        const int c = low ? order.front() : order.back();
        double lo = std::numeric_limits<double>::max();
        double hi = std::numeric_limits<double>::lowest();
        for (int i = 0; i < n; ++i) {
            if (order[i] == c) continue;
            lo = std::min(lo, lambda(order[i]));
            hi = std::max(hi, lambda(order[i]));
        }
        const double width = hi - lo;
        const double gap = low ? (lo - lambda(c)) : (lambda(c) - hi);
        return gap - width;
    };
    const bool take_low = margin(true) >= margin(false);
    const int simple = take_low ? order.front() : order.back();

    Vec v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = vecs(i, simple);
    const double gvv = g.apply(v, v);
    const double vn = euclid_norm(v);
    if (std::abs(gvv) < 1e-10 * vn * vn * std::max(g.max_abs(), 1e-30)) {
        out.status = QuasiStatus::IsotropicEigenvector;
        out.residual = rnorm;
        return out;
    }
    const double inv = 1.0 / std::sqrt(std::abs(gvv));
    for (double& c : v) c *= inv;
    // Sign convention: first significant component positive.
    double lead = 0.0;
    for (double c : v)
        if (std::abs(c) > 1e-8 * euclid_norm(v)) {
            lead = c;
            break;
        }
    if (lead < 0.0)
        for (double& c : v) c = -c;
    out.eps = gvv < 0.0 ? -1.0 : 1.0;
    out.V = v;
    out.lambda_v = lambda(simple);
    double perp = 0.0;
    for (int i = 0; i < n; ++i)
        if (i != simple) perp += lambda(i);
    out.lambda_perp = perp / (n - 1);

    // Two-parameter least squares R ~ a phi(B) + H pi1, N = H + a.
    SymmetricBilinear bform(n);
    Vec vflat(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vflat[i] += g(i, j) * v[j];
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) bform.set(i, j, vflat[i] * vflat[j]);
    const Tensor4 phi = build_phi(g, bform);

    const double g00 = dot_flat(phi.flat(), phi.flat());
    const double g01 = dot_flat(phi.flat(), pi1.flat());
    const double g11 = dot_flat(pi1.flat(), pi1.flat());
    const double b0 = dot_flat(riemann.flat(), phi.flat());
    const double b1 = dot_flat(riemann.flat(), pi1.flat());
    const double det = g00 * g11 - g01 * g01;
    double a, h;
    if (std::abs(det) > 1e-14 * g00 * g11) {
        a = (b0 * g11 - b1 * g01) / det;
        h = (g00 * b1 - g01 * b0) / det;
    } else {
        a = 0.0;
        h = b1 / g11;
    }
    out.H = h;
    out.N = h + a;
    out.residual = max_diff_scaled(riemann.flat(), phi.flat(), a, pi1.flat(), h);
    out.status =
        (out.residual < tol * rnorm) ? QuasiStatus::Fitted : QuasiStatus::NotQuasiConstant;
    return out;
}

const char* recurrence_mode_name(RecurrenceMode m) {
    switch (m) {
    case RecurrenceMode::Flat: return "flat";
    case RecurrenceMode::Recurrent: return "recurrent";
    case RecurrenceMode::SymmetricKnStar: return "symmetric_kn_star";
    case RecurrenceMode::Symmetric: return "symmetric";
    case RecurrenceMode::None: return "none";
    }
    return "unknown";
}

RecurrenceFit fit_recurrence(const MetricChart& chart, std::span<const double> p, double tol) {
    const int n = chart.dim();
    const CurvatureBundle bundle = curvature_bundle(chart, p);
    RecurrenceFit out;
    out.r_norm = bundle.riemann.max_abs();
    if (out.r_norm < flat_scale(bundle.metric)) {
        out.mode = RecurrenceMode::Flat;
        return out;
    }

    const Tensor5 nabla = covariant_derivative_R(chart, p);
    const double nnorm = nabla.max_abs();
    out.nabla_rel = nnorm / out.r_norm;

    if (out.nabla_rel < tol) {
        // Parallel curvature; look for a covector annihilating R cyclically.
        const std::size_t rows = static_cast<std::size_t>(n) * n * n * n * n;
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), n);
        m.setZero();
        Eigen::Index row = 0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    for (int u = 0; u < n; ++u)
                        for (int w = 0; w < n; ++w) {
                            m(row, x) += bundle.riemann(y, z, u, w);
                            m(row, y) += bundle.riemann(z, x, u, w);
                            m(row, z) += bundle.riemann(x, y, u, w);
                            ++row;
                        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
        const Eigen::VectorXd sv = svd.singularValues();
        out.residual = out.nabla_rel;
        if (sv(n - 1) < 1e-8 * sv(0)) {
            out.mode = RecurrenceMode::SymmetricKnStar;
            out.alpha.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) out.alpha[i] = svd.matrixV()(i, n - 1);
            normalize_covector(out.alpha);
        } else {
            out.mode = RecurrenceMode::Symmetric;
        }
        return out;
    }

    // Per-slot least squares for nabla R = alpha (x) R.
    const double rr = dot_flat(bundle.riemann.flat(), bundle.riemann.flat());
    out.alpha.assign(static_cast<std::size_t>(n), 0.0);
    std::span<const double> nf = nabla.flat();
    std::span<const double> rf = bundle.riemann.flat();
    const std::size_t block = rf.size();
    for (int a = 0; a < n; ++a) {
        double num = 0.0;
        for (std::size_t i = 0; i < block; ++i)
            num += nf[static_cast<std::size_t>(a) * block + i] * rf[i];
        out.alpha[a] = num / rr;
    }
    double resid = 0.0;
    for (int a = 0; a < n; ++a)
        for (std::size_t i = 0; i < block; ++i)
            resid = std::max(resid, std::abs(nf[static_cast<std::size_t>(a) * block + i] -
                                             out.alpha[a] * rf[i]));
    out.residual = resid / nnorm;
    if (out.residual < tol) {
        out.mode = RecurrenceMode::Recurrent;
    } else {
        out.mode = RecurrenceMode::None;
        out.alpha.clear();
    }
    return out;
}

ClassificationReport classify_point(const MetricChart& chart, std::span<const double> p,
                                    const ClassifyOptions& opt) {
    ClassificationReport rep;
    rep.point.assign(p.begin(), p.end());
    rep.path = chart.path();
    rep.tol = (chart.path() == DerivativePath::Symbolic) ? opt.tol_symbolic : opt.tol_fd;

    const CurvatureBundle b = curvature_bundle(chart, p);
    rep.r_norm = b.riemann.max_abs();
    const double denom = std::max(rep.r_norm, flat_scale(b.metric));

    const ConstantFit cf = fit_c_pi1(b.riemann, b.metric);
    rep.fit_c = cf.c;
    rep.fit_c_residual = cf.residual / denom;
    rep.constant_curvature = rep.fit_c_residual < rep.tol;

    rep.quasi = fit_quasi_constant(b.riemann, b.metric, b.inverse_metric, rep.tol);
    rep.quasi_residual = rep.quasi.residual / denom;
    rep.quasi_constant = (rep.quasi.status == QuasiStatus::Fitted ||
                          rep.quasi.status == QuasiStatus::ConstantCurvature) &&
                         rep.quasi_residual < rep.tol;

    if (b.weyl.has_value()) {
        rep.conformal_obstruction = b.weyl->max_abs() / denom;
    } else if (b.cotton.has_value()) {
        const double nd = std::max(b.cotton->max_abs(), 0.0);
        const Tensor5 nabla = covariant_derivative_R(chart, p);
        rep.conformal_obstruction = nd / std::max(nabla.max_abs(), flat_scale(b.metric));
    }
    rep.conformally_flat = rep.conformal_obstruction < rep.tol;

    rep.recurrence = fit_recurrence(chart, p, rep.tol);

    if (rep.recurrence.mode == RecurrenceMode::Flat)
        rep.label = "flat";
    else if (rep.constant_curvature)
        rep.label = "constant_curvature";
    else if (rep.quasi_constant)
        rep.label = "quasi_constant";
    else if (rep.conformally_flat)
        rep.label = "conformally_flat";
    else if (rep.recurrence.mode == RecurrenceMode::Recurrent)
        rep.label = "recurrent";
    else if (rep.recurrence.mode == RecurrenceMode::SymmetricKnStar)
        rep.label = "symmetric_kn_star";
    else if (rep.recurrence.mode == RecurrenceMode::Symmetric)
        rep.label = "symmetric";
    else
        rep.label = "generic";
    return rep;
}

} // namespace curved
