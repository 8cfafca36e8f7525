// Part of curvedcheck. BSD 3-Clause License.
//
// Tangent 2-planes: degeneracy classification against the restricted
// metric, sectional curvature, frame-based sampling of degenerate planes,
// and the limit of curvature ratios along plane families.

#include "curved/planes.hpp"

#include "curved/finite_difference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace curved {

namespace {

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

double symmetric_double(std::mt19937_64& rng) { return 2.0 * unit_double(rng) - 1.0; }

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

double euclid_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

// Random special-orthogonal matrix via QR of a Gaussian sample.
Eigen::MatrixXd random_rotation(int m, std::mt19937_64& rng) {
    Eigen::MatrixXd a(m, m);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < m; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

struct KParts {
    double num;
    double den;
    double num_scale;
    double den_scale;
};

KParts k_parts(const Tensor4& riemann, const SymmetricBilinear& g,
               std::span<const double> x, std::span<const double> y) {
    KParts out;
    out.num = riemann.apply(x, y, y, x);
    const double gxx = g.apply(x, x);
    const double gxy = g.apply(x, y);
    const double gyy = g.apply(y, y);
    out.den = gxx * gyy - gxy * gxy;
    const double ex = euclid_norm(x);
    const double ey = euclid_norm(y);
    const double maxg = g.max_abs();
    out.num_scale = std::max(riemann.max_abs(), 1e-30) * ex * ex * ey * ey;
    out.den_scale = std::max(maxg * maxg, 1e-30) * ex * ex * ey * ey;
    return out;
}

// One family ladder; throws SampleError whenever a rung degenerates.
std::vector<double> run_ladder(const CurvatureBundle& src, const CurvatureBundle& tgt,
                               const std::vector<double>& jac, const TangentPlane& plane0,
                               const Vec& w1, const Vec& w2, double t0, int steps) {
    const int n = src.metric.dim();
    const int m = tgt.metric.dim();
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(steps) + 1);
    Vec xt(static_cast<std::size_t>(n)), yt(static_cast<std::size_t>(n));
    Vec jx(static_cast<std::size_t>(m)), jy(static_cast<std::size_t>(m));
    double t = t0;
    for (int k = 0; k <= steps; ++k, t *= 0.5) {
        for (int i = 0; i < n; ++i) {
            xt[i] = plane0.x[i] + t * w1[i];
            yt[i] = plane0.y[i] + t * w2[i];
        }
        for (int i = 0; i < m; ++i) {
            double sx = 0.0, sy = 0.0;
            for (int j = 0; j < n; ++j) {
                sx += jac[static_cast<std::size_t>(i) * n + j] * xt[j];
                sy += jac[static_cast<std::size_t>(i) * n + j] * yt[j];
            }
            jx[i] = sx;
            jy[i] = sy;
        }
        const KParts s = k_parts(src.riemann, src.metric, xt, yt);
        const KParts b = k_parts(tgt.riemann, tgt.metric, jx, jy);
        if (std::abs(s.den) < 1e-11 * s.den_scale || std::abs(b.den) < 1e-11 * b.den_scale)
            throw SampleError("family rung collapsed onto a degenerate plane");
        const double ks = s.num / s.den;
        const double kb = b.num / b.den;
        // The ratio needs curvature in the source plane to divide by.
        if (std::abs(s.num) < 1e-11 * s.num_scale || ks == 0.0)
            throw SampleError("source curvature vanishes along the family");
        ratios.push_back(kb / ks);
    }
    return ratios;
}

} // namespace

const char* plane_kind_name(PlaneKind kind) {
    switch (kind) {
    case PlaneKind::Nondegenerate: return "nondegenerate";
    case PlaneKind::WeaklyDegenerate: return "weakly_degenerate";
    case PlaneKind::StronglyDegenerate: return "strongly_degenerate";
    }
    return "unknown";
}

PlaneClass classify_plane(const SymmetricBilinear& g, const TangentPlane& plane,
                          double tol) {
    const int n = g.dim();
    if (static_cast<int>(plane.x.size()) != n || static_cast<int>(plane.y.size()) != n)
        throw std::invalid_argument("classify_plane: basis dimension mismatch");
    const double nx = euclid_norm(plane.x);
    const double ny = euclid_norm(plane.y);
    if (nx == 0.0 || ny == 0.0)
        throw std::invalid_argument("classify_plane: zero basis vector");
    Vec xh(plane.x), yh(plane.y);
    for (int i = 0; i < n; ++i) {
        xh[i] /= nx;
        yh[i] /= ny;
    }
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += xh[i] * yh[i];
    if (1.0 - dot * dot <= 1e-12)
        throw std::invalid_argument("classify_plane: basis vectors are linearly dependent");

    // Restricted metric in the normalized basis.
    const double a = g.apply(xh, xh);
    const double b = g.apply(xh, yh);
    const double c = g.apply(yh, yh);
    const double mid = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    const double lam1 = mid + disc; // eigenvalues of the 2x2 Gram matrix
    const double lam2 = mid - disc;

    PlaneClass out;
    out.singular_values[0] = std::max(std::abs(lam1), std::abs(lam2));
    out.singular_values[1] = std::min(std::abs(lam1), std::abs(lam2));
    const double scale = std::max(out.singular_values[0], g.max_abs());
    if (scale == 0.0) {
        out.tag = PlaneKind::StronglyDegenerate;
        out.threshold = tol;
        out.isotropic_direction = xh;
        return out;
    }
    out.threshold = tol * scale;
    const int zeros = (out.singular_values[0] < out.threshold ? 1 : 0) +
                      (out.singular_values[1] < out.threshold ? 1 : 0);
    if (zeros == 0) {
        out.tag = PlaneKind::Nondegenerate;
        return out;
    }
    if (zeros >= 2) {
        out.tag = PlaneKind::StronglyDegenerate;
        out.isotropic_direction = xh;
        return out;
    }
    out.tag = PlaneKind::WeaklyDegenerate;
    // Kernel eigenvector of the Gram matrix for the small eigenvalue.
    const double lam = (std::abs(lam1) <= std::abs(lam2)) ? lam1 : lam2;
    double ca, cb; // kernel direction ca*xh + cb*yh
    if (std::abs(a - lam) + std::abs(b) >= std::abs(b) + std::abs(c - lam)) {
        ca = -b;
        cb = a - lam;
    } else {
        ca = c - lam;
        cb = -b;
    }
    Vec xi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xi[i] = ca * xh[i] + cb * yh[i];
    const double nxi = euclid_norm(xi);
    if (nxi > 0.0)
        for (int i = 0; i < n; ++i) xi[i] /= nxi;
    out.isotropic_direction = std::move(xi);
    return out;
}

double sectional_curvature(const Tensor4& riemann, const SymmetricBilinear& g,
                           const TangentPlane& plane, double tol) {
    const PlaneClass cls = classify_plane(g, plane, tol);
    if (cls.tag != PlaneKind::Nondegenerate)
        throw DegeneratePlaneError(std::string("sectional curvature is undefined on a ") +
                                   plane_kind_name(cls.tag) + " plane");
    const KParts parts = k_parts(riemann, g, plane.x, plane.y);
    return parts.num / parts.den;
}

std::vector<Vec> pseudo_orthonormal_frame(const SymmetricBilinear& g, std::uint64_t seed) {
    const int n = g.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("pseudo_orthonormal_frame: eigensolver failed");
    const Eigen::VectorXd ev = solver.eigenvalues(); // ascending: timelike first
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    int negatives = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(ev(i)) < 1e-12 * scale)
            throw SingularMetricError("pseudo_orthonormal_frame: metric is singular");
        if (ev(i) < 0.0) ++negatives;
    }
    // Columns q_i / sqrt|ev_i| give g(e_i, e_j) = sign(ev_i) delta_ij.
    Eigen::MatrixXd frame(n, n);
    for (int i = 0; i < n; ++i)
        frame.col(i) = solver.eigenvectors().col(i) / std::sqrt(std::abs(ev(i)));
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        if (negatives > 1) {
            Eigen::MatrixXd rot = random_rotation(negatives, rng);
            frame.leftCols(negatives) = frame.leftCols(negatives) * rot;
        }
        if (n - negatives > 1) {
            Eigen::MatrixXd rot = random_rotation(n - negatives, rng);
            frame.rightCols(n - negatives) = frame.rightCols(n - negatives) * rot;
        }
    }
    std::vector<Vec> out(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < n; ++r) out[i][r] = frame(r, i);
    return out;
}

std::vector<TangentPlane> sample_degenerate_planes(const SymmetricBilinear& g,
                                                   PlaneKind kind, int count,
                                                   std::uint64_t seed, const Vec& point) {
    if (kind == PlaneKind::Nondegenerate)
        throw std::invalid_argument("sample_degenerate_planes: requested kind must be degenerate");
    if (count < 0) throw std::invalid_argument("sample_degenerate_planes: negative count");
    const int n = g.dim();

    // Probe signature once from the unrotated frame.
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    int s = 0;
    for (int i = 0; i < n; ++i)
        if (solver.eigenvalues()(i) < 0.0) ++s;
    const int pos = n - s;
    if (kind == PlaneKind::WeaklyDegenerate && (s < 1 || pos < 1))
        throw SignatureError("weakly degenerate planes need an indefinite metric");
    if (kind == PlaneKind::StronglyDegenerate && (s < 2 || pos < 2))
        throw SignatureError(
            "strongly degenerate planes need at least two timelike and two spacelike directions");

    std::vector<TangentPlane> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const std::uint64_t sub = mix_seed(seed, static_cast<std::uint64_t>(k));
        const std::vector<Vec> frame = pseudo_orthonormal_frame(g, sub == 0 ? 1 : sub);
        TangentPlane plane;
        plane.point = point;
        if (kind == PlaneKind::StronglyDegenerate) {
            plane.x.assign(static_cast<std::size_t>(n), 0.0);
            plane.y.assign(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i) {
                plane.x[i] = frame[0][i] + frame[static_cast<std::size_t>(s)][i];
                plane.y[i] = frame[1][i] + frame[static_cast<std::size_t>(s) + 1][i];
            }
        } else {
            // y = timelike + spacelike unit; x a non-isotropic combination of
            // the remaining frame directions, unit-normalized against g.
            plane.y.assign(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i)
                plane.y[i] = frame[0][i] + frame[static_cast<std::size_t>(s)][i];
            std::vector<int> rest;
            for (int i = 1; i < s; ++i) rest.push_back(i);
            for (int i = s + 1; i < n; ++i) rest.push_back(i);
            std::mt19937_64 rng(mix_seed(sub, 0x517cc1b727220a95ULL));
            Vec coeff(rest.size(), 0.0);
            double q = 0.0;
            bool found = false;
            for (int attempt = 0; attempt < 64 && !found; ++attempt) {
                double norm2 = 0.0;
                q = 0.0;
                for (std::size_t r = 0; r < rest.size(); ++r) {
                    coeff[r] = symmetric_double(rng);
                    norm2 += coeff[r] * coeff[r];
                    q += (rest[r] < s ? -1.0 : 1.0) * coeff[r] * coeff[r];
                }
                found = norm2 > 0.0 && std::abs(q) >= 0.3 * norm2;
            }
            if (!found) {
                // Deterministic fallback: a single frame vector is unit.
                coeff.assign(rest.size(), 0.0);
                coeff[0] = 1.0;
                q = rest[0] < s ? -1.0 : 1.0;
            }
            plane.x.assign(static_cast<std::size_t>(n), 0.0);
            const double inv = 1.0 / std::sqrt(std::abs(q));
            for (std::size_t r = 0; r < rest.size(); ++r)
                for (int i = 0; i < n; ++i)
                    plane.x[i] += inv * coeff[r] * frame[static_cast<std::size_t>(rest[r])][i];
        }
        out.push_back(std::move(plane));
    }
    return out;
}

LimitEstimate limit_ratio_estimate(const MetricChart& source, const MetricChart& target,
                                   const Diffeo& map, const TangentPlane& plane0,
                                   const LimitFamily& family, int steps) {
    if (steps < 2) throw std::invalid_argument("limit_ratio_estimate: need at least 2 steps");
    const CurvatureBundle src = curvature_bundle(source, plane0.point);
    const Vec image = map.apply(plane0.point);
    const CurvatureBundle tgt = curvature_bundle(target, image);
    const std::vector<double> jac = map.jacobian(plane0.point);

    LimitEstimate est;
    est.ratios = run_ladder(src, tgt, jac, plane0, family.w1, family.w2, family.t0, steps);
    est.ts.resize(est.ratios.size());
    double t = family.t0;
    for (std::size_t i = 0; i < est.ts.size(); ++i, t *= 0.5) est.ts[i] = t;
    const fd::Extrapolated ex = fd::limit_to_zero(est.ratios);
    est.value = ex.value;
    est.error = ex.error;
    return est;
}

LimitEstimate limit_ratio_estimate(const MetricChart& source, const MetricChart& target,
                                   const Diffeo& map, const TangentPlane& plane0,
                                   std::uint64_t seed, int steps) {
    if (steps < 2) throw std::invalid_argument("limit_ratio_estimate: need at least 2 steps");
    const CurvatureBundle src = curvature_bundle(source, plane0.point);
    const Vec image = map.apply(plane0.point);
    const CurvatureBundle tgt = curvature_bundle(target, image);
    const std::vector<double> jac = map.jacobian(plane0.point);
    const int n = source.dim();

    const double t0 = 1e-2;
    const int attempts = 24;
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        Vec w1(static_cast<std::size_t>(n)), w2(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) w1[i] = symmetric_double(rng);
        for (int i = 0; i < n; ++i) w2[i] = symmetric_double(rng);
        try {
            LimitEstimate est;
            est.ratios = run_ladder(src, tgt, jac, plane0, w1, w2, t0, steps);
            est.ts.resize(est.ratios.size());
            double t = t0;
            for (std::size_t i = 0; i < est.ts.size(); ++i, t *= 0.5) est.ts[i] = t;
            const fd::Extrapolated ex = fd::limit_to_zero(est.ratios);
            est.value = ex.value;
            est.error = ex.error;
            est.resamples = attempt;
            return est;
        } catch (const SampleError& err) {
            last_error = err.what();
        }
    }
    throw SampleError("limit_ratio_estimate: no usable family after resampling: " + last_error);
}

} // namespace curved
