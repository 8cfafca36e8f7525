// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/chart.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace curved {

bool Box::contains(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (p[i] < axes[i][0] || p[i] > axes[i][1]) return false;
    return true;
}

Box Box::cube(int dim, double lo, double hi) {
    Box b;
    b.axes.assign(dim, {lo, hi});
    return b;
}

std::vector<Vec> sample_domain_points(const Box& box, int count, std::uint64_t seed,
                                      double margin) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() {
        return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    };
    std::vector<Vec> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vec p(box.dim());
        for (int i = 0; i < box.dim(); ++i) {
            double lo = box.axes[i][0] + margin * box.width(i);
            double hi = box.axes[i][1] - margin * box.width(i);
            p[i] = lo + (hi - lo) * unit();
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

const char* derivative_path_name(DerivativePath p) {
    return p == DerivativePath::Symbolic ? "symbolic" : "finite_difference";
}

// ---------------------------------------------------------------------------
// Symbolic source

SymbolicMetricSource::SymbolicMetricSource(MetricGrid grid, int order)
    : grid_(std::move(grid)), order_(order) {
    int n = grid_.dim;
    if (order_ < 1) order_ = 1;
    grid_.components.resize(static_cast<size_t>(n) * n);
    for (auto& comp : grid_.components)
        if (!comp) comp = Expr::constant(0.0);
    size_t ncomp = static_cast<size_t>(n) * n;
    d1_.resize(ncomp);
    d2_.resize(ncomp);
    d3_.resize(ncomp);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            size_t c = static_cast<size_t>(i) * n + j;
            const ExprPtr& e = grid_.at(i, j);
            d1_[c].resize(n);
            for (int a = 0; a < n; ++a) d1_[c][a] = e->diff(a);
            if (order_ >= 2) {
                d2_[c].resize(static_cast<size_t>(n) * n);
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b)
                        d2_[c][a * n + b] = d1_[c][a]->diff(b);
            }
            if (order_ >= 3) {
                d3_[c].resize(static_cast<size_t>(n) * n * n);
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b)
                        for (int cc = b; cc < n; ++cc)
                            d3_[c][(a * n + b) * n + cc] = d2_[c][a * n + b]->diff(cc);
            }
            // Mirror the shared trees onto the lower triangle.
            size_t cm = static_cast<size_t>(j) * n + i;
            d1_[cm] = d1_[c];
            d2_[cm] = d2_[c];
            d3_[cm] = d3_[c];
        }
}

double SymbolicMetricSource::value(int i, int j, std::span<const double> p) const {
    return comp(i, j)->eval(p);
}

double SymbolicMetricSource::d1(int i, int j, int a, std::span<const double> p) const {
    return d1_[static_cast<size_t>(i) * grid_.dim + j][a]->eval(p);
}

double SymbolicMetricSource::d2(int i, int j, int a, int b, std::span<const double> p) const {
    if (a > b) std::swap(a, b);
    return d2_[static_cast<size_t>(i) * grid_.dim + j][a * grid_.dim + b]->eval(p);
}

double SymbolicMetricSource::d3(int i, int j, int a, int b, int c,
                                std::span<const double> p) const {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return d3_[static_cast<size_t>(i) * grid_.dim + j][(a * grid_.dim + b) * grid_.dim + c]->eval(p);
}

// ---------------------------------------------------------------------------
// Finite-difference source

FiniteDifferenceMetricSource::FiniteDifferenceMetricSource(int dim,
                                                           std::vector<fd::ScalarFn> components,
                                                           Box domain, double step_scale)
    : dim_(dim), components_(std::move(components)), domain_(std::move(domain)),
      step_scale_(step_scale) {
    min_width_ = domain_.width(0);
    for (int i = 1; i < domain_.dim(); ++i) min_width_ = std::min(min_width_, domain_.width(i));
}

double FiniteDifferenceMetricSource::step(int order) const {
    double s = step_scale_ * min_width_;
    for (int k = 1; k < order; ++k) s *= 10.0;
    return s;
}

double FiniteDifferenceMetricSource::value(int i, int j, std::span<const double> p) const {
    return comp(i, j)(p);
}

double FiniteDifferenceMetricSource::d1(int i, int j, int a, std::span<const double> p) const {
    int axes[1] = {a};
    return fd::mixed_derivative(comp(i, j), p, axes, step(1));
}

double FiniteDifferenceMetricSource::d2(int i, int j, int a, int b,
                                        std::span<const double> p) const {
    int axes[2] = {a, b};
    return fd::mixed_derivative(comp(i, j), p, axes, step(2));
}

double FiniteDifferenceMetricSource::d3(int i, int j, int a, int b, int c,
                                        std::span<const double> p) const {
    int axes[3] = {a, b, c};
    return fd::mixed_derivative(comp(i, j), p, axes, step(3));
}

// ---------------------------------------------------------------------------
// Chart

namespace {

Eigen::MatrixXd metric_matrix(const MetricSource& src, std::span<const double> p) {
    int n = src.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = src.value(i, j, p);
    return m;
}

Signature matrix_signature(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double scale = 0.0;
    for (int i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev[i]));
    if (scale == 0.0)
        throw SingularMetricError("metric is identically zero at the probe point");
    Signature s;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) < 1e-10 * scale)
            throw SingularMetricError(
                "metric is degenerate: eigenvalue " + std::to_string(ev[i]) +
                " below 1e-10 of the spectral radius " + std::to_string(scale));
        (ev[i] < 0.0 ? s.negative : s.positive)++;
    }
    return s;
}

} // namespace

MetricChart::MetricChart(MetricGrid grid, Box domain, int derivative_order)
    : dim_(grid.dim), domain_(std::move(domain)), path_(DerivativePath::Symbolic) {
    require_dim(dim_);
    if (domain_.dim() != dim_)
        throw std::invalid_argument("domain dimension does not match metric dimension");
    for (const auto& comp : grid.components)
        if (comp && comp->min_dimension() > dim_)
            throw std::invalid_argument("metric component refers to a coordinate beyond dim");
    grid_ = grid;
    source_ = std::make_shared<SymbolicMetricSource>(std::move(grid),
                                                     std::max(derivative_order, 3));
    validate_signature();
}

MetricChart::MetricChart(int dim, std::vector<fd::ScalarFn> components, Box domain,
                         double step_scale)
    : dim_(dim), domain_(std::move(domain)), path_(DerivativePath::FiniteDifference) {
    require_dim(dim_);
    if (domain_.dim() != dim_)
        throw std::invalid_argument("domain dimension does not match metric dimension");
    if (static_cast<int>(components.size()) != dim_ * dim_)
        throw std::invalid_argument("expected dim*dim component evaluators");
    source_ = std::make_shared<FiniteDifferenceMetricSource>(dim_, std::move(components),
                                                             domain_, step_scale);
    validate_signature();
}

MetricChart MetricChart::finite_difference_view(const MetricChart& chart, double step_scale) {
    int n = chart.dim();
    std::vector<fd::ScalarFn> comps;
    comps.reserve(static_cast<size_t>(n) * n);
    auto src = chart.source_; // keep the original source alive in the closures
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            comps.push_back([src, i, j](std::span<const double> p) {
                return src->value(i, j, p);
            });
    return MetricChart(n, std::move(comps), chart.domain(), step_scale);
}

void MetricChart::validate_signature() {
    auto probes = sample_domain_points(domain_, 16, 0xC0FFEEu, 0.05);
    bool first = true;
    for (const auto& p : probes) {
        Signature s = matrix_signature(metric_matrix(*source_, p));
        if (first) {
            signature_ = s;
            first = false;
        } else if (!(s == signature_)) {
            throw SignatureError("metric signature is not constant over the domain: (" +
                                 std::to_string(signature_.negative) + "," +
                                 std::to_string(signature_.positive) + ") vs (" +
                                 std::to_string(s.negative) + "," + std::to_string(s.positive) +
                                 ")");
        }
    }
}

void MetricChart::require_inside(std::span<const double> p) const {
    if (!domain_.contains(p)) {
        std::string msg = "point (";
        for (size_t i = 0; i < p.size(); ++i) {
            if (i) msg += ", ";
            msg += std::to_string(p[i]);
        }
        msg += ") is outside the chart domain";
        throw OutsideDomainError(msg);
    }
}

SymmetricBilinear MetricChart::metric_at(std::span<const double> p) const {
    require_inside(p);
    SymmetricBilinear g(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            g.set(i, j, source_->value(i, j, p));
    return g;
}

SymmetricBilinear MetricChart::inverse_metric_at(std::span<const double> p) const {
    require_inside(p);
    Eigen::MatrixXd m = metric_matrix(*source_, p);
    Eigen::MatrixXd mi = m.inverse();
    if ((m * mi - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-6)
        throw SingularMetricError("metric matrix is numerically singular at the point");
    SymmetricBilinear g(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            g.set(i, j, 0.5 * (mi(i, j) + mi(j, i)));
    return g;
}

Signature signature_at(const MetricChart& chart, std::span<const double> p) {
    chart.require_inside(p);
    return matrix_signature(metric_matrix(chart.source(), p));
}

double Rank3::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------------------
// Curvature pipeline
//
// All loops below are over 3..6 values per index; clarity over cleverness.

namespace {

struct PointData {
    int n = 0;
    std::vector<double> G, Gi;       // g_ij, g^ij
    std::vector<double> dG;          // dG[a][i][j] = d_a g_ij
    std::vector<double> d2G;         // d2G[a][b][i][j]
    std::vector<double> d3G;         // d3G[a][b][c][i][j]
    std::vector<double> dGi;         // d_a g^ij
    std::vector<double> d2Gi;        // d_a d_b g^ij
    std::vector<double> Gamma;       // Gamma[l][i][j]
    std::vector<double> dGamma;      // dGamma[a][l][i][j]
    std::vector<double> d2Gamma;     // d2Gamma[a][b][l][i][j]
    std::vector<double> Rup;         // Rup[l][k][i][j]: R(e_i,e_j)e_k = Rup^l e_l
    std::vector<double> dRup;        // dRup[a][l][k][i][j]

    double g(int i, int j) const { return G[i * n + j]; }
    double gi(int i, int j) const { return Gi[i * n + j]; }
    double dg(int a, int i, int j) const { return dG[(a * n + i) * n + j]; }
    double d2g(int a, int b, int i, int j) const { return d2G[((a * n + b) * n + i) * n + j]; }
    double d3g(int a, int b, int c, int i, int j) const {
        return d3G[(((a * n + b) * n + c) * n + i) * n + j];
    }
    double dgi(int a, int i, int j) const { return dGi[(a * n + i) * n + j]; }
    double d2gi(int a, int b, int i, int j) const { return d2Gi[((a * n + b) * n + i) * n + j]; }
    double gamma(int l, int i, int j) const { return Gamma[(l * n + i) * n + j]; }
    double dgamma(int a, int l, int i, int j) const { return dGamma[((a * n + l) * n + i) * n + j]; }
    double d2gamma(int a, int b, int l, int i, int j) const {
        return d2Gamma[(((a * n + b) * n + l) * n + i) * n + j];
    }
    double rup(int l, int k, int i, int j) const { return Rup[((l * n + k) * n + i) * n + j]; }
    double drup(int a, int l, int k, int i, int j) const {
        return dRup[(((a * n + l) * n + k) * n + i) * n + j];
    }

    // 2 Gamma_{kij} (first kind): A(k,i,j) = d_i g_jk + d_j g_ik - d_k g_ij
    double A(int k, int i, int j) const { return dg(i, j, k) + dg(j, i, k) - dg(k, i, j); }
    double dA(int a, int k, int i, int j) const {
        return d2g(a, i, j, k) + d2g(a, j, i, k) - d2g(a, k, i, j);
    }
    double d2A(int a, int b, int k, int i, int j) const {
        return d3g(a, b, i, j, k) + d3g(a, b, j, i, k) - d3g(a, b, k, i, j);
    }
};

void fill_order2(PointData& d, const MetricSource& src, std::span<const double> p) {
    int n = src.dim();
    d.n = n;
    d.G.resize(n * n);
    d.dG.resize(n * n * n);
    d.d2G.resize(static_cast<size_t>(n) * n * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = src.value(i, j, p);
            d.G[i * n + j] = v;
        }
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = src.d1(i, j, a, p);
                d.dG[(a * n + i) * n + j] = v;
                d.dG[(a * n + j) * n + i] = v;
            }
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double v = src.d2(i, j, a, b, p);
                    d.d2G[((a * n + b) * n + i) * n + j] = v;
                    d.d2G[((a * n + b) * n + j) * n + i] = v;
                    d.d2G[((b * n + a) * n + i) * n + j] = v;
                    d.d2G[((b * n + a) * n + j) * n + i] = v;
                }

    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = d.g(i, j);
    Eigen::MatrixXd mi = m.inverse();
    if ((m * mi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-6)
        throw SingularMetricError("metric matrix is numerically singular at the point");
    d.Gi.resize(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d.Gi[i * n + j] = 0.5 * (mi(i, j) + mi(j, i));

    // d_a g^{lk} = -g^{lp} (d_a g_{pq}) g^{qk}
    d.dGi.resize(n * n * n);
    for (int a = 0; a < n; ++a)
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int pq = 0; pq < n; ++pq)
                    for (int q = 0; q < n; ++q)
                        s -= d.gi(l, pq) * d.dg(a, pq, q) * d.gi(q, k);
                d.dGi[(a * n + l) * n + k] = s;
            }

    d.Gamma.resize(n * n * n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += d.gi(l, k) * d.A(k, i, j);
                d.Gamma[(l * n + i) * n + j] = 0.5 * s;
                d.Gamma[(l * n + j) * n + i] = 0.5 * s;
            }

    d.dGamma.resize(static_cast<size_t>(n) * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k)
                        s += d.dgi(a, l, k) * d.A(k, i, j) + d.gi(l, k) * d.dA(a, k, i, j);
                    d.dGamma[((a * n + l) * n + i) * n + j] = 0.5 * s;
                    d.dGamma[((a * n + l) * n + j) * n + i] = 0.5 * s;
                }

    // R(e_i,e_j)e_k = Rup^l_{kij} e_l
    d.Rup.resize(static_cast<size_t>(n) * n * n * n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = d.dgamma(i, l, j, k) - d.dgamma(j, l, i, k);
                    for (int m2 = 0; m2 < n; ++m2)
                        s += d.gamma(l, i, m2) * d.gamma(m2, j, k) -
                             d.gamma(l, j, m2) * d.gamma(m2, i, k);
                    d.Rup[((l * n + k) * n + i) * n + j] = s;
                }
}

void fill_order3(PointData& d, const MetricSource& src, std::span<const double> p) {
    int n = d.n;
    d.d3G.resize(static_cast<size_t>(n) * n * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int c = b; c < n; ++c)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double v = src.d3(i, j, a, b, c, p);
                        int perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                                           {b, c, a}, {c, a, b}, {c, b, a}};
                        for (auto& pr : perms) {
                            d.d3G[(((pr[0] * n + pr[1]) * n + pr[2]) * n + i) * n + j] = v;
                            d.d3G[(((pr[0] * n + pr[1]) * n + pr[2]) * n + j) * n + i] = v;
                        }
                    }

    // d_a d_b g^{lk}
    d.d2Gi.resize(static_cast<size_t>(n) * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int pq = 0; pq < n; ++pq)
                        for (int q = 0; q < n; ++q)
                            s -= d.dgi(b, l, pq) * d.dg(a, pq, q) * d.gi(q, k) +
                                 d.gi(l, pq) * d.d2g(a, b, pq, q) * d.gi(q, k) +
                                 d.gi(l, pq) * d.dg(a, pq, q) * d.dgi(b, q, k);
                    d.d2Gi[((a * n + b) * n + l) * n + k] = s;
                }

    d.d2Gamma.resize(static_cast<size_t>(n) * n * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k)
                            s += d.d2gi(a, b, l, k) * d.A(k, i, j) +
                                 d.dgi(a, l, k) * d.dA(b, k, i, j) +
                                 d.dgi(b, l, k) * d.dA(a, k, i, j) +
                                 d.gi(l, k) * d.d2A(a, b, k, i, j);
                        d.d2Gamma[(((a * n + b) * n + l) * n + i) * n + j] = 0.5 * s;
                        d.d2Gamma[(((a * n + b) * n + l) * n + j) * n + i] = 0.5 * s;
                    }

    d.dRup.resize(static_cast<size_t>(n) * n * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double s = d.d2gamma(a, i, l, j, k) - d.d2gamma(a, j, l, i, k);
                        for (int m2 = 0; m2 < n; ++m2)
                            s += d.dgamma(a, l, i, m2) * d.gamma(m2, j, k) +
                                 d.gamma(l, i, m2) * d.dgamma(a, m2, j, k) -
                                 d.dgamma(a, l, j, m2) * d.gamma(m2, i, k) -
                                 d.gamma(l, j, m2) * d.dgamma(a, m2, i, k);
                        d.dRup[(((a * n + l) * n + k) * n + i) * n + j] = s;
                    }
}

Tensor4 riemann_from(const PointData& d) {
    int n = d.n;
    Tensor4 r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += d.g(l, m) * d.rup(m, k, i, j);
                    r.at(i, j, k, l) = s;
                }
    return r;
}

Tensor5 nabla_r_from(const PointData& d) {
    int n = d.n;
    Tensor4 r4 = riemann_from(d);
    Tensor5 nr(n);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        // coordinate derivative of R_{ijkl}
                        double s = 0.0;
                        for (int m = 0; m < n; ++m)
                            s += d.dg(a, l, m) * d.rup(m, k, i, j) +
                                 d.g(l, m) * d.drup(a, m, k, i, j);
                        // connection corrections, one per slot
                        for (int m = 0; m < n; ++m)
                            s -= d.gamma(m, a, i) * r4(m, j, k, l) +
                                 d.gamma(m, a, j) * r4(i, m, k, l) +
                                 d.gamma(m, a, k) * r4(i, j, m, l) +
                                 d.gamma(m, a, l) * r4(i, j, k, m);
                        nr.at(a, i, j, k, l) = s;
                    }
    return nr;
}

SymmetricBilinear to_bilinear(const std::vector<double>& flat, int n) {
    SymmetricBilinear b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            b.set(i, j, flat[i * n + j]);
    return b;
}

} // namespace

CurvatureBundle curvature_bundle(const MetricChart& chart, std::span<const double> p) {
    chart.require_inside(p);
    int n = chart.dim();
    PointData d;
    fill_order2(d, chart.source(), p);

    CurvatureBundle out;
    out.point.assign(p.begin(), p.end());
    out.path = chart.path();
    out.metric = to_bilinear(d.G, n);
    out.inverse_metric = to_bilinear(d.Gi, n);
    out.christoffel = ChristoffelSymbols(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.christoffel.at(l, i, j) = d.gamma(l, i, j);
    out.riemann = riemann_from(d);

    RicciContraction rc = contract_ricci(out.riemann, out.inverse_metric);
    out.ricci = rc.ricci;
    out.scalar = rc.scalar;
    out.traceless_ricci = SymmetricBilinear(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            out.traceless_ricci.set(i, j, out.ricci(i, j) - out.scalar / n * out.metric(i, j));

    if (n >= 4) {
        Tensor4 pi1 = build_pi1(out.metric);
        Tensor4 phi_s = build_phi(out.metric, out.ricci);
        Tensor4 weyl(n);
        double cpi = out.scalar / (static_cast<double>(n - 1) * (n - 2));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        weyl.at(i, j, k, l) = out.riemann(i, j, k, l) -
                                              phi_s(i, j, k, l) / (n - 2) +
                                              cpi * pi1(i, j, k, l);
        out.weyl = std::move(weyl);
    } else {
        // n == 3: conformal flatness is governed by the antisymmetrised
        // covariant derivative of L = ricci - scalar/(2(n-1)) g.
        fill_order3(d, chart.source(), p);
        Tensor5 nr = nabla_r_from(d);
        // nabla_a S_{jk} = g^{il} (nabla R)(a,i,j,k,l); nabla_a tau likewise.
        std::vector<double> dS(static_cast<size_t>(n) * n * n, 0.0);
        std::vector<double> dTau(n, 0.0);
        for (int a = 0; a < n; ++a) {
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int l = 0; l < n; ++l)
                            s += d.gi(i, l) * nr(a, i, j, k, l);
                    dS[(a * n + j) * n + k] = s;
                }
            double t = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    t += d.gi(j, k) * dS[(a * n + j) * n + k];
            dTau[a] = t;
        }
        double denom = 2.0 * (n - 1);
        Rank3 cotton(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    cotton.at(i, j, k) =
                        (dS[(i * n + j) * n + k] - dTau[i] / denom * out.metric(j, k)) -
                        (dS[(j * n + i) * n + k] - dTau[j] / denom * out.metric(i, k));
        out.cotton = std::move(cotton);
    }
    return out;
}

Tensor5 covariant_derivative_R(const MetricChart& chart, std::span<const double> p) {
    chart.require_inside(p);
    PointData d;
    fill_order2(d, chart.source(), p);
    fill_order3(d, chart.source(), p);
    return nabla_r_from(d);
}

double second_bianchi_violation(const Tensor5& nr) {
    int n = nr.dim();
    double m = 0.0;
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        m = std::max(m, std::abs(nr(a, i, j, k, l) + nr(i, j, a, k, l) +
                                                 nr(j, a, i, k, l)));
    return m;
}

} // namespace curved
