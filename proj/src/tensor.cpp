// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curved {

void require_dim(int dim) {
    if (dim < kMinDim || dim > kMaxDim)
        throw std::invalid_argument("dimension " + std::to_string(dim) +
                                    " outside supported range [3,6]");
}

void require_same_dim(int a, int b) {
    if (a != b)
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                    std::to_string(b));
}

SymmetricBilinear::SymmetricBilinear(int dim) : dim_(dim) {
    require_dim(dim);
    v_.assign(static_cast<size_t>(dim) * dim, 0.0);
}

double SymmetricBilinear::apply(std::span<const double> x, std::span<const double> y) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            s += (*this)(i, j) * x[i] * y[j];
    return s;
}

double SymmetricBilinear::trace_with(const SymmetricBilinear& g_inv) const {
    require_same_dim(dim_, g_inv.dim());
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            s += g_inv(i, j) * (*this)(i, j);
    return s;
}

double SymmetricBilinear::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

Tensor4::Tensor4(int dim) : dim_(dim) {
    require_dim(dim);
    v_.assign(static_cast<size_t>(dim) * dim * dim * dim, 0.0);
}

double Tensor4::apply(std::span<const double> x, std::span<const double> y,
                      std::span<const double> z, std::span<const double> w) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l)
                    s += (*this)(i, j, k, l) * x[i] * y[j] * z[k] * w[l];
    return s;
}

double Tensor4::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

Tensor5::Tensor5(int dim) : dim_(dim) {
    require_dim(dim);
    v_.assign(static_cast<size_t>(dim) * dim * dim * dim * dim, 0.0);
}

double Tensor5::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

Tensor4 build_pi1(const SymmetricBilinear& g) {
    require_dim(g.dim());
    int n = g.dim();
    Tensor4 t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    t.at(i, j, k, l) = g(i, l) * g(j, k) - g(i, k) * g(j, l);
    return t;
}

Tensor4 build_phi(const SymmetricBilinear& g, const SymmetricBilinear& q) {
    require_dim(g.dim());
    require_same_dim(g.dim(), q.dim());
    int n = g.dim();
    Tensor4 t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    t.at(i, j, k, l) = g(i, l) * q(j, k) - g(i, k) * q(j, l) +
                                       g(j, k) * q(i, l) - g(j, l) * q(i, k);
    return t;
}

double SymmetryCheck::max_violation() const {
    return std::max(std::max(antisym_12, cyclic), std::max(antisym_34, pair));
}

SymmetryCheck check_curvature_symmetries(const Tensor4& t) {
    int n = t.dim();
    SymmetryCheck c;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    c.antisym_12 = std::max(c.antisym_12, std::abs(t(i, j, k, l) + t(j, i, k, l)));
                    c.antisym_34 = std::max(c.antisym_34, std::abs(t(i, j, k, l) + t(i, j, l, k)));
                    c.cyclic = std::max(
                        c.cyclic, std::abs(t(i, j, k, l) + t(j, k, i, l) + t(k, i, j, l)));
                    c.pair = std::max(c.pair, std::abs(t(i, j, k, l) - t(k, l, i, j)));
                }
    return c;
}

namespace {

// Determinant by Gaussian elimination with partial pivoting; n <= 6.
double small_det(const SymmetricBilinear& m) {
    int n = m.dim();
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[i * n + j] = m(i, j);
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[c * n + j]);
            det = -det;
        }
        det *= a[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

} // namespace

RicciContraction contract_ricci(const Tensor4& t, const SymmetricBilinear& g_inv) {
    require_same_dim(t.dim(), g_inv.dim());
    int n = t.dim();
    bool all_finite = true;
    for (int i = 0; i < n && all_finite; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(g_inv(i, j))) {
                all_finite = false;
                break;
            }
    double scale = g_inv.max_abs();
    if (!all_finite || scale == 0.0 ||
        std::abs(small_det(g_inv)) < std::pow(1e-12 * scale, n))
        throw std::invalid_argument("contract_ricci: singular or non-finite inverse metric");

    RicciContraction out;
    out.ricci = SymmetricBilinear(n);
    for (int y = 0; y < n; ++y)
        for (int z = y; z < n; ++z) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    s += g_inv(i, k) * t(i, y, z, k);
            out.ricci.set(y, z, s);
        }
    out.scalar = out.ricci.trace_with(g_inv);
    return out;
}

} // namespace curved
