// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/finite_difference.hpp"

#include <cmath>
#include <stdexcept>

namespace curved::fd {

namespace {

double plain_central(const ScalarFn& f, std::span<const double> p, int axis, double h) {
    std::vector<double> q(p.begin(), p.end());
    q[axis] = p[axis] + h;
    double hi = f(q);
    q[axis] = p[axis] - h;
    double lo = f(q);
    return (hi - lo) / (2.0 * h);
}

} // namespace

double central_derivative(const ScalarFn& f, std::span<const double> p, int axis, double h) {
    double d_h = plain_central(f, p, axis, h);
    double d_h2 = plain_central(f, p, axis, 0.5 * h);
    return (4.0 * d_h2 - d_h) / 3.0;
}

double mixed_derivative(const ScalarFn& f, std::span<const double> p,
                        std::span<const int> axes, double h) {
    if (axes.empty()) return f(p);
    if (axes.size() == 1) return central_derivative(f, p, axes[0], h);
    std::span<const int> rest = axes.subspan(1);
    ScalarFn inner = [&](std::span<const double> q) {
        return mixed_derivative(f, q, rest, h);
    };
    return central_derivative(inner, p, axes[0], h);
}

Extrapolated limit_to_zero(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("limit_to_zero needs at least two samples");
    size_t n = values.size();
    std::vector<std::vector<double>> t(n);
    for (size_t k = 0; k < n; ++k) {
        t[k].resize(k + 1);
        t[k][0] = values[k];
        for (size_t m = 1; m <= k; ++m) {
            double factor = std::pow(2.0, static_cast<double>(m)) - 1.0;
            t[k][m] = t[k][m - 1] + (t[k][m - 1] - t[k - 1][m - 1]) / factor;
        }
    }
    Extrapolated out;
    out.value = t[n - 1][n - 1];
    out.error = std::abs(t[n - 1][n - 1] - t[n - 2][n - 2]);
    return out;
}

} // namespace curved::fd
