// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_FINITE_DIFFERENCE_HPP
#define CURVED_FINITE_DIFFERENCE_HPP

#include <functional>
#include <span>
#include <vector>

namespace curved::fd {

using ScalarFn = std::function<double(std::span<const double>)>;

struct Extrapolated {
    double value = 0.0;
    double error = 0.0; // difference of the last two tableau diagonals
};

// Central difference along one axis with one Richardson level:
// (4 D(h/2) - D(h)) / 3, error O(h^4).  Four function evaluations.
double central_derivative(const ScalarFn& f, std::span<const double> p, int axis, double h);

// Mixed partial derivative via nested central differences.  `axes`
// lists the differentiation directions (order <= 3 in practice); each
// nesting level uses the same step.  The step should grow with the
// order; callers pick h ~ width * 1e-4 * 10^(order-1).
double mixed_derivative(const ScalarFn& f, std::span<const double> p,
                        std::span<const int> axes, double h);

// Extrapolates r(t) -> L as t -> 0+ from samples r(t_k), t_k = t0*2^-k,
// assuming an expansion L + c1 t + c2 t^2 + ...  This is a Neville
// tableau in t; entry [k][m] eliminates the t^m term:
//   T[k][m] = T[k][m-1] + (T[k][m-1] - T[k-1][m-1]) / (2^m - 1).
Extrapolated limit_to_zero(std::span<const double> values);

} // namespace curved::fd

#endif
