// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_DIFFEO_HPP
#define CURVED_DIFFEO_HPP

#include "curved/chart.hpp"

#include <functional>
#include <vector>

namespace curved {

// A differentiable map between chart domains, with a Jacobian oracle.
// The Jacobian is stored row-major: jac[i*dim+j] = d f^i / d x^j, so the
// pushforward of a tangent vector v at p is J(p) * v.
class Diffeo {
public:
    using MapFn = std::function<Vec(std::span<const double>)>;
    using JacFn = std::function<std::vector<double>(std::span<const double>)>;

    Diffeo(int dim, MapFn forward, JacFn jacobian, MapFn inverse = nullptr);

    static Diffeo identity(int dim);
    // x -> A x for a dim x dim row-major matrix A (inverse attached when
    // A is invertible).
    static Diffeo linear(int dim, std::vector<double> a);
    // Black-box map; Jacobian by central differences with step h.
    static Diffeo from_forward(int dim, MapFn forward, double h = 1e-6);

    int dim() const { return dim_; }
    Vec apply(std::span<const double> p) const;
    std::vector<double> jacobian(std::span<const double> p) const; // row-major
    Vec push_vector(std::span<const double> p, std::span<const double> v) const;
    bool has_inverse() const { return static_cast<bool>(inverse_); }
    Vec apply_inverse(std::span<const double> q) const;

private:
    int dim_;
    MapFn forward_;
    JacFn jacobian_;
    MapFn inverse_;
};

} // namespace curved

#endif
