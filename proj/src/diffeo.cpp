// Part of curvedcheck. BSD 3-Clause License.

#include "curved/diffeo.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace curved {

Diffeo::Diffeo(int dim, MapFn forward, JacFn jacobian, MapFn inverse)
    : dim_(dim),
      forward_(std::move(forward)),
      jacobian_(std::move(jacobian)),
      inverse_(std::move(inverse)) {
    if (dim < 1) throw std::invalid_argument("Diffeo: dimension must be positive");
    if (!forward_) throw std::invalid_argument("Diffeo: forward map is required");
    if (!jacobian_) throw std::invalid_argument("Diffeo: Jacobian oracle is required");
}

Diffeo Diffeo::identity(int dim) {
    auto fwd = [](std::span<const double> p) { return Vec(p.begin(), p.end()); };
    auto jac = [dim](std::span<const double>) {
        std::vector<double> j(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) j[static_cast<std::size_t>(i) * dim + i] = 1.0;
        return j;
    };
    return Diffeo(dim, fwd, jac, fwd);
}

Diffeo Diffeo::linear(int dim, std::vector<double> a) {
    if (a.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("Diffeo::linear: matrix size mismatch");
    auto fwd = [dim, a](std::span<const double> p) {
        Vec out(static_cast<std::size_t>(dim), 0.0);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out[i] += a[static_cast<std::size_t>(i) * dim + j] * p[j];
        return out;
    };
    auto jac = [a](std::span<const double>) { return a; };

    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = a[static_cast<std::size_t>(i) * dim + j];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    MapFn inv = nullptr;
    if (lu.isInvertible()) {
        Eigen::MatrixXd mi = lu.inverse();
        inv = [dim, mi](std::span<const double> q) {
            Vec out(static_cast<std::size_t>(dim), 0.0);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) out[i] += mi(i, j) * q[j];
            return out;
        };
    }
    return Diffeo(dim, fwd, jac, inv);
}

Diffeo Diffeo::from_forward(int dim, MapFn forward, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("Diffeo::from_forward: step must be positive");
    auto jac = [dim, forward, h](std::span<const double> p) {
        std::vector<double> j(static_cast<std::size_t>(dim) * dim, 0.0);
        Vec q(p.begin(), p.end());
        for (int col = 0; col < dim; ++col) {
            const double saved = q[col];
            q[col] = saved + h;
            Vec hi = forward(q);
            q[col] = saved - h;
            Vec lo = forward(q);
            q[col] = saved;
            for (int row = 0; row < dim; ++row)
                j[static_cast<std::size_t>(row) * dim + col] = (hi[row] - lo[row]) / (2.0 * h);
        }
        return j;
    };
    return Diffeo(dim, forward, jac, nullptr);
}

Vec Diffeo::apply(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("Diffeo::apply: point dimension mismatch");
    Vec out = forward_(p);
    if (static_cast<int>(out.size()) != dim_)
        throw std::runtime_error("Diffeo::apply: forward map returned wrong dimension");
    return out;
}

std::vector<double> Diffeo::jacobian(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("Diffeo::jacobian: point dimension mismatch");
    std::vector<double> j = jacobian_(p);
    if (j.size() != static_cast<std::size_t>(dim_) * dim_)
        throw std::runtime_error("Diffeo::jacobian: oracle returned wrong size");
    return j;
}

Vec Diffeo::push_vector(std::span<const double> p, std::span<const double> v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw std::invalid_argument("Diffeo::push_vector: vector dimension mismatch");
    const std::vector<double> j = jacobian(p);
    Vec out(static_cast<std::size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
            out[i] += j[static_cast<std::size_t>(i) * dim_ + k] * v[k];
    return out;
}

Vec Diffeo::apply_inverse(std::span<const double> q) const {
    if (!inverse_) throw std::logic_error("Diffeo: no inverse attached");
    if (static_cast<int>(q.size()) != dim_)
        throw std::invalid_argument("Diffeo::apply_inverse: point dimension mismatch");
    return inverse_(q);
}

} // namespace curved
