// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_TENSOR_HPP
#define CURVED_TENSOR_HPP

#include <span>
#include <vector>

namespace curved {

// Dimensions are small (3..6); everything is stored dense and indexed
// with plain loops.  No sparsity, no symmetry-aware packing: the point
// of this layer is that every contraction can be read off the formula.

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 6;

void require_dim(int dim);           // throws std::invalid_argument outside [3,6]
void require_same_dim(int a, int b); // throws std::invalid_argument on mismatch

// Symmetric (0,2)-tensor.  set() mirrors, so values(i,j) == values(j,i)
// holds exactly, not merely up to roundoff.
class SymmetricBilinear {
public:
    SymmetricBilinear() = default;
    explicit SymmetricBilinear(int dim);

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return v_[i * dim_ + j]; }
    void set(int i, int j, double value) {
        v_[i * dim_ + j] = value;
        v_[j * dim_ + i] = value;
    }

    double apply(std::span<const double> x, std::span<const double> y) const;
    double trace_with(const SymmetricBilinear& g_inv) const;
    double max_abs() const;

private:
    int dim_ = 0;
    std::vector<double> v_;
};

// Dense (0,4)-tensor.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int dim);

    int dim() const { return dim_; }
    double operator()(int i, int j, int k, int l) const {
        return v_[((i * dim_ + j) * dim_ + k) * dim_ + l];
    }
    double& at(int i, int j, int k, int l) {
        return v_[((i * dim_ + j) * dim_ + k) * dim_ + l];
    }

    // T(x,y,z,w) by full contraction.
    double apply(std::span<const double> x, std::span<const double> y,
                 std::span<const double> z, std::span<const double> w) const;

    double max_abs() const;
    std::span<const double> flat() const { return v_; }
    std::span<double> flat() { return v_; }

private:
    int dim_ = 0;
    std::vector<double> v_;
};

// Dense (0,5)-tensor; slot 0 is the covariant-derivative direction when
// this holds nabla R.
class Tensor5 {
public:
    Tensor5() = default;
    explicit Tensor5(int dim);

    int dim() const { return dim_; }
    double operator()(int a, int i, int j, int k, int l) const {
        return v_[(((a * dim_ + i) * dim_ + j) * dim_ + k) * dim_ + l];
    }
    double& at(int a, int i, int j, int k, int l) {
        return v_[(((a * dim_ + i) * dim_ + j) * dim_ + k) * dim_ + l];
    }

    double max_abs() const;
    std::span<const double> flat() const { return v_; }

private:
    int dim_ = 0;
    std::vector<double> v_;
};

// pi1(x,y,z,u) = g(x,u)g(y,z) - g(x,z)g(y,u).
//
// This is the curvature tensor of the unit sphere in the sign
// convention used throughout (sectional curvature of the round unit
// sphere is +1), and the building block T = c*pi1 of constant-curvature
// tensors.
Tensor4 build_pi1(const SymmetricBilinear& g);

// phi(Q)(x,y,z,u) = g(x,u)Q(y,z) - g(x,z)Q(y,u) + g(y,z)Q(x,u) - g(y,u)Q(x,z).
//
// phi(g) == 2*pi1.  For symmetric Q the result is curvature-like.
Tensor4 build_phi(const SymmetricBilinear& g, const SymmetricBilinear& q);

// Max-norm violations of the curvature-like identities:
//   antisym_12:  T(x,y,z,u) + T(y,x,z,u)
//   cyclic:      T(x,y,z,u) + T(y,z,x,u) + T(z,x,y,u)
//   antisym_34:  T(x,y,z,u) + T(x,y,u,z)
//   pair:        T(x,y,z,u) - T(z,u,x,y)   (implied by the first three)
struct SymmetryCheck {
    double antisym_12 = 0.0;
    double cyclic = 0.0;
    double antisym_34 = 0.0;
    double pair = 0.0;

    double max_violation() const;
    bool pass(double tol) const { return max_violation() < tol; }
};

SymmetryCheck check_curvature_symmetries(const Tensor4& t);

// Ricci-type contraction S(y,z) = g^{ik} T(e_i, y, z, e_k) and the
// scalar tau = g^{yz} S(y,z).  For T = pi1 this gives S = (n-1)g,
// tau = n(n-1).
struct RicciContraction {
    SymmetricBilinear ricci;
    double scalar = 0.0;
};

RicciContraction contract_ricci(const Tensor4& t, const SymmetricBilinear& g_inv);

} // namespace curved

#endif
