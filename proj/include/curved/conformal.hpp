// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_CONFORMAL_HPP
#define CURVED_CONFORMAL_HPP

#include "curved/chart.hpp"
#include "curved/diffeo.hpp"
#include "curved/planes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curved {

// Scalar function on a chart domain with exact first and second
// derivatives from the expression tree.
class ScalarField {
public:
    ScalarField(ExprPtr expr, int dim);
    static ScalarField constant(double k, int dim);

    int dim() const { return dim_; }
    const ExprPtr& expr() const { return expr_; }
    double value(std::span<const double> p) const;
    Vec gradient(std::span<const double> p) const;            // partial derivatives
    std::vector<double> hessian(std::span<const double> p) const; // row-major, symmetric

private:
    ExprPtr expr_;
    int dim_;
    std::vector<ExprPtr> grad_;
    std::vector<ExprPtr> hess_; // upper triangle, row-major
};

// Second-order conformal deformation tensor of g under gbar = e^{2 sigma} g:
//   Q(X,Y) = (X sigma)(Y sigma) - Hess sigma(X,Y) - 1/2 |grad sigma|^2 g(X,Y)
// with Hess the covariant Hessian and the norm taken in g.  The curvature
// tensors are then related by Rbar = e^{2 sigma} (R + phi(Q)).
SymmetricBilinear conformal_Q(const CurvatureBundle& bundle, const ScalarField& sigma);

struct ConformalChange {
    MetricChart bar;        // chart with components e^{2 sigma} g_ij
    double verify_residual; // max relative defect of Rbar = e^{2s}(R + phi(Q))
    int verify_points;
};

// Builds the conformally changed chart and cross-checks the curvature
// relation at sampled points against the independently computed curvature
// of the new chart.  Requires a symbolic source chart.
ConformalChange conformal_change(const MetricChart& chart, const ScalarField& sigma,
                                 int verify_points = 5, std::uint64_t seed = 2026);

enum class MapClass { Isometry, Homothety, Conformal, General };
enum class GradientClass { Zero, Isotropic, Nonnull, Mixed };

const char* map_class_name(MapClass c);
const char* gradient_class_name(GradientClass c);

// Pullback comparison of f: (source, g) -> (target, gbar).  The pulled
// back metric (f* gbar)(p) = J^T gbar(f(p)) J is tested for pointwise
// proportionality to g; sigma_hat = log|det f*gbar / det g| / (2n).
struct PullbackReport {
    MapClass map_class = MapClass::General;
    double lambda = 1.0;     // homothety factor, f* gbar = lambda g
    bool sign_flip = false;  // proportionality with negative factor
    GradientClass gradient_class = GradientClass::Zero; // for Conformal
    double max_residual = 0.0;  // relative proportionality defect
    double sigma_spread = 0.0;  // max - min of sigma_hat over samples
    std::vector<double> sigma_hat;
    std::vector<Vec> points;
    bool cone_preserved = false; // isotropic cone mapped into the cone
    double cone_residual = 0.0;
    int cone_samples = 0;
};

PullbackReport pullback_classify(const Diffeo& map, const MetricChart& source,
                                 const MetricChart& target, int samples = 12,
                                 double tol = 1e-6, std::uint64_t seed = 7);

// Residual of the degenerate-plane curvature conditions for the conformal
// pair (g, e^{2 sigma} g):
//   Weak:   Rbar(x,xi,xi,x) = e^{4 sigma} R(x,xi,xi,x)
//   Strong: (e^{2 sigma} - 1) R(xi,eta,eta,xi) = 0
// normalized by the curvature magnitude and basis norms.
struct DegenerateConditionResult {
    PlaneKind kind = PlaneKind::WeaklyDegenerate;
    double residual = 0.0;
    bool pass = false;
    double tol = 0.0;
    int points = 0;
    int planes_per_point = 0;
};

DegenerateConditionResult degenerate_condition_check(const MetricChart& source,
                                                     const ScalarField& sigma, PlaneKind kind,
                                                     int points, int planes_per_point,
                                                     double tol, std::uint64_t seed);

// Checks Rbar = e^{4 sigma} { R + (taubar - tau)/(n(n-1)) pi1 } at sampled
// points, the tensor identity that follows from the weak-plane condition.
// The weak-plane condition is verified first; when it fails the result
// reports precondition_ok = false and the identity is not evaluated.
struct ConformalRelationResult {
    bool precondition_ok = false;
    double precondition_residual = 0.0;
    double residual = 0.0;
    bool pass = false;
    double tol = 0.0;
    int points = 0;
};

ConformalRelationResult verify_conformal_relation(const MetricChart& source,
                                                  const ScalarField& sigma, int points,
                                                  double tol, std::uint64_t seed);

} // namespace curved

#endif
