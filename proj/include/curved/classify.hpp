// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_CLASSIFY_HPP
#define CURVED_CLASSIFY_HPP

#include "curved/chart.hpp"
#include "curved/planes.hpp"
#include "curved/tensor.hpp"

#include <cstdint>
#include <string>

namespace curved {

// Best constant c for T ~ c * pi1(g), with the max-norm residual of the fit.
struct ConstantFit {
    double c = 0.0;
    double residual = 0.0; // max |T - c pi1|
};

ConstantFit fit_c_pi1(const Tensor4& t, const SymmetricBilinear& g);

// Checks T(x,y,y,x) = 0 over sampled degenerate planes of the given kind.
// Values are normalized by |T| and the Euclidean basis norms, so `pass`
// means: max |T(x,y,y,x)| < tol * |T| * (|x| |y|)^2 over the sample.
struct VanishingTest {
    bool pass = false;
    double max_normalized = 0.0;
    double tol = 0.0;
    int samples = 0;
    TangentPlane worst;
};

VanishingTest degenerate_vanishing_test(const Tensor4& t, const SymmetricBilinear& g,
                                        PlaneKind kind, int samples, double tol,
                                        std::uint64_t seed);

// Checks R(e_a, e_b, e_c, e_d) = 0 over pairwise-distinct members of
// randomized pseudo-orthonormal frames (the dimension >= 4 hypothesis of
// the orthonormal-quadruple criterion for conformal flatness).
struct QuadrupleTest {
    bool pass = false;
    double max_normalized = 0.0;
    double tol = 0.0;
    int frames = 0;
};

QuadrupleTest orthonormal_quadruple_test(const Tensor4& riemann, const SymmetricBilinear& g,
                                         int frames, double tol, std::uint64_t seed);

// Fit of R = (N - H) phi(B) + H pi1 with B = V^flat (x) V^flat, the
// curvature model with distinguished unit direction V: K = H on planes
// orthogonal to V and K = N on planes containing V.
enum class QuasiStatus {
    Fitted,              // two-eigenvalue Ricci pattern, model fit below
    ConstantCurvature,   // isotropic Ricci, H = N = c, V undetermined
    NotQuasiConstant,    // eigenvalue pattern or residual rules the model out
    NonDiagonalizable,   // Ricci operator defective or complex spectrum
    IsotropicEigenvector // distinguished direction has g(V,V) ~ 0
};

const char* quasi_status_name(QuasiStatus s);

struct QuasiFit {
    QuasiStatus status = QuasiStatus::NotQuasiConstant;
    double H = 0.0;
    double N = 0.0;
    double eps = 0.0; // g(V,V) after normalization, +1 or -1
    Vec V;            // empty when undetermined
    double residual = 0.0; // max |R - (N-H) phi(B) - H pi1|
    double lambda_v = 0.0;
    double lambda_perp = 0.0;
};

QuasiFit fit_quasi_constant(const Tensor4& riemann, const SymmetricBilinear& g,
                            const SymmetricBilinear& g_inv, double tol = 1e-6);

// Recurrence structure of nabla R at a point:
//   Recurrent        nabla R = alpha (x) R with nonzero alpha
//   Symmetric        nabla R = 0, no covector annihilates R cyclically
//   SymmetricKnStar  nabla R = 0 and some alpha != 0 satisfies
//                    alpha(X) R(Y,Z,.,.) + alpha(Y) R(Z,X,.,.)
//                                        + alpha(Z) R(X,Y,.,.) = 0
//   Flat             R = 0
//   None             no recurrence structure within tolerance
enum class RecurrenceMode { Flat, Recurrent, SymmetricKnStar, Symmetric, None };

const char* recurrence_mode_name(RecurrenceMode m);

struct RecurrenceFit {
    RecurrenceMode mode = RecurrenceMode::None;
    Vec alpha;             // recurrence covector, or the cyclic kernel covector
    double residual = 0.0; // relative residual of the fitted model
    double r_norm = 0.0;
    double nabla_rel = 0.0; // |nabla R| / |R|
};

RecurrenceFit fit_recurrence(const MetricChart& chart, std::span<const double> p,
                             double tol = 1e-6);

struct ClassifyOptions {
    double tol_symbolic = 1e-6;
    double tol_fd = 1e-3;
    int plane_samples = 32;
    std::uint64_t seed = 1;
};

// Point diagnosis: every verdict is computed independently; `label` is the
// most specific passing model in the order
//   flat, constant_curvature, quasi_constant, conformally_flat,
//   recurrent, symmetric_kn_star, symmetric, generic.
struct ClassificationReport {
    Vec point;
    DerivativePath path = DerivativePath::Symbolic;
    double tol = 0.0;
    double r_norm = 0.0;

    double fit_c = 0.0;
    double fit_c_residual = 0.0; // relative
    bool constant_curvature = false;

    QuasiFit quasi;
    double quasi_residual = 0.0; // relative
    bool quasi_constant = false;

    double conformal_obstruction = 0.0; // relative max |Weyl| (n>=4) or |Cotton| (n=3)
    bool conformally_flat = false;

    RecurrenceFit recurrence;

    std::string label;
};

ClassificationReport classify_point(const MetricChart& chart, std::span<const double> p,
                                    const ClassifyOptions& opt = {});

} // namespace curved

#endif
