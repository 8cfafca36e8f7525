// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_PLANES_HPP
#define CURVED_PLANES_HPP

#include "curved/chart.hpp"
#include "curved/diffeo.hpp"
#include "curved/tensor.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curved {

// A 2-plane in the tangent space at `point`, spanned by x and y.
struct TangentPlane {
    Vec point;
    Vec x;
    Vec y;
};

enum class PlaneKind { Nondegenerate, WeaklyDegenerate, StronglyDegenerate };

const char* plane_kind_name(PlaneKind kind);

// Classification of a plane by the rank of the restricted metric.
// singular_values are the absolute eigenvalues of the 2x2 Gram matrix in a
// Euclidean-normalized basis, sorted descending; entries below `threshold`
// count as zero.  isotropic_direction is present iff the plane is
// degenerate; for a weakly degenerate plane it spans the kernel of the
// restriction, for a strongly degenerate plane every direction qualifies
// and the first basis vector is reported.
struct PlaneClass {
    PlaneKind tag = PlaneKind::Nondegenerate;
    std::optional<Vec> isotropic_direction;
    double singular_values[2] = {0.0, 0.0};
    double threshold = 0.0;
};

PlaneClass classify_plane(const SymmetricBilinear& g, const TangentPlane& plane,
                          double tol = 1e-9);

// K(plane) = R(x,y,y,x) / (g(x,x) g(y,y) - g(x,y)^2).  Throws
// DegeneratePlaneError (message names the degeneracy class) when the
// denominator degenerates.
double sectional_curvature(const Tensor4& riemann, const SymmetricBilinear& g,
                           const TangentPlane& plane, double tol = 1e-9);

// Frame {e_i} with g(e_i,e_j) = -delta_ij for i < s and +delta_ij after,
// timelike vectors first.  A nonzero seed applies a random orthogonal
// rotation inside each sign block, giving a different frame per seed.
std::vector<Vec> pseudo_orthonormal_frame(const SymmetricBilinear& g,
                                          std::uint64_t seed = 0);

// Draws planes of the requested degenerate kind at a fixed point.
//  - WeaklyDegenerate: y = u + v with u, v unit spacelike/timelike from a
//    randomized frame, x a unit non-isotropic vector orthogonal to the pair.
//    Needs an indefinite metric.
//  - StronglyDegenerate: two orthogonal isotropic vectors t1+s1, t2+s2.
//    Needs at least two timelike and two spacelike directions.
// `point` is stamped into the returned planes.
std::vector<TangentPlane> sample_degenerate_planes(const SymmetricBilinear& g,
                                                   PlaneKind kind, int count,
                                                   std::uint64_t seed,
                                                   const Vec& point = {});

// Family of planes alpha_t = span{x + t w1, y + t w2} collapsing onto the
// plane (x, y) as t -> 0.
struct LimitFamily {
    Vec w1;
    Vec w2;
    double t0 = 1e-2;
};

struct LimitEstimate {
    double value = 0.0;       // extrapolated limit of the ratio
    double error = 0.0;       // extrapolation error indicator
    std::vector<double> ts;   // parameter ladder actually used
    std::vector<double> ratios;
    int resamples = 0;        // families discarded for degeneracy
};

// Estimates lim_{t->0} Kbar(f_* alpha_t) / K(alpha_t) where K is the
// sectional curvature of `source` at plane0.point and Kbar the sectional
// curvature of `target` at map(plane0.point).  The ladder is t0, t0/2, ...
// with `steps` halvings, extrapolated to t = 0.
LimitEstimate limit_ratio_estimate(const MetricChart& source,
                                   const MetricChart& target, const Diffeo& map,
                                   const TangentPlane& plane0,
                                   const LimitFamily& family, int steps = 8);

// Same, drawing w1, w2 from `seed` and redrawing them (up to a bounded
// number of attempts) whenever the ladder hits a degenerate sample.
LimitEstimate limit_ratio_estimate(const MetricChart& source,
                                   const MetricChart& target, const Diffeo& map,
                                   const TangentPlane& plane0,
                                   std::uint64_t seed, int steps = 8);

} // namespace curved

#endif
