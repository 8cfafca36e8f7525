// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_REGISTRY_HPP
#define CURVED_REGISTRY_HPP

#include "curved/chart.hpp"
#include "curved/conformal.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curved {

// How a registry metric is produced.
enum class Construction { ClosedForm, EmbeddingInduced, Product, ConformalPair };

const char* construction_name(Construction c);

// Parameterized description of a built-in manifold.  `params` holds
// numeric parameters (c, s, n), `profiles` holds one-variable expression
// parameters written in x0 (f for the hypersurface generator, h for wave
// profiles, sigma for conformal factors).  An empty `domain` picks the
// kind's default chart box.
struct ManifoldSpec {
    std::string name;
    std::string kind;
    Construction construction = Construction::ClosedForm;
    std::map<std::string, double> params;
    std::map<std::string, std::string> profiles;
    Box domain;
    std::string note;
};

// Instantiated manifold.  Conformal pairs also carry the rescaled partner
// chart e^{2 sigma} g and the factor itself.
struct Manifold {
    ManifoldSpec spec;
    MetricChart chart;
    std::optional<MetricChart> partner;
    std::optional<ScalarField> sigma;
};

// Builds the chart (and partner, for pairs) for a spec.  Throws
// std::invalid_argument for out-of-range parameters and SignatureError /
// SingularMetricError when the construction degenerates on the domain.
Manifold instantiate(const ManifoldSpec& spec);

// Spec builders for the supported kinds, with parameter validation.
ManifoldSpec flat_spec(int s, int n);
// Conformal model g = (+/-) delta / (1 + c q(x)/4)^2 with q the signed
// coordinate square sum; curvature c everywhere.
ManifoldSpec constant_curvature_spec(double c, int s, int n);
// Block metric of an (n-1)-dimensional curvature-c factor and a flat line,
// the basic quasi-constant example with H = c, N = 0, V the line direction.
ManifoldSpec product_example1_spec(double c, int s, int n);
// Rotational hypersurface of the flat ambient space of signature
// (s, n+1-s), generated by the curve x^{n+1} = f(x^n); the chart metric is
// the embedding-induced one.  `f` is an expression in x0.
ManifoldSpec example2_spec(const std::string& f, int s, int n);
// Plane-fronted wave g = 2 du dv + h(u) (x2^2+..+x_{n-1}^2) du^2 + sum dx^2
// with u = x0, v = x1; conformally flat for every profile h.
ManifoldSpec ppwave_spec(const std::string& h, int n);
// The matched wave pair: profile h(u) = 1/(1 - e^{-2u}) on u in [1/2, 2]
// and factor sigma = -u solve s'^2 - s'' = (1 - e^{2s}) h, which makes the
// rescaled metric agree with the source on every weakly degenerate plane
// up to the fourth-power factor, with an isotropic factor gradient.
ManifoldSpec ppwave_pair_spec();
// Frozen trig-perturbed split-signature metric; Weyl stays above
// kGeneric22WeylFloor on the whole chart box.
ManifoldSpec generic22_spec();

// Fixed named instances shipped with the tool.
const std::vector<ManifoldSpec>& builtin_catalog();

// Looks `name` up in the catalog, or treats it as a kind name with default
// parameters.  `overrides` replace numeric (c, s, n) or profile (f, h,
// sigma) parameters by key.
ManifoldSpec resolve_spec(const std::string& name,
                          const std::map<std::string, std::string>& overrides = {});

// Plain-text catalog: one row per built-in, `name | kind | construction |
// parameters | domain | note`.  The repository ships this text as
// share/manifolds.txt; parse_manifest() reads the same format back.
std::string manifest_text();
std::vector<ManifoldSpec> parse_manifest(const std::string& text);

// The printed closed forms for the rotational hypersurface's two sectional
// curvatures, evaluated verbatim for comparison with fitted values; the
// embedding-induced metric is the authority, not these formulas.
//   H = f'^2 / ((x^n)^2 (1 + f'^2))    N = 4 f' f'' / (x^n (1 + f'^2))
// `f` is an expression in x0; p supplies the chart point.
std::pair<double, double> example2_reference_HN(const std::string& f, int s,
                                                std::span<const double> p);

// Lower bound on max|Weyl| for generic22 over its chart box.  Measured
// minimum over 4096 interior samples is 0.1706 (maximum 0.1921); pinned
// below that so the nowhere-conformally-flat hypothesis is a checkable
// constant.
inline constexpr double kGeneric22WeylFloor = 0.15;

} // namespace curved

#endif
