// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#ifndef CURVED_CHART_HPP
#define CURVED_CHART_HPP

#include "curved/dsl.hpp"
#include "curved/errors.hpp"
#include "curved/expression.hpp"
#include "curved/finite_difference.hpp"
#include "curved/tensor.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace curved {

using Vec = std::vector<double>;

// Axis-aligned coordinate domain.
struct Box {
    std::vector<std::array<double, 2>> axes;

    int dim() const { return static_cast<int>(axes.size()); }
    bool contains(std::span<const double> p) const;
    double width(int axis) const { return axes[axis][1] - axes[axis][0]; }
    static Box cube(int dim, double lo, double hi);
};

// Deterministic quasi-random interior points, shrunk toward the centre
// by `margin` of the half-width per axis.
std::vector<Vec> sample_domain_points(const Box& box, int count, std::uint64_t seed,
                                      double margin = 0.1);

// Metric eigenvalue signs at a point: `negative` timelike directions,
// `positive` spacelike ones.
struct Signature {
    int negative = 0;
    int positive = 0;

    bool operator==(const Signature&) const = default;
    bool indefinite() const { return negative > 0 && positive > 0; }
};

// Derivative oracle for the metric component functions.  Two
// implementations: exact symbolic differentiation of expression trees
// (preferred) and nested central differences with one Richardson level
// (for black-box component evaluators, or forced via --fd).
class MetricSource {
public:
    virtual ~MetricSource() = default;
    virtual int dim() const = 0;
    virtual double value(int i, int j, std::span<const double> p) const = 0;
    virtual double d1(int i, int j, int a, std::span<const double> p) const = 0;
    virtual double d2(int i, int j, int a, int b, std::span<const double> p) const = 0;
    virtual double d3(int i, int j, int a, int b, int c, std::span<const double> p) const = 0;
};

enum class DerivativePath { Symbolic, FiniteDifference };

const char* derivative_path_name(DerivativePath p);

class SymbolicMetricSource : public MetricSource {
public:
    // Differentiates every component up to `order` (>= 3 for the full
    // pipeline: nabla R and the Schouten-derivative condition need
    // third metric derivatives).
    SymbolicMetricSource(MetricGrid grid, int order = 3);

    int dim() const override { return grid_.dim; }
    double value(int i, int j, std::span<const double> p) const override;
    double d1(int i, int j, int a, std::span<const double> p) const override;
    double d2(int i, int j, int a, int b, std::span<const double> p) const override;
    double d3(int i, int j, int a, int b, int c, std::span<const double> p) const override;

    const MetricGrid& grid() const { return grid_; }

private:
    const ExprPtr& comp(int i, int j) const { return grid_.at(i, j); }
    MetricGrid grid_;
    int order_;
    // Derivative trees indexed by component (upper triangle) and sorted
    // multi-index; mixed partials commute so one tree per sorted tuple.
    std::vector<std::vector<ExprPtr>> d1_, d2_, d3_;
};

class FiniteDifferenceMetricSource : public MetricSource {
public:
    // `step_scale` is the base step as a fraction of the domain width;
    // order-k derivatives use step_scale * 10^(k-1) * width.
    FiniteDifferenceMetricSource(int dim, std::vector<fd::ScalarFn> components, Box domain,
                                 double step_scale = 1e-4);

    int dim() const override { return dim_; }
    double value(int i, int j, std::span<const double> p) const override;
    double d1(int i, int j, int a, std::span<const double> p) const override;
    double d2(int i, int j, int a, int b, std::span<const double> p) const override;
    double d3(int i, int j, int a, int b, int c, std::span<const double> p) const override;

private:
    double step(int order) const;
    const fd::ScalarFn& comp(int i, int j) const { return components_[i * dim_ + j]; }
    int dim_;
    std::vector<fd::ScalarFn> components_; // dim*dim, symmetric
    Box domain_;
    double step_scale_;
    double min_width_;
};

// A metric chart: component functions on a coordinate box, with a
// derivative oracle and the signature (validated to be constant at 16
// deterministic probe points during construction).
class MetricChart {
public:
    // Symbolic chart from a parsed component grid.
    MetricChart(MetricGrid grid, Box domain, int derivative_order = 3);

    // Black-box chart differentiated by finite differences.
    MetricChart(int dim, std::vector<fd::ScalarFn> components, Box domain,
                double step_scale = 1e-4);

    // Same component functions as `chart`, rerouted through the
    // finite-difference oracle (exercises the fallback path).
    static MetricChart finite_difference_view(const MetricChart& chart,
                                              double step_scale = 1e-4);

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }
    const MetricSource& source() const { return *source_; }
    DerivativePath path() const { return path_; }
    Signature signature() const { return signature_; }

    // Expression grid when the chart is symbolic (empty otherwise).
    const std::optional<MetricGrid>& grid() const { return grid_; }

    void require_inside(std::span<const double> p) const;
    SymmetricBilinear metric_at(std::span<const double> p) const;
    SymmetricBilinear inverse_metric_at(std::span<const double> p) const;

private:
    void validate_signature();
    int dim_;
    Box domain_;
    std::shared_ptr<const MetricSource> source_;
    std::optional<MetricGrid> grid_;
    DerivativePath path_;
    Signature signature_;
};

// Eigenvalue-count signature of g at p.  Throws SingularMetricError if
// some |eigenvalue| < 1e-10 * max |eigenvalue|.
Signature signature_at(const MetricChart& chart, std::span<const double> p);

// Christoffel symbols of the second kind, Gamma^k_{ij}, symmetric in (i,j).
class ChristoffelSymbols {
public:
    ChristoffelSymbols() = default;
    explicit ChristoffelSymbols(int dim)
        : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim, 0.0) {}
    int dim() const { return dim_; }
    double operator()(int k, int i, int j) const { return v_[(k * dim_ + i) * dim_ + j]; }
    double& at(int k, int i, int j) { return v_[(k * dim_ + i) * dim_ + j]; }

private:
    int dim_ = 0;
    std::vector<double> v_;
};

// Rank-3 covariant array, used for the conformal-flatness obstruction
// in dimension 3: C_{ijk} antisymmetric in (i,j).
class Rank3 {
public:
    Rank3() = default;
    explicit Rank3(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim, 0.0) {}
    int dim() const { return dim_; }
    double operator()(int i, int j, int k) const { return v_[(i * dim_ + j) * dim_ + k]; }
    double& at(int i, int j, int k) { return v_[(i * dim_ + j) * dim_ + k]; }
    double max_abs() const;

private:
    int dim_ = 0;
    std::vector<double> v_;
};

// Pointwise curvature data.
//
// Conventions, fixed by "sectional curvature of the unit round sphere
// is +1":
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   riemann(i,j,k,l) = g( R(e_i,e_j) e_k , e_l )
// so riemann = c * pi1 on a constant-curvature-c chart and
//   K(plane{x,y}) = riemann(x,y,y,x) / pi1(x,y,y,x).
//
// ricci(y,z) = g^{ik} riemann(i,y,z,k); scalar = g-trace of ricci.
// weyl (n >= 4) is the conformally invariant part
//   weyl = riemann - phi(ricci)/(n-2) + scalar * pi1 / ((n-1)(n-2));
// cotton (n == 3) is the antisymmetrised covariant derivative of
// ricci - scalar/(2(n-1)) * g, whose vanishing is the n=3
// conformal-flatness condition.
struct CurvatureBundle {
    Vec point;
    SymmetricBilinear metric;
    SymmetricBilinear inverse_metric;
    ChristoffelSymbols christoffel;
    Tensor4 riemann;
    SymmetricBilinear ricci;
    double scalar = 0.0;
    SymmetricBilinear traceless_ricci; // ricci - scalar/n * g
    std::optional<Tensor4> weyl;       // n >= 4
    std::optional<Rank3> cotton;       // n == 3
    DerivativePath path = DerivativePath::Symbolic;
};

CurvatureBundle curvature_bundle(const MetricChart& chart, std::span<const double> p);

// (nabla R)(X; Y,Z,U,V): slot 0 is the derivative direction.
Tensor5 covariant_derivative_R(const MetricChart& chart, std::span<const double> p);

// Max violation of the differential Bianchi identity
//   (nabla R)(a;i,j,k,l) + (nabla R)(i;j,a,k,l) + (nabla R)(j;a,i,k,l) = 0.
double second_bianchi_violation(const Tensor5& nabla_r);

} // namespace curved

#endif
