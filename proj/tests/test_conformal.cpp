// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/conformal.hpp"

#include "curved/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

using namespace curved;

namespace {

MetricChart constant_curvature_chart(double c, int s, int n) {
    std::string q;
    for (int i = 0; i < n; ++i) {
        if (i) q += (i < s ? "-" : "+");
        else if (s > 0) q += "-";
        q += "x" + std::to_string(i) + "^2";
    }
    std::string conf = "1/(1+(" + std::to_string(c) + ")*(" + q + ")/4)^2";
    std::string text = "dim=" + std::to_string(n) + ";\n";
    for (int i = 0; i < n; ++i)
        text += "g[" + std::to_string(i) + "][" + std::to_string(i) + "]=" +
                (i < s ? "-(" + conf + ")" : conf) + ";\n";
    return MetricChart(parse_metric_dsl(text), Box::cube(n, -0.75, 0.75));
}

MetricChart flat_chart(int s, int n, double half_width = 1.0) {
    std::string text = "dim=" + std::to_string(n) + ";\n";
    for (int i = 0; i < n; ++i)
        text += "g[" + std::to_string(i) + "][" + std::to_string(i) + "]=" +
                std::string(i < s ? "-1" : "1") + ";\n";
    return MetricChart(parse_metric_dsl(text), Box::cube(n, -half_width, half_width));
}

MetricChart wave_chart(const std::string& profile, const Box& box) {
    std::string text = "dim=4;\n";
    text += "g[0][0]=" + profile + ";\n";
    text += "g[0][1]=1;\n";
    text += "g[2][2]=1;\n";
    text += "g[3][3]=1;\n";
    return MetricChart(parse_metric_dsl(text), box);
}

// Plane wave whose conformal rescaling by e^{-2 x0} keeps all weak-plane
// curvature values consistent with a curvature-preserving map: the profile
// solves s'^2 - s'' = (1 - e^{2s}) h for s = -x0.
const Box kPairBox{{{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};

MetricChart matched_pair_source() {
    return wave_chart("(x2^2+x3^2)/(1-exp(-2*x0))", kPairBox);
}

ScalarField pair_sigma() { return ScalarField(parse_expression("-x0", 4), 4); }

// Signature (2,2) product of two curved surfaces; its curvature does not
// vanish on strongly degenerate planes, unlike constant-curvature space.
// The conformal exponents are non-harmonic and the factor curvatures add,
// so R(xi,eta,eta,xi) stays away from zero on the whole box.
MetricChart curved_product22() {
    std::string a = "exp(2*(x0^2+x0*x1/2)/8)";
    std::string b = "exp(-2*(x2^2+x2*x3/3)/8)";
    std::string text = "dim=4;\n";
    text += "g[0][0]=-" + a + ";\n";
    text += "g[1][1]=-" + a + ";\n";
    text += "g[2][2]=" + b + ";\n";
    text += "g[3][3]=" + b + ";\n";
    return MetricChart(parse_metric_dsl(text), Box::cube(4, -0.6, 0.6));
}

MetricChart scaled_chart(const MetricChart& src, double factor) {
    MetricGrid grid = *src.grid();
    for (auto& comp : grid.components)
        if (comp) comp = ex::c(factor) * comp;
    return MetricChart(std::move(grid), src.domain());
}

} // namespace

TEST_SUITE("conformal") {

TEST_CASE("constant factors have no deformation tensor and rescale curvature") {
    MetricChart chart = constant_curvature_chart(1.0, 1, 4);
    const ScalarField sigma = ScalarField::constant(0.35, 4);

    for (const Vec& p : sample_domain_points(chart.domain(), 4, 91)) {
        const CurvatureBundle src = curvature_bundle(chart, p);
        const SymmetricBilinear q = conformal_Q(src, sigma);
        CHECK(q.max_abs() < 1e-14);
    }

    const ConformalChange change = conformal_change(chart, sigma, 5, 91);
    CHECK(change.verify_residual < 1e-10);

    // Rbar = e^{2k} R directly: Christoffel symbols are unchanged, so the
    // lowered curvature just picks up the metric factor.
    const Vec p{0.2, -0.1, 0.3, 0.05};
    const CurvatureBundle src = curvature_bundle(chart, p);
    const CurvatureBundle bar = curvature_bundle(change.bar, p);
    const double s2 = std::exp(2.0 * 0.35);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    CHECK(bar.riemann(i, j, k, l) ==
                          doctest::Approx(s2 * src.riemann(i, j, k, l)).epsilon(1e-9));
}

TEST_CASE("deformation tensor on flat charts matches the hand formula") {
    // sigma = x0 x1^2 on flat space: Gamma = 0, so
    // Q_ab = s_a s_b - d_a d_b sigma - 1/2 |ds|^2 g_ab.
    const ScalarField sigma(parse_expression("x0*x1^2", 3), 3);
    const Vec p{0.3, 0.5, -0.2};
    // grad = (0.25, 0.3, 0)

    MetricChart euclid = flat_chart(0, 3);
    SymmetricBilinear q = conformal_Q(curvature_bundle(euclid, p), sigma);
    const double half_e = 0.5 * (0.25 * 0.25 + 0.3 * 0.3);
    CHECK(q(0, 0) == doctest::Approx(0.25 * 0.25 - half_e).epsilon(1e-14));
    CHECK(q(0, 1) == doctest::Approx(0.25 * 0.3 - 2.0 * 0.5).epsilon(1e-14));
    CHECK(q(1, 1) == doctest::Approx(0.3 * 0.3 - 2.0 * 0.3 - half_e).epsilon(1e-14));
    CHECK(q(2, 2) == doctest::Approx(-half_e).epsilon(1e-14));
    CHECK(q(0, 2) == doctest::Approx(0.0));

    // Lorentzian signature flips the gradient-norm term.
    MetricChart lorentz = flat_chart(1, 3);
    q = conformal_Q(curvature_bundle(lorentz, p), sigma);
    const double half_l = 0.5 * (-0.25 * 0.25 + 0.3 * 0.3);
    CHECK(q(0, 0) == doctest::Approx(0.25 * 0.25 + half_l).epsilon(1e-14));
    CHECK(q(2, 2) == doctest::Approx(-half_l).epsilon(1e-14));

    CHECK_THROWS_AS(ScalarField(parse_expression("x3", 4), 3), std::invalid_argument);
}

TEST_CASE("curvature relation verifies for generic factors on curved charts") {
    const ScalarField sigma(parse_expression("0.3*sin(x0)+0.2*x1*x2-0.1*x3^2", 4), 4);
    for (int s : {0, 1, 2}) {
        MetricChart chart = constant_curvature_chart(s == 1 ? 1.0 : -0.7, s, 4);
        const ConformalChange change = conformal_change(chart, sigma, 5, 17 + s);
        CHECK(change.verify_residual < 1e-7);
    }
    MetricChart wave = wave_chart("exp(x0)*(x2^2-x3^2)", Box::cube(4, -1.0, 1.0));
    CHECK(conformal_change(wave, sigma, 5, 23).verify_residual < 1e-7);
}

TEST_CASE("pullback spots isometries, homotheties and sign flips") {
    MetricChart sphere = constant_curvature_chart(1.0, 1, 4);
    PullbackReport rep = pullback_classify(Diffeo::identity(4), sphere, sphere);
    CHECK(rep.map_class == MapClass::Isometry);
    CHECK(rep.lambda == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(rep.sign_flip);
    CHECK(rep.max_residual < 1e-9);
    CHECK(rep.cone_samples > 0);
    CHECK(rep.cone_preserved);

    // Doubling the coordinates quadruples the pulled-back flat metric.
    MetricChart lorentz_small = flat_chart(1, 4, 1.0);
    MetricChart lorentz_big = flat_chart(1, 4, 2.5);
    std::vector<double> twice{2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2};
    rep = pullback_classify(Diffeo::linear(4, twice), lorentz_small, lorentz_big);
    CHECK(rep.map_class == MapClass::Homothety);
    CHECK(rep.lambda == doctest::Approx(4.0).epsilon(1e-9));

    // Identity between g and 3g.
    rep = pullback_classify(Diffeo::identity(4), sphere, scaled_chart(sphere, 3.0));
    CHECK(rep.map_class == MapClass::Homothety);
    CHECK(rep.lambda == doctest::Approx(3.0).epsilon(1e-9));

    // Identity between g and -g in split signature: an anti-isometry.
    MetricChart split = flat_chart(2, 4);
    rep = pullback_classify(Diffeo::identity(4), split, scaled_chart(split, -1.0));
    CHECK(rep.map_class == MapClass::Isometry);
    CHECK(rep.sign_flip);
    CHECK(rep.lambda == doctest::Approx(-1.0).epsilon(1e-9));

    // A shear that is not angle-preserving anywhere.
    Diffeo shear = Diffeo::from_forward(4, [](std::span<const double> x) {
        return Vec{x[0] + 0.1 * x[1] * x[1], x[1], x[2], x[3]};
    });
    rep = pullback_classify(shear, flat_chart(1, 4, 1.0), flat_chart(1, 4, 3.0));
    CHECK(rep.map_class == MapClass::General);
}

TEST_CASE("pullback grades conformal factors by their gradient type") {
    MetricChart source = matched_pair_source();
    const ConformalChange change = conformal_change(source, pair_sigma(), 0, 3);

    PullbackReport rep = pullback_classify(Diffeo::identity(4), source, change.bar);
    CHECK(rep.map_class == MapClass::Conformal);
    CHECK(rep.gradient_class == GradientClass::Isotropic);
    CHECK(rep.max_residual < 1e-9);
    CHECK(rep.cone_preserved);
    for (std::size_t i = 0; i < rep.points.size(); ++i)
        CHECK(rep.sigma_hat[i] == doctest::Approx(-rep.points[i][0]).epsilon(1e-9));

    // A factor growing along a spacelike coordinate has a nonnull gradient.
    MetricChart lorentz = flat_chart(1, 4);
    const ScalarField spacelike(parse_expression("0.3*x1", 4), 4);
    rep = pullback_classify(Diffeo::identity(4), lorentz,
                            conformal_change(lorentz, spacelike, 0, 3).bar);
    CHECK(rep.map_class == MapClass::Conformal);
    CHECK(rep.gradient_class == GradientClass::Nonnull);
}

TEST_CASE("weak-plane condition accepts the matched pair and rejects mismatches") {
    MetricChart source = matched_pair_source();

    DegenerateConditionResult res = degenerate_condition_check(
        source, pair_sigma(), PlaneKind::WeaklyDegenerate, 6, 8, 1e-7, 11);
    CHECK(res.pass);
    CHECK(res.residual < 1e-7);

    // Halving the exponent breaks the profile equation.
    const ScalarField wrong(parse_expression("-0.5*x0", 4), 4);
    res = degenerate_condition_check(source, wrong, PlaneKind::WeaklyDegenerate, 6, 8, 1e-7, 11);
    CHECK_FALSE(res.pass);
    CHECK(res.residual > 1e-3);

    // Plane waves carry curvature on weak planes, so even a constant factor
    // is rejected there.
    MetricChart wave = wave_chart("exp(x0)*(x2^2+x3^2)", Box::cube(4, -1.0, 1.0));
    res = degenerate_condition_check(wave, ScalarField::constant(0.2, 4),
                                     PlaneKind::WeaklyDegenerate, 6, 8, 1e-7, 11);
    CHECK_FALSE(res.pass);
    CHECK(res.residual > 1e-3);

    // Constant-curvature space has none, so any constant factor passes.
    MetricChart sphere = constant_curvature_chart(1.0, 1, 4);
    res = degenerate_condition_check(sphere, ScalarField::constant(0.2, 4),
                                     PlaneKind::WeaklyDegenerate, 6, 8, 1e-7, 11);
    CHECK(res.pass);
}

TEST_CASE("strong-plane condition needs the factor to vanish where curvature shows") {
    MetricChart product = curved_product22();

    DegenerateConditionResult res = degenerate_condition_check(
        product, ScalarField::constant(0.0, 4), PlaneKind::StronglyDegenerate, 8, 6, 1e-7, 5);
    CHECK(res.pass);
    CHECK(res.residual == 0.0);

    res = degenerate_condition_check(product, ScalarField::constant(0.3, 4),
                                     PlaneKind::StronglyDegenerate, 8, 6, 1e-7, 5);
    CHECK_FALSE(res.pass);
    CHECK(res.residual > 1e-3);

    const ScalarField bump(parse_expression("0.3*exp(-x0^2)", 4), 4);
    res = degenerate_condition_check(product, bump, PlaneKind::StronglyDegenerate, 8, 6, 1e-7, 5);
    CHECK_FALSE(res.pass);
    CHECK(res.residual > 1e-3);

    // Constant-curvature curvature c pi1 vanishes on strongly degenerate
    // planes, so the check is blind to the factor there.
    MetricChart pseudo = constant_curvature_chart(0.8, 2, 4);
    res = degenerate_condition_check(pseudo, ScalarField::constant(0.3, 4),
                                     PlaneKind::StronglyDegenerate, 8, 6, 1e-7, 5);
    CHECK(res.pass);

    // Strongly degenerate planes need two timelike and two spacelike
    // directions.
    CHECK_THROWS_AS(degenerate_condition_check(constant_curvature_chart(1.0, 1, 4),
                                               ScalarField::constant(0.1, 4),
                                               PlaneKind::StronglyDegenerate, 2, 2, 1e-7, 5),
                    SignatureError);
}

TEST_CASE("tensor form of the weak-plane condition") {
    MetricChart source = matched_pair_source();
    ConformalRelationResult res = verify_conformal_relation(source, pair_sigma(), 5, 1e-6, 31);
    CHECK(res.precondition_ok);
    CHECK(res.pass);
    CHECK(res.residual < 1e-6);

    // Constant factors on constant curvature: the relation holds for every
    // factor, the uniqueness failure of the curvature-preserving problem.
    MetricChart sphere = constant_curvature_chart(1.0, 1, 4);
    res = verify_conformal_relation(sphere, ScalarField::constant(0.4, 4), 5, 1e-6, 31);
    CHECK(res.precondition_ok);
    CHECK(res.pass);

    // On a plane wave the weak-plane precondition already fails for a
    // constant factor, and the identity is skipped.
    MetricChart wave = wave_chart("exp(x0)*(x2^2+x3^2)", Box::cube(4, -1.0, 1.0));
    res = verify_conformal_relation(wave, ScalarField::constant(0.2, 4), 5, 1e-6, 31);
    CHECK_FALSE(res.precondition_ok);
    CHECK(res.precondition_residual > 1e-3);
    CHECK(res.residual == 0.0);
}

} // TEST_SUITE
