// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.

#include "curved/dsl.hpp"

#include "doctest.h"

#include <cmath>

using namespace curved;

TEST_SUITE("dsl") {

TEST_CASE("parses a diagonal Lorentzian grid") {
    MetricGrid g = parse_metric_dsl(
        "dim=4;\n"
        "g[0][0]=-1;\n"
        "g[1][1]=1;\n"
        "g[2][2]=1;\n"
        "g[3][3]=1;\n");
    CHECK(g.dim == 4);
    double p[4] = {0.3, -0.2, 0.5, 0.1};
    CHECK(g.at(0, 0)->eval(p) == doctest::Approx(-1.0));
    CHECK(g.at(1, 1)->eval(p) == doctest::Approx(1.0));
    CHECK(g.at(0, 1)->eval(p) == doctest::Approx(0.0)); // omitted => zero
}

TEST_CASE("assignment mirrors the symmetric slot") {
    MetricGrid g = parse_metric_dsl(
        "dim=3;\n"
        "g[0][0]=1; g[1][1]=1; g[2][2]=1;\n"
        "g[0][2]=x1;\n");
    double p[3] = {0.0, 0.7, 0.0};
    CHECK(g.at(0, 2)->eval(p) == doctest::Approx(0.7));
    CHECK(g.at(2, 0)->eval(p) == doctest::Approx(0.7));
}

TEST_CASE("double assignment is rejected, including via the mirror slot") {
    CHECK_THROWS_AS(parse_metric_dsl("dim=3; g[0][1]=1; g[0][1]=2;"), ParseError);
    CHECK_THROWS_AS(parse_metric_dsl("dim=3; g[0][1]=1; g[1][0]=1;"), ParseError);
}

TEST_CASE("component back references see earlier assignments") {
    MetricGrid g = parse_metric_dsl(
        "dim=3;\n"
        "g[0][0]=1+x0^2;\n"
        "g[1][1]=2*g[0][0];\n"
        "g[2][2]=g[1][1]+g[0][0];\n");
    double p[3] = {0.5, 0.0, 0.0};
    double base = 1.25;
    CHECK(g.at(1, 1)->eval(p) == doctest::Approx(2 * base));
    CHECK(g.at(2, 2)->eval(p) == doctest::Approx(3 * base));
    // forward reference is an error
    CHECK_THROWS_AS(parse_metric_dsl("dim=3; g[0][0]=g[1][1];"), ParseError);
}

TEST_CASE("errors carry line and column") {
    try {
        parse_metric_dsl("dim=3;\ng[0][0]=1;\ng[1][1]=1+bogus;\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 9);
    }
    CHECK_THROWS_AS(parse_metric_dsl("g[0][0]=1;"), ParseError);      // dim missing
    CHECK_THROWS_AS(parse_metric_dsl("dim=3; g[0][3]=1;"), ParseError); // index range
    CHECK_THROWS_AS(parse_metric_dsl("dim=0;"), ParseError);
    CHECK_THROWS_AS(parse_metric_dsl("dim=3; g[0][0]=x0^x1;"), ParseError); // non-integer power
}

TEST_CASE("functions and powers parse with the expected precedence") {
    MetricGrid g = parse_metric_dsl("dim=3; g[0][0]=1/(1+x0^2)^2 - sin(x1)*cos(x2);");
    double p[3] = {0.4, 0.3, 0.2};
    double expect = 1.0 / std::pow(1 + 0.16, 2) - std::sin(0.3) * std::cos(0.2);
    CHECK(g.at(0, 0)->eval(p) == doctest::Approx(expect).epsilon(1e-15));
    // -x0^2 must parse as -(x0^2)
    MetricGrid h = parse_metric_dsl("dim=3; g[0][0]=-x0^2;");
    double q[3] = {3.0, 0.0, 0.0};
    CHECK(h.at(0, 0)->eval(q) == doctest::Approx(-9.0));
}

TEST_CASE("grid to text to grid reproduces the component functions") {
    std::string text =
        "dim=4;\n"
        "g[0][0]=exp(x0)*(x2^2+x3^2);\n"
        "g[0][1]=1;\n"
        "g[2][2]=1;\n"
        "g[3][3]=1;\n";
    MetricGrid g = parse_metric_dsl(text);
    MetricGrid g2 = parse_metric_dsl(metric_to_dsl(g));
    REQUIRE(g2.dim == g.dim);
    double p[4] = {0.3, -0.4, 0.6, -0.1};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(g.at(i, j)->eval(p) == doctest::Approx(g2.at(i, j)->eval(p)).epsilon(1e-10));
}

TEST_CASE("parse_expression rejects metric references and over-range variables") {
    CHECK_THROWS_AS(parse_expression("g[0][0]+1", 3), ParseError);
    CHECK_THROWS_AS(parse_expression("x5", 3), ParseError);
    ExprPtr e = parse_expression("sin(x0)+x2", 3);
    double p[3] = {0.5, 0.0, 2.0};
    CHECK(e->eval(p) == doctest::Approx(std::sin(0.5) + 2.0));
}

} // TEST_SUITE
