#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "frw/quadrature.hpp"

using namespace frw;

TEST_CASE("integrate handles polynomials exactly") {
    CHECK(integrate([](double x) { return x * x * x; }, 0.0, 1.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(integrate([](double) { return 2.5; }, -1.0, 3.0) ==
          doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("integrate meets the requested tolerance on smooth integrands") {
    double s = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(std::abs(s - 2.0) < 1e-10);

    double l = integrate([](double t) { return 1.0 / t; }, 1.0, 4.0, 1e-12);
    CHECK(std::abs(l - std::log(4.0)) < 1e-10);

    double g = integrate([](double t) { return std::exp(-t); }, 0.0, 30.0, 1e-12);
    CHECK(std::abs(g - (1.0 - std::exp(-30.0))) < 1e-9);
}

TEST_CASE("integrate over an empty interval is zero") {
    CHECK(integrate([](double x) { return std::cos(x); }, 2.0, 2.0) == 0.0);
}

TEST_CASE("integrate is antisymmetric under interval reversal") {
    auto f = [](double x) { return std::cos(x) + x; };
    double fwd = integrate(f, 0.0, 1.0);
    double rev = integrate(f, 1.0, 0.0);
    CHECK(std::abs(fwd + rev) < 1e-12);
}

TEST_CASE("tail probe converges for t^-2") {
    ImproperResult r =
        probe_improper([](double t) { return 1.0 / (t * t); }, 1.0);
    CHECK(r.verdict == TailVerdict::Convergent);
    CHECK(std::abs(r.value - 1.0) < 1e-4);
    CHECK(r.t_stop <= 1e8);
}

TEST_CASE("tail probe converges for exponential decay") {
    ImproperResult r = probe_improper([](double t) { return std::exp(-t); }, 1.0);
    CHECK(r.verdict == TailVerdict::Convergent);
    CHECK(std::abs(r.value - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("tail probe diverges for 1/t") {
    ImproperResult r = probe_improper([](double t) { return 1.0 / t; }, 1.0);
    CHECK(r.verdict == TailVerdict::Divergent);
    CHECK(r.value > 0.0);
    CHECK(std::isfinite(r.t_stop));
}

TEST_CASE("tail probe diverges for the slowly growing t^-0.95") {
    ImproperResult r =
        probe_improper([](double t) { return std::pow(t, -0.95); }, 1.0);
    CHECK(r.verdict == TailVerdict::Divergent);
}

TEST_CASE("tail probe reports indeterminate near the convergence boundary") {
    ImproperResult r =
        probe_improper([](double t) { return std::pow(t, -1.02); }, 1.0, 1e6);
    CHECK(r.verdict == TailVerdict::Indeterminate);
    CHECK(r.t_stop <= 1e6);
}

TEST_CASE("tail probe respects the horizon") {
    ImproperResult r =
        probe_improper([](double t) { return 1.0 / (t * t); }, 1.0, 100.0);
    CHECK(r.t_stop <= 100.0);
}

TEST_CASE("tail probe validates its arguments") {
    auto f = [](double t) { return 1.0 / t; };
    CHECK_THROWS_AS(probe_improper(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(probe_improper(f, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(probe_improper(f, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("tail verdict names") {
    CHECK(std::string(tail_verdict_name(TailVerdict::Convergent)) == "Convergent");
    CHECK(std::string(tail_verdict_name(TailVerdict::Divergent)) == "Divergent");
    CHECK(std::string(tail_verdict_name(TailVerdict::Indeterminate)) ==
          "Indeterminate");
}

TEST_CASE("five point Gauss-Legendre rule matches the classical constants") {
    GaussLegendre gl = gauss_legendre(5);
    REQUIRE(gl.nodes.size() == 5);
    REQUIRE(gl.weights.size() == 5);

    const double n1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double n2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double w0 = 128.0 / 225.0;
    const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;

    CHECK(std::abs(gl.nodes[0] + n2) < 1e-14);
    CHECK(std::abs(gl.nodes[1] + n1) < 1e-14);
    CHECK(std::abs(gl.nodes[2]) < 1e-14);
    CHECK(std::abs(gl.nodes[3] - n1) < 1e-14);
    CHECK(std::abs(gl.nodes[4] - n2) < 1e-14);

    CHECK(std::abs(gl.weights[0] - w2) < 1e-14);
    CHECK(std::abs(gl.weights[1] - w1) < 1e-14);
    CHECK(std::abs(gl.weights[2] - w0) < 1e-14);
    CHECK(std::abs(gl.weights[3] - w1) < 1e-14);
    CHECK(std::abs(gl.weights[4] - w2) < 1e-14);
}

TEST_CASE("n point Gauss-Legendre rule integrates degree 2n-1 exactly") {
    GaussLegendre gl = gauss_legendre(5);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * std::pow(gl.nodes[i], 8);
    CHECK(std::abs(acc - 2.0 / 9.0) < 1e-14);

    double odd = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        odd += gl.weights[i] * std::pow(gl.nodes[i], 9);
    CHECK(std::abs(odd) < 1e-14);
}

TEST_CASE("one point Gauss-Legendre rule is the midpoint rule") {
    GaussLegendre gl = gauss_legendre(1);
    REQUIRE(gl.nodes.size() == 1);
    CHECK(std::abs(gl.nodes[0]) < 1e-15);
    CHECK(std::abs(gl.weights[0] - 2.0) < 1e-15);
}

TEST_CASE("Gauss-Legendre weights sum to the interval length") {
    for (int n : {2, 8, 32}) {
        GaussLegendre gl = gauss_legendre(n);
        double sum = 0.0;
        for (double w : gl.weights) sum += w;
        CHECK(std::abs(sum - 2.0) < 1e-13);
    }
}

TEST_CASE("Gauss-Legendre rejects nonpositive orders") {
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_legendre(-3), std::invalid_argument);
}
