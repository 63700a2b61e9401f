// Adaptive quadrature: Gauss-Kronrod 15(7) panels with a worst-first queue,
// adaptive Simpson, and the sinh substitution used for improper rate
// integrals with e_tau^{-5}-type decay.

#include <cmath>
#include <limits>

#include "doctest.h"
#include "openlz/quadrature.hpp"

using namespace openlz;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("single gauss-kronrod panel is exact on high-degree polynomials") {
    double value = 0.0, err = 0.0;

    gk15_panel([](double x) { return x * x * x * x * x; }, 0.0, 1.0, value,
               err);
    CHECK(value == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    // The 15-point Kronrod rule integrates degree 22 exactly.
    gk15_panel([](double x) { return std::pow(x, 20); }, 0.0, 1.0, value, err);
    CHECK(value == doctest::Approx(1.0 / 21.0).epsilon(1e-13));

    // Affine map to a shifted interval.
    gk15_panel([](double x) { return 3.0 * x * x; }, -2.0, 5.0, value, err);
    CHECK(value == doctest::Approx(125.0 + 8.0).epsilon(1e-14));
    CHECK(err < 1e-10);
}

TEST_CASE("adaptive gauss-kronrod reaches the requested tolerance") {
    const QuadResult r =
        adaptive_gk15([](double x) { return std::sin(x); }, 0.0,
                      std::acos(-1.0), 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-12);
    CHECK(r.error <= 1e-12);
    CHECK(r.panels >= 1);

    // A peaked integrand forces subdivision but still converges.
    const QuadResult peak = adaptive_gk15(
        [](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
    const double exact = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
    CHECK(peak.converged);
    CHECK(peak.panels > 1);
    CHECK(std::abs(peak.value - exact) < 1e-8);
}

TEST_CASE("adaptive gauss-kronrod handles degenerate and reversed ranges") {
    const QuadResult zero =
        adaptive_gk15([](double x) { return std::exp(x); }, 2.0, 2.0, 1e-12);
    CHECK(zero.converged);
    CHECK(zero.value == 0.0);

    const QuadResult fwd =
        adaptive_gk15([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
    const QuadResult rev =
        adaptive_gk15([](double x) { return std::exp(x); }, 1.0, 0.0, 1e-12);
    CHECK(std::abs(fwd.value - (std::exp(1.0) - 1.0)) < 1e-12);
    CHECK(std::abs(fwd.value + rev.value) < 1e-12);
}

TEST_CASE("adaptive gauss-kronrod reports non-convergence at the panel cap") {
    const QuadResult r = adaptive_gk15(
        [](double x) { return std::cos(1000.0 * x); }, 0.0, 10.0, 1e-30, 8);
    CHECK_FALSE(r.converged);
    CHECK(r.panels <= 8);
}

TEST_CASE("adaptive simpson matches smooth closed forms") {
    const QuadResult r =
        adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0,
                         1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-11);

    const QuadResult zero =
        adaptive_simpson([](double x) { return std::exp(x); }, 3.0, 3.0,
                         1e-12);
    CHECK(zero.converged);
    CHECK(zero.value == 0.0);

    const QuadResult osc = adaptive_simpson(
        [](double x) { return std::sin(10.0 * x); }, 0.0, 2.0, 1e-11);
    CHECK(osc.converged);
    CHECK(std::abs(osc.value - (1.0 - std::cos(20.0)) / 10.0) < 1e-10);
}

TEST_CASE("adaptive simpson flags depth exhaustion") {
    const QuadResult r = adaptive_simpson(
        [](double x) { return std::sqrt(std::abs(x)); }, -1.0, 1.0, 1e-14, 3);
    CHECK_FALSE(r.converged);
}

TEST_CASE("sinh substitution evaluates the improper inverse-energy integral") {
    // integral over the whole line of (tau^2 + g^2)^(-5/2) equals 4/(3 g^4);
    // this is the e_tau^{-5} profile behind every rate integral here.
    for (double g : {0.5, 1.0, 2.0}) {
        auto f = [g](double t) { return std::pow(t * t + g * g, -2.5); };
        const QuadResult r = integrate_sinh(f, g, -kInf, kInf, 1e-13);
        CHECK(r.converged);
        CHECK(std::abs(r.value - 4.0 / (3.0 * std::pow(g, 4.0))) < 1e-12);
    }
}

TEST_CASE("sinh substitution on half-infinite and finite ranges") {
    auto f = [](double t) { return std::pow(t * t + 1.0, -2.5); };

    const QuadResult half = integrate_sinh(f, 1.0, 0.0, kInf, 1e-13);
    CHECK(half.converged);
    CHECK(std::abs(half.value - 2.0 / 3.0) < 1e-12);

    // Finite limits agree with plain adaptive quadrature.
    const QuadResult a = integrate_sinh(f, 1.0, -2.0, 5.0, 1e-13);
    const QuadResult b = adaptive_gk15(f, -2.0, 5.0, 1e-13);
    CHECK(a.converged);
    CHECK(std::abs(a.value - b.value) < 1e-12);

    // Reversed infinite limits flip the sign.
    const QuadResult rev = integrate_sinh(f, 1.0, kInf, -kInf, 1e-13);
    CHECK(std::abs(rev.value + 4.0 / 3.0) < 1e-12);
}
