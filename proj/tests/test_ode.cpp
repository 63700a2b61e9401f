// Embedded Runge-Kutta 5(4) integrator: accuracy on closed-form solutions,
// both time directions, step statistics, tolerance response, dense output,
// and the step-underflow failure path.

#include <cmath>
#include <complex>
#include <cstddef>

#include "doctest.h"
#include "openlz/ode.hpp"

using namespace openlz;

namespace {

// y' = lambda y, exact solution exp(lambda t).
struct ExpRhs {
    cplx lambda;
    void operator()(double, const CVec<1>& y, CVec<1>& dy) const {
        dy[0] = lambda * y[0];
    }
};

// y1' = y2, y2' = -w^2 y1; from (1, 0): (cos wt, -w sin wt).
struct OscRhs {
    double w;
    void operator()(double, const CVec<2>& y, CVec<2>& dy) const {
        dy[0] = y[1];
        dy[1] = -w * w * y[0];
    }
};

}  // namespace

TEST_CASE("integrator reproduces the complex exponential") {
    const ExpRhs rhs{cplx(-0.5, 3.0)};
    IntegratorConfig cfg;
    StepStats st;

    CVec<1> y{cplx(1.0, 0.0)};
    y = integrate<1>(rhs, 0.0, 2.0, y, cfg, &st);

    const cplx exact = std::exp(rhs.lambda * 2.0);
    CHECK(std::abs(y[0] - exact) < 1e-8);
    CHECK(st.accepted > 0);
    CHECK(st.max_err <= 1.0);
}

TEST_CASE("integrator reproduces the harmonic oscillator") {
    const OscRhs rhs{4.0};
    IntegratorConfig cfg;

    CVec<2> y{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    y = integrate<2>(rhs, 0.0, 3.0, y, cfg);

    CHECK(std::abs(y[0] - std::cos(12.0)) < 1e-8);
    CHECK(std::abs(y[1] + 4.0 * std::sin(12.0)) < 1e-7);
}

TEST_CASE("integration runs in both time directions") {
    const ExpRhs rhs{cplx(0.3, 1.0)};
    IntegratorConfig cfg;

    CVec<1> y{cplx(1.0, 0.0)};
    y = integrate<1>(rhs, 0.0, 1.5, y, cfg);
    y = integrate<1>(rhs, 1.5, 0.0, y, cfg);  // reverse leg
    CHECK(std::abs(y[0] - cplx(1.0, 0.0)) < 1e-8);

    // Direct backward run: exp(lambda (t1 - t0)) with t1 < t0.
    CVec<1> z{cplx(1.0, 0.0)};
    z = integrate<1>(rhs, 2.0, -1.0, z, cfg);
    CHECK(std::abs(z[0] - std::exp(rhs.lambda * -3.0)) < 1e-8);
}

TEST_CASE("looser tolerances take fewer steps, tighter ones are more accurate") {
    const OscRhs rhs{10.0};
    const cplx exact = std::cos(20.0);

    IntegratorConfig loose;
    loose.rtol = 1e-5;
    loose.atol = 1e-8;
    IntegratorConfig tight;
    tight.rtol = 1e-11;
    tight.atol = 1e-13;

    StepStats sl, st;
    CVec<2> yl{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    CVec<2> yt = yl;
    yl = integrate<2>(rhs, 0.0, 2.0, yl, loose, &sl);
    yt = integrate<2>(rhs, 0.0, 2.0, yt, tight, &st);

    CHECK(st.accepted > sl.accepted);
    CHECK(std::abs(yt[0] - exact) < std::abs(yl[0] - exact) + 1e-13);
    CHECK(std::abs(yt[0] - exact) < 1e-9);
    CHECK(std::abs(yl[0] - exact) < 1e-3);
}

TEST_CASE("max step cap is honored") {
    const ExpRhs rhs{cplx(0.1, 0.0)};
    IntegratorConfig cfg;
    cfg.max_step = 0.01;
    StepStats st;

    CVec<1> y{cplx(1.0, 0.0)};
    y = integrate<1>(rhs, 0.0, 1.0, y, cfg, &st);
    CHECK(st.accepted >= 100);
    CHECK(std::abs(y[0] - std::exp(0.1)) < 1e-10);
}

TEST_CASE("dense output interpolates to near solver accuracy") {
    const ExpRhs rhs{cplx(-0.2, 2.0)};
    IntegratorConfig cfg;
    DenseSolution<1> dense;

    CVec<1> y{cplx(1.0, 0.0)};
    y = integrate<1>(rhs, 0.0, 4.0, y, cfg, nullptr, &dense, 0.0);

    REQUIRE_FALSE(dense.empty());
    CHECK(dense.dir == 1);
    for (int i = 0; i <= 80; ++i) {
        const double t = 4.0 * i / 80.0;
        const cplx exact = std::exp(rhs.lambda * t);
        CHECK(std::abs(dense(t)[0] - exact) < 1e-7);
    }
}

TEST_CASE("dense output honors a partial recording window") {
    const ExpRhs rhs{cplx(0.0, 1.5)};
    IntegratorConfig cfg;
    DenseSolution<1> dense;

    CVec<1> y{cplx(1.0, 0.0)};
    y = integrate<1>(rhs, 0.0, 2.0, y, cfg, nullptr, &dense, 1.0);

    REQUIRE_FALSE(dense.empty());
    // Every recorded segment reaches at least into [1, 2].
    for (const auto& seg : dense.segments) CHECK(seg.t0 + seg.h >= 1.0 - 1e-12);
    for (int i = 0; i <= 20; ++i) {
        const double t = 1.0 + i / 20.0;
        CHECK(std::abs(dense(t)[0] - std::exp(rhs.lambda * t)) < 1e-7);
    }
}

TEST_CASE("dense output works on backward runs") {
    const ExpRhs rhs{cplx(-0.3, 1.0)};
    IntegratorConfig cfg;
    DenseSolution<1> dense;

    CVec<1> y{std::exp(rhs.lambda * 3.0)};
    y = integrate<1>(rhs, 3.0, 0.0, y, cfg, nullptr, &dense, 3.0);

    CHECK(dense.dir == -1);
    CHECK(std::abs(y[0] - cplx(1.0, 0.0)) < 1e-8);
    for (int i = 0; i <= 30; ++i) {
        const double t = 3.0 * i / 30.0;
        CHECK(std::abs(dense(t)[0] - std::exp(rhs.lambda * t)) < 1e-7);
    }
}

TEST_CASE("degenerate range returns the state and a constant interpolant") {
    const ExpRhs rhs{cplx(1.0, 1.0)};
    IntegratorConfig cfg;
    StepStats st;
    DenseSolution<1> dense;

    const CVec<1> y0{cplx(0.25, -0.5)};
    const CVec<1> y = integrate<1>(rhs, 1.0, 1.0, y0, cfg, &st, &dense, 1.0);

    CHECK(y[0] == y0[0]);
    CHECK(st.accepted == 0);
    REQUIRE_FALSE(dense.empty());
    CHECK(dense(1.0)[0] == y0[0]);
}

TEST_CASE("step-size underflow raises the integrator failure") {
    // A floor on the step size plus a fast oscillation makes every step
    // reject, which must surface as IntegratorFailure rather than looping.
    const OscRhs rhs{200.0};
    IntegratorConfig cfg;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    cfg.min_step = 0.5;

    CVec<2> y{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    CHECK_THROWS_AS(y = integrate<2>(rhs, 0.0, 10.0, y, cfg),
                    IntegratorFailure);
}
