// Headline quantities: the coherent crossing formula, the incoherent
// integral and its tail bound, the combined prediction, full measured
// records against frozen reference values, the exact two-term split of the
// dynamics, and the residual order fit.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "openlz/model.hpp"
#include "openlz/transition.hpp"

using namespace openlz;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed form of the infinite-horizon incoherent integral at constant gamma.
double incoherent_const_inf(double g, double gamma) {
    return 2.0 * gamma / (3.0 * g * g * (1.0 + gamma * gamma));
}

TransitionRecord synthetic_record(double eps, double residual,
                                  std::size_t steps = 10, double rtol = 1e-12,
                                  double qtol = 1e-14) {
    TransitionRecord r;
    r.g = 1.0;
    r.epsilon = eps;
    r.gamma_spec = "const:0.5";
    r.T = 25.0;
    r.residual = residual;
    r.steps_accepted = steps;
    r.rtol_used = rtol;
    r.qtol_used = qtol;
    return r;
}

}  // namespace

TEST_CASE("coherent crossing formula: pinned value, scaling, monotonicity") {
    CHECK(coherent_lz(1.0, 0.5) ==
          doctest::Approx(std::exp(-std::numbers::pi)).epsilon(1e-15));

    // Depends on g and eps only through g^2/eps.
    CHECK(coherent_lz(1.0, 0.5) ==
          doctest::Approx(coherent_lz(2.0, 2.0)).epsilon(1e-15));

    double prev = 0.0;
    for (double eps : {0.1, 1.0, 10.0, 100.0}) {
        const double p = coherent_lz(1.0, eps);
        CHECK(p > prev);
        CHECK(p < 1.0);
        prev = p;
    }

    CHECK_THROWS_AS(coherent_lz(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_lz(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("incoherent integral: zero profile, constant closed form, tail") {
    const LZFamily fam(1.0);
    const GammaProfile zero = GammaProfile::parse("const:0");
    CHECK(incoherent_integral(fam, zero, kInf) == 0.0);

    // Constant profile over the whole line: 2 gamma / (3 g^2 (1+gamma^2)).
    for (double g : {0.5, 1.0, 2.0}) {
        const LZFamily f(g);
        for (double gamma : {0.25, 1.0, 2.0}) {
            const double got =
                incoherent_integral(f, GammaProfile::constant(gamma), kInf);
            CHECK(got ==
                  doctest::Approx(incoherent_const_inf(g, gamma)).epsilon(1e-10));
        }
    }
    CHECK(incoherent_integral(fam, GammaProfile::constant(1.0), kInf) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Finite horizons increase toward the limit and the truncation deficit
    // is certified by the envelope bound for sup(gamma) >= 1.
    const GammaProfile one = GammaProfile::constant(1.0);
    const double full = incoherent_integral(fam, one, kInf);
    double prev = 0.0;
    for (double T : {5.0, 10.0, 25.0}) {
        const double part = incoherent_integral(fam, one, T);
        CHECK(part > prev);
        CHECK(part <= full);
        CHECK(full - part <= tail_bound(fam, one, T));
        prev = part;
    }

    // Pinned envelope value: sup(gamma) g^2 / (8 T^4) at T = 25.
    CHECK(tail_bound(fam, one, 25.0) ==
          doctest::Approx(1.0 / 3125000.0).epsilon(1e-15));
    CHECK(tail_bound(fam, one, 25.0) <= 3.21e-7);
}

TEST_CASE("prediction is the coherent term plus the scaled integral") {
    const LZFamily fam(1.0);
    const GammaProfile zero = GammaProfile::parse("const:0");
    CHECK(predicted_p(fam, zero, 0.37) ==
          doctest::Approx(coherent_lz(1.0, 0.37)).epsilon(1e-15));

    // (g=1, eps=0.2, const gamma): closed-form composition.
    for (double gamma : {0.5, 1.0}) {
        const double want = coherent_lz(1.0, 0.2) +
                            0.2 * incoherent_const_inf(1.0, gamma);
        CHECK(predicted_p(fam, GammaProfile::constant(gamma), 0.2) ==
              doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(predicted_p(fam, GammaProfile::constant(0.5), 0.2) ==
          doctest::Approx(0.0537207).epsilon(1e-5));
    CHECK(predicted_p(fam, GammaProfile::constant(1.0), 0.2) ==
          doctest::Approx(0.0670540).epsilon(1e-5));
}

TEST_CASE("measured records reproduce frozen reference values") {
    // g = 1, constant gamma 0.5, T = 25. Reference values frozen from an
    // independent high-precision implementation of the same dynamics.
    const LZFamily fam(1.0);
    const GammaProfile gam = GammaProfile::constant(0.5);
    IntegratorConfig cfg;

    const struct {
        double eps, p;
    } frozen[] = {{0.4, 0.109115478},
                  {0.3, 0.080099453},
                  {0.2, 0.052504364},
                  {0.15, 0.039249931},
                  {0.1, 0.026206301}};

    for (const auto& c : frozen) {
        const TransitionRecord r = measured_p(fam, gam, c.eps, 25.0, cfg);
        CHECK(std::abs(r.p_measured - c.p) <= 5e-7);

        // Record-level invariants.
        CHECK(r.p_measured >= 0.0);
        CHECK(r.p_measured <= 1.0 + 1e-8);
        CHECK(r.p_predicted ==
              doctest::Approx(r.p_coherent + c.eps * r.incoherent_integral)
                  .epsilon(1e-15));
        CHECK(r.residual ==
              doctest::Approx(r.p_measured - r.p_predicted).epsilon(1e-12));
        CHECK_FALSE(r.clamped);
        CHECK(r.p_raw == r.p_measured);
        CHECK(r.steps_accepted > 0);
        CHECK(r.cptp_trace_defect <= 1e-9);
        CHECK(r.choi_min_eig >= -1e-8);
        CHECK(r.gamma_spec == "const:0.5");
        CHECK(r.T == 25.0);
        CHECK(std::abs(r.p_measured - r.p_phase_avg) < 1e-4);
        CHECK(r.tail_bound ==
              doctest::Approx(0.5 / (8.0 * std::pow(25.0, 4.0)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("zero-dephasing crossing reproduces the exponential law") {
    const LZFamily fam(1.0);
    const GammaProfile zero = GammaProfile::parse("const:0");
    IntegratorConfig cfg;

    const TransitionRecord r = measured_p(fam, zero, 0.5, 30.0, cfg);
    CHECK(std::abs(r.p_measured - std::exp(-std::numbers::pi)) < 1e-3);
    CHECK(r.incoherent_integral == 0.0);
}

TEST_CASE("fast driving approaches the sudden limit") {
    const LZFamily fam(1.0);
    const GammaProfile zero = GammaProfile::parse("const:0");
    IntegratorConfig cfg;

    const TransitionRecord r = measured_p(fam, zero, 50.0, 25.0, cfg);
    CHECK(r.p_measured > 0.95);
    CHECK(std::abs(r.p_measured - coherent_lz(1.0, 50.0)) <= 2e-2);
}

TEST_CASE("the two-term split is an identity of the dynamics") {
    const LZFamily fam(1.0);
    IntegratorConfig cfg;

    // Zero dephasing: the incoherent part vanishes identically.
    {
        const GammaProfile zero = GammaProfile::parse("const:0");
        const DuhamelSplit split = duhamel_split(fam, zero, 0.5, 20.0, cfg);
        const TransitionRecord r = measured_p(fam, zero, 0.5, 20.0, cfg);
        CHECK(split.incoherent_part == 0.0);
        CHECK(std::abs(split.coherent_part - r.p_measured) < 1e-7);
    }

    // Frozen split at (g=1, eps=0.3, const gamma 0.5, T=20).
    {
        const GammaProfile gam = GammaProfile::constant(0.5);
        const DuhamelSplit split = duhamel_split(fam, gam, 0.3, 20.0, cfg);
        const TransitionRecord r = measured_p(fam, gam, 0.3, 20.0, cfg);

        CHECK(std::abs(split.coherent_part - 0.005326964586) <= 5e-7);
        CHECK(std::abs(split.incoherent_part - 0.074772396011) <= 5e-7);
        CHECK(std::abs(r.p_measured - 0.080099360597) <= 5e-7);
        CHECK(std::abs(split.coherent_part + split.incoherent_part -
                       r.p_measured) < 1e-6);
    }
}

TEST_CASE("measured probability is invariant under the crossing rescaling") {
    // (g, eps, T) -> (2g, 4 eps, T/2) maps the dynamics onto itself for a
    // constant profile; the transition probability must agree.
    const GammaProfile gam = GammaProfile::constant(0.5);
    IntegratorConfig cfg;

    const TransitionRecord a = measured_p(LZFamily(1.0), gam, 0.5, 30.0, cfg);
    const TransitionRecord b = measured_p(LZFamily(2.0), gam, 2.0, 15.0, cfg);

    CHECK(std::abs(a.p_measured - 0.13888767) <= 5e-7);
    CHECK(std::abs(b.p_measured - 0.13887688) <= 5e-7);
    CHECK(std::abs(a.p_measured - b.p_measured) < 5e-3);
}

TEST_CASE("order fit: synthetic quadratic residuals fit slope two") {
    std::vector<TransitionRecord> recs;
    for (double eps : {0.4, 0.3, 0.2, 0.15, 0.1})
        recs.push_back(synthetic_record(eps, 0.03 * eps * eps));

    const OrderFit fit = order_fit(recs);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(0.03)).epsilon(1e-10));
    CHECK(fit.excluded == 0);
    CHECK(fit.epsilons.size() == 5);
    CHECK(fit.epsilons.front() > fit.epsilons.back());  // descending order
}

TEST_CASE("order fit: validation and noise-floor exclusion") {
    // Too few records.
    std::vector<TransitionRecord> two{synthetic_record(0.4, 1e-3),
                                      synthetic_record(0.2, 1e-3)};
    CHECK_THROWS_AS(order_fit(two), std::invalid_argument);

    // Mixed groups are rejected.
    std::vector<TransitionRecord> mixed;
    for (double eps : {0.4, 0.2, 0.1})
        mixed.push_back(synthetic_record(eps, 1e-3));
    mixed[1].g = 2.0;
    CHECK_THROWS_AS(order_fit(mixed), std::invalid_argument);

    // Duplicate epsilon values are rejected.
    std::vector<TransitionRecord> dup;
    for (double eps : {0.4, 0.2, 0.2})
        dup.push_back(synthetic_record(eps, 1e-3));
    CHECK_THROWS_AS(order_fit(dup), std::invalid_argument);

    // A record below its own noise floor is excluded from the fit.
    std::vector<TransitionRecord> recs;
    for (double eps : {0.4, 0.3, 0.2, 0.1})
        recs.push_back(synthetic_record(eps, 0.03 * eps * eps));
    recs.push_back(synthetic_record(0.05, 1e-9, 100000, 1e-8, 1e-12));
    const OrderFit fit = order_fit(recs);
    CHECK(fit.excluded == 1);
    CHECK(fit.epsilons.size() == 4);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-10));

    // All points at the floor: the fit refuses instead of fitting noise.
    std::vector<TransitionRecord> noisy;
    for (double eps : {0.4, 0.2, 0.1})
        noisy.push_back(synthetic_record(eps, 1e-12, 1000, 1e-10, 1e-12));
    CHECK_THROWS_AS(order_fit(noisy), std::invalid_argument);
}

TEST_CASE("order fit refuses the exactly-solvable zero-dephasing family") {
    // With gamma = 0 the prediction is exact up to finite-horizon effects,
    // so residuals sit at the numerical noise floor and the fit must refuse
    // rather than report a meaningless slope.
    const LZFamily fam(1.0);
    const GammaProfile zero = GammaProfile::parse("const:0");
    IntegratorConfig cfg;

    std::vector<TransitionRecord> recs;
    for (double eps : {1.0, 0.5, 0.25})
        recs.push_back(measured_p(fam, zero, eps, 30.0, cfg));
    CHECK_THROWS_AS(order_fit(recs), std::invalid_argument);
}
