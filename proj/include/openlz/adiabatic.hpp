#pragma once

// Parallel transport along the stationary manifold and the adiabatic
// expansion terms.
//
// Index conventions (fixed across the project, verified by the property
// suites): coefficient functions are evaluated at the *evaluation* point and
// the scalar rate integral runs *anchor -> evaluation*.  Forward objects list
// (evaluation, anchor):  a_{s,s'}, b_{s,s'} carry the integral from s' to s.
// Dual objects list (anchor, evaluation):  a_hat_{s,s'}, b_dual_{s,s'} carry
// the integral from s to s'.

#include <vector>

#include "openlz/algebra.hpp"
#include "openlz/lindblad.hpp"
#include "openlz/model.hpp"
#include "openlz/ode.hpp"

namespace openlz {

enum class Sign { plus, minus };
enum class Direction { forward, dual };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct TransportResult {
    SuperOp T;       // transports ran P_{s'} data to s
    double s_prime;  // start
    double s;        // end
    StepStats stats;
};

// d/ds T(s,s') = [dP/ds, P] T(s,s'), T(s',s') = 1.  Requires s >= s'.
TransportResult parallel_transport(const LZFamily& fam, double s_prime, double s,
                                   double tol = 1e-10);

// dP/ds as a superoperator (generator building block, also used by oracles)
SuperOp kernel_projection_rate(const LZFamily& fam, double s);

// scalar rate integral  int_{from}^{to} gamma_tau / ((1+gamma_tau^2) e_tau^5) dtau
double rate_integral(const LZFamily& fam, const GammaProfile& gamma, double from,
                     double to, double abstol = 1e-12);

// a^sign_{s,s'}: first-order correction to the transported stationary state
//   +-[ g((i-gm)E + h.c.) / (16(1+gm^2)e^3)  +  g^2 (P- - P+)/64 * I(s'->s) ]
Operator2 first_order_a(const LZFamily& fam, const GammaProfile& gamma, double s,
                        double s_prime, Sign sign, double abstol = 1e-12);

// a_hat^sign_{s,s'}: the dual-evolution counterpart, indexed (anchor s,
// evaluation s'); coherent coefficient conjugated, integral I(s->s').
Operator2 first_order_a_hat(const LZFamily& fam, const GammaProfile& gamma,
                            double s, double s_prime, Sign sign,
                            double abstol = 1e-12);

// b^sign_{s,s'} (forward) or its dual-direction counterpart indexed
// (anchor s, evaluation s'): the second-order kernel of the expansion.
Operator2 second_order_b(const LZFamily& fam, const GammaProfile& gamma, double s,
                         double s_prime, Sign sign, Direction direction,
                         double abstol = 1e-12);

// Definitional constructions -- the independent route used by the property
// suites: transport co-integration plus inverse_on_range composition, no use
// of the closed-form displays above.
Operator2 first_order_a_definitional(const LZFamily& fam,
                                     const GammaProfile& gamma, double s,
                                     double s_prime, Sign sign,
                                     double tol = 1e-12);
Operator2 second_order_b_definitional(const LZFamily& fam,
                                      const GammaProfile& gamma, double s,
                                      double s_prime, Sign sign,
                                      Direction direction, double tol = 1e-12);

struct BRateReport {
    double max_b_e3 = 0.0;     // max over grid of trace_norm(b) * e_s^3
    double max_bdot_e3 = 0.0;  // same for the s-derivative (central FD, h=1e-4)
    std::size_t grid_points = 0;
};

BRateReport b_rate_bound_check(const LZFamily& fam, const GammaProfile& gamma,
                               const std::vector<double>& s_grid,
                               double s_prime);

// r = (rho_numeric - P^sign_s - eps a^sign_{s,s'}) / eps^2
Operator2 remainder_extract(const LZFamily& fam, const GammaProfile& gamma,
                            double eps, double s_prime, double s, Sign sign,
                            const Operator2& rho_numeric);

}  // namespace openlz
