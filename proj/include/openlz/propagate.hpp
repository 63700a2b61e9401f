#pragma once

// Numerically exact solution of eps drho/ds = L_s rho for states, the full
// superpropagator U_eps(s1, s0), and the dual propagation of observables,
// with complete-positivity / trace-preservation diagnostics.
//
// The right-hand side never materializes a 4x4 generator: for this family
// L_s rho = -i [H, rho] - (gamma_s / 2 e_s) [H, [H, rho]]  (exactly), so one
// evaluation costs two 2x2 commutators per column.

#include <cstddef>

#include "openlz/algebra.hpp"
#include "openlz/model.hpp"
#include "openlz/ode.hpp"

namespace openlz {

template <class V>
struct PropagationResult {
    V value{};
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double max_local_error = 0.0;  // max normalized local error, <= 1 when ok
};

// eps drho/ds = L_s rho from s0 to s1 (s1 >= s0).
// `dense`, if given, collects the interpolant from `dense_from` onward.
PropagationResult<Operator2> evolve_state(const LZFamily& fam,
                                          const GammaProfile& gamma, double eps,
                                          const Operator2& rho0, double s0,
                                          double s1, const IntegratorConfig& cfg,
                                          DenseSolution<4>* dense = nullptr,
                                          double dense_from = 0.0);

// U_eps(s1, s0): all four columns advanced as one 16-component system.
// `dense`, if given, collects the interpolant from `dense_from` onward
// (pass dense_from = s0 for full coverage).
PropagationResult<SuperOp> evolve_superop(const LZFamily& fam,
                                          const GammaProfile& gamma, double eps,
                                          double s0, double s1,
                                          const IntegratorConfig& cfg,
                                          DenseSolution<16>* dense = nullptr,
                                          double dense_from = 0.0);

// Dual (observable) propagation A(s) = U*_eps(s_top, s) A0, integrated in the
// reversed time variable t = -s from -s_top up to -s_bottom (s_top >= s_bottom).
// `dense`, if given, is indexed by t = -s.
PropagationResult<Operator2> evolve_dual(const LZFamily& fam,
                                         const GammaProfile& gamma, double eps,
                                         const Operator2& A0, double s_top,
                                         double s_bottom,
                                         const IntegratorConfig& cfg,
                                         DenseSolution<4>* dense = nullptr);

struct CptpReport {
    double trace_defect = 0.0;  // max entry deviation of dual(U)(1) from 1
    double choi_min_eig = 0.0;  // smallest Choi eigenvalue (>= -1e-8 expected)
};

CptpReport cptp_report(const SuperOp& U);

}  // namespace openlz
