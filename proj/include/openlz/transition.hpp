#pragma once

// Headline quantities: the measured transition probability out of the ground
// band, the coherent (exponential) term, the incoherent dephasing integral,
// the combined prediction, the exact Duhamel split of the dynamics, and
// least-squares order fits of the remainder.

#include <cstddef>
#include <string>
#include <vector>

#include "openlz/model.hpp"
#include "openlz/propagate.hpp"

namespace openlz {

struct TransitionRecord {
    double g = 0.0;
    double epsilon = 0.0;
    std::string gamma_spec;  // profile descriptor, e.g. "const:0.5"
    double T = 0.0;          // symmetric horizon [-T, T]

    double p_measured = 0.0;
    double p_coherent = 0.0;           // exp(-pi g^2 / 2 eps)
    double incoherent_integral = 0.0;  // horizon-T value of the rate integral
    double p_predicted = 0.0;          // p_coherent + epsilon * incoherent
    double residual = 0.0;             // p_measured - p_predicted
    double tail_bound = 0.0;           // sup(gamma) g^2 / (8 T^4)

    double cptp_trace_defect = 0.0;
    std::size_t steps_accepted = 0;
    double wall_time_s = 0.0;

    // Diagnostics beyond the tabulated columns.
    double p_phase_avg = 0.0;  // averaged over the final oscillation period
    double choi_min_eig = 0.0;
    double rtol_used = 0.0;
    double qtol_used = 0.0;
    bool clamped = false;  // p_measured was clamped into [0, 1]
    double p_raw = 0.0;    // pre-clamp value
};

struct OrderFit {
    std::vector<double> epsilons;   // surviving points, descending epsilon
    std::vector<double> residuals;  // matching |residual| values
    double slope = 0.0;             // least squares on (log eps, log|res|)
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t excluded = 0;  // points dropped below the noise floor
};

struct DuhamelSplit {
    double coherent_part = 0.0;    // purely Hamiltonian propagation
    double incoherent_part = 0.0;  // dephasing-driven integral
};

// exp(-pi g^2 / 2 eps); depends on g and eps only through g^2/eps.
double coherent_lz(double g, double eps);

// Integral over [-T, T] (T may be infinity) of
//   gamma_tau / (1 + gamma_tau^2) * fs_velocity(tau) / e_tau
//     = g^2 gamma_tau / (64 (1 + gamma_tau^2) e_tau^5).
// Nonnegative; converges like |tau|^-5. Throws on quadrature non-convergence.
double incoherent_integral(const LZFamily& fam, const GammaProfile& gamma,
                           double T, double qtol = 1e-12);

// Envelope bound on the [T, inf) truncation error of the integral above:
// sup(gamma) * g^2 / (8 T^4).
double tail_bound(const LZFamily& fam, const GammaProfile& gamma, double T);

// coherent_lz + eps * incoherent_integral(T = infinity).
double predicted_p(const LZFamily& fam, const GammaProfile& gamma, double eps,
                   double qtol = 1e-12);

// Full simulation record: propagate the ground projector from -T to T and
// read off the excited population, with CPTP diagnostics and the prediction
// evaluated at the same horizon.
TransitionRecord measured_p(const LZFamily& fam, const GammaProfile& gamma,
                            double eps, double T,
                            const IntegratorConfig& cfg = {},
                            double qtol = 1e-12);

// Exact two-term split of the measured probability:
//   p = tr(P_T^+ U0(T,-T) P_-T^-)
//     + (1/2eps) Int_{-T}^{T} gamma_tau tr(A(tau) D_tau rho0(tau)) dtau,
// with U0 the gamma = 0 propagator, A the dual-propagated P_T^+ under the
// full generator, and D the dephasing superoperator. The sum reproduces
// measured_p to integrator + quadrature accuracy — an identity of the
// dynamics, not an approximation.
DuhamelSplit duhamel_split(const LZFamily& fam, const GammaProfile& gamma,
                           double eps, double T,
                           const IntegratorConfig& cfg = {},
                           double qtol = 1e-10);

// Least-squares slope of log|residual| against log(eps) over records sharing
// (g, gamma_spec, T) with >= 3 distinct eps. Points with |residual| below the
// per-record noise floor 10*(rtol*steps + qtol) are excluded; fewer than
// three surviving points is an error (invalid_argument).
OrderFit order_fit(const std::vector<TransitionRecord>& records);

}  // namespace openlz
