#pragma once

// Lindblad generators: the general (H, {Gamma_a}) construction, the canonical
// two-level dephasing form L = -i ad_H + (gamma/2) D with
// D rho = -[sqrt(H), [sqrt(H), rho]], the kernel projection P, the inverse of
// L on its range, the minimal-form reduction, and gauge transformations.
//
// For the traceless two-level H with H^2 = e^2, sqrt(H) := sgn(H) sqrt(|H|)
// = H / sqrt(e), so D = -(1/e) ad_H^2 exactly; builders below use that form.

#include <vector>

#include "openlz/algebra.hpp"
#include "openlz/model.hpp"

namespace openlz {

struct GeneralLindblad {
    Operator2 H;                  // Hermitian within 1e-12
    std::vector<Operator2> jumps; // Gamma_alpha
};

struct MinimalDephasingForm {
    double kappa;  // half splitting, != 0
    double gamma;  // dephasing strength, >= 0
    cplx lambda;   // nonzero eigenvalue; lambda = -2i kappa - 2 gamma |kappa|
};

struct GaugeParams {
    std::vector<cplx> c;  // one coefficient per jump operator
    double e = 0.0;       // Hamiltonian shift
};

struct KernelProjection {
    SuperOp P;  // rho -> sum_j P^j rho P^j  (block-diagonal part)
    SuperOp Q;  // 1 - P                      (off-diagonal part)
};

// L rho = -i[H, rho] + sum_a (G rho G* - (1/2){G*G, rho}).
// Throws std::invalid_argument for non-Hermitian H (tolerance 1e-12).
SuperOp general_lindbladian(const GeneralLindblad& L);

// canonical dephasing generator at (fam, s): -i ad_H - (gamma_s / 2e) ad_H^2
SuperOp dephasing_lindbladian(const LZFamily& fam, double s,
                              const GammaProfile& gamma);

// D alone: annihilates P^|, eigenvalue -4 e_s on E and E^*
SuperOp dephasing_part(const LZFamily& fam, double s);

// Reduction of a two-level dephasing Lindbladian given the eigenvalues
// e^| of H and the jump eigenvalue pairs f_a^| = f_a(e^|):
//   lambda = -i(e+ - e-) + sum_a [f+ conj(f-) - (|f+|^2 + |f-|^2)/2]
//   kappa  = (e+ - e- - sum_a Im(f+ conj(f-))) / 2
//   gamma  = sum_a |f+ - f-|^2 / (4 |kappa|)
// Throws std::invalid_argument when e+ = e- or Im(lambda) = 0 (not minimally
// degenerate).
MinimalDephasingForm minimal_form(double e_plus, double e_minus,
                                  const std::vector<std::pair<cplx, cplx>>& fvals);

// Gauge shift Gamma_a -> Gamma_a + c_a, H -> H + e - (i/2) sum_a (conj(c_a)
// Gamma_a - c_a Gamma_a*); leaves general_lindbladian invariant.
GeneralLindblad gauge_transform(const GeneralLindblad& L, const GaugeParams& gp);

KernelProjection kernel_projection(const LZFamily& fam, double s);

// L_s^{-1} X for X in ran L_s (off-diagonal sector), via the basis
// coefficients of X in {E, E^*}:
//   L^{-1} E = E / (2(-i - gamma) e),  L^{-1} E^* = conj-coefficient mirror.
// Throws std::invalid_argument when the block-diagonal part of X exceeds
// 1e-10 in trace norm (X not in the range; a caller bug, not a numeric edge).
Operator2 inverse_on_range(const LZFamily& fam, double s,
                           const GammaProfile& gamma, const Operator2& X);

// Same, for the dual generator L_s^* (eigenvalues conjugated); used by the
// dual-direction expansion oracles.
Operator2 inverse_on_range_dual(const LZFamily& fam, double s,
                                const GammaProfile& gamma, const Operator2& X);

}  // namespace openlz
