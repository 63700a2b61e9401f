#include "openlz/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace openlz {

SuperOp general_lindbladian(const GeneralLindblad& L) {
    if (!is_hermitian(L.H, 1e-12))
        throw std::invalid_argument("general_lindbladian: H must be Hermitian");
    const cplx mi(0.0, -1.0);
    SuperOp S = mi * (left_mult(L.H) - right_mult(L.H));
    for (const Operator2& G : L.jumps) {
        const Operator2 Gd = adjoint(G);
        const Operator2 GdG = Gd * G;
        S += sandwich(G, Gd);
        S -= 0.5 * (left_mult(GdG) + right_mult(GdG));
    }
    return S;
}

SuperOp dephasing_part(const LZFamily& fam, double s) {
    // -(1/e) ad_H^2
    const SuperOp C = commutator_superop(hamiltonian(fam, s));
    return (-1.0 / gap_energy(fam, s)) * (C * C);
}

SuperOp dephasing_lindbladian(const LZFamily& fam, double s,
                              const GammaProfile& gamma) {
    const SuperOp C = commutator_superop(hamiltonian(fam, s));
    const cplx mi(0.0, -1.0);
    SuperOp S = mi * C;
    const double gs = gamma.value(s);
    if (gs != 0.0) S += (-0.5 * gs / gap_energy(fam, s)) * (C * C);
    return S;
}

MinimalDephasingForm minimal_form(
    double e_plus, double e_minus,
    const std::vector<std::pair<cplx, cplx>>& fvals) {
    if (e_plus == e_minus)
        throw std::invalid_argument(
            "minimal_form: degenerate Hamiltonian (e+ = e-) excluded");
    cplx lambda(0.0, -(e_plus - e_minus));
    double im_sum = 0.0;
    double diff_sum = 0.0;
    for (const auto& [fp, fm] : fvals) {
        lambda += fp * std::conj(fm) -
                  0.5 * (std::norm(fp) + std::norm(fm));
        im_sum += (fp * std::conj(fm)).imag();
        diff_sum += std::norm(fp - fm);
    }
    if (lambda.imag() == 0.0)
        throw std::invalid_argument(
            "minimal_form: Im(lambda) = 0, generator not minimally degenerate");
    MinimalDephasingForm out;
    out.kappa = 0.5 * (e_plus - e_minus - im_sum);
    out.gamma = diff_sum / (4.0 * std::abs(out.kappa));
    out.lambda = lambda;
    return out;
}

GeneralLindblad gauge_transform(const GeneralLindblad& L, const GaugeParams& gp) {
    if (gp.c.size() != L.jumps.size())
        throw std::invalid_argument(
            "gauge_transform: one coefficient per jump operator required");
    GeneralLindblad out;
    out.H = L.H + gp.e * identity_op();
    const cplx halfi(0.0, 0.5);
    for (std::size_t a = 0; a < L.jumps.size(); ++a) {
        const Operator2& G = L.jumps[a];
        // the compensating Hamiltonian shift carries a 1/2: the dissipator
        // changes by the commutator [ (conj(c)G - c G*)/2 , rho ] under
        // G -> G + c
        out.H -= halfi * (std::conj(gp.c[a]) * G - gp.c[a] * adjoint(G));
        out.jumps.push_back(G + gp.c[a] * identity_op());
    }
    return out;
}

KernelProjection kernel_projection(const LZFamily& fam, double s) {
    const auto [Pp, Pm] = projectors(fam, s);
    KernelProjection kp;
    kp.P = sandwich(Pp, Pp) + sandwich(Pm, Pm);
    kp.Q = identity_superop() - kp.P;
    return kp;
}

namespace {

Operator2 inverse_on_range_impl(const LZFamily& fam, double s,
                                const GammaProfile& gamma, const Operator2& X,
                                bool dual_generator) {
    const auto [Pp, Pm] = projectors(fam, s);
    const Operator2 E = coherence_op(fam, s);
    const Operator2 Ead = adjoint(E);

    // range-membership guard: block-diagonal part must vanish
    const cplx cp = hs_inner(Pp, X), cm = hs_inner(Pm, X);
    if (trace_norm(cp * Pp + cm * Pm) > 1e-10)
        throw std::invalid_argument(
            "inverse_on_range: X has a block-diagonal component (not in ran L)");

    const double e = gap_energy(fam, s);
    const double gs = gamma.value(s);
    const cplx lamE = 2.0 * e * (dual_generator ? cplx(-gs, 1.0) : cplx(-gs, -1.0));
    // L E = lamE E, L E^* = conj(lamE) E^*  (dual generator: conjugated pair)
    const cplx cE = hs_inner(E, X), cEad = hs_inner(Ead, X);
    return (cE / lamE) * E + (cEad / std::conj(lamE)) * Ead;
}

}  // namespace

Operator2 inverse_on_range(const LZFamily& fam, double s,
                           const GammaProfile& gamma, const Operator2& X) {
    return inverse_on_range_impl(fam, s, gamma, X, false);
}

Operator2 inverse_on_range_dual(const LZFamily& fam, double s,
                                const GammaProfile& gamma, const Operator2& X) {
    return inverse_on_range_impl(fam, s, gamma, X, true);
}

}  // namespace openlz
