#pragma once

// The concrete two-level avoided-crossing family
//   H_s = (1/2) [[s, g], [g, -s]],   e_s = (1/2) sqrt(s^2 + g^2),
// its eigenprojections P^|, the real coherence operator E_s, their
// s-derivatives, and the dephasing-rate profiles gamma_s.
//
// All entries are assembled from d = 2 e_s and the two cancellation-free
// combinations d-s and d+s: for s > 0, d - s = g^2 / (d + s) (and the mirror
// identity for s < 0), so nothing degrades as |s| grows.

#include <string>
#include <utility>

#include "openlz/algebra.hpp"

namespace openlz {

struct LZFamily {
    double g;  // gap parameter, strictly positive
    explicit LZFamily(double g_);
};

struct GammaProfile {
    enum class Kind { constant, gaussian_bump, logistic };

    Kind kind = Kind::constant;
    double amplitude = 0.0;  // gamma_0 = sup_s gamma_s, >= 0
    double width = 1.0;      // scale parameter; unused for constant

    static GammaProfile constant(double gamma0);
    static GammaProfile gaussian_bump(double gamma0, double width);
    static GammaProfile logistic_step(double gamma0, double width);

    // descriptor grammar: "const:G0" | "gauss:G0:W" | "logistic:G0:W"
    static GammaProfile parse(const std::string& desc);
    std::string descriptor() const;

    double value(double s) const;      // gamma_s
    double rate(double s) const;       // d gamma / ds
    double curvature(double s) const;  // d^2 gamma / ds^2
    double sup() const { return amplitude; }

    bool is_zero() const { return amplitude == 0.0; }
};

Operator2 hamiltonian(const LZFamily& fam, double s);
double gap_energy(const LZFamily& fam, double s);

// (P+, P-), spectral projections of H_s
std::pair<Operator2, Operator2> projectors(const LZFamily& fam, double s);

// E_s = (1/4e)[[g, -s-2e], [-s+2e, -g]]: the real-phase |psi+><psi-|.
// E E^* = P+, E^* E = P- with E^* the adjoint (E is real).
Operator2 coherence_op(const LZFamily& fam, double s);

// (dP+/ds, dP-/ds) = +-(g/8e^2)(E + E^*)
std::pair<Operator2, Operator2> projector_rate(const LZFamily& fam, double s);

// dE/ds = -(g/8e^2)(P+ - P-); real symmetric, equal to d(E^*)/ds
Operator2 edot(const LZFamily& fam, double s);

// tr(P-(dP+/ds)^2 P-) = g^2/(64 e^4), the squared eigenprojection speed
double fs_velocity(const LZFamily& fam, double s);

}  // namespace openlz
