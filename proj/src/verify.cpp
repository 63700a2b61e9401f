#include "openlz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "openlz/adiabatic.hpp"
#include "openlz/lindblad.hpp"
#include "openlz/model.hpp"
#include "openlz/propagate.hpp"
#include "openlz/transition.hpp"

namespace openlz {

namespace {

struct Suite {
    std::string prefix;
    std::vector<CheckResult> out;

    explicit Suite(std::string p) : prefix(std::move(p)) {}

    void check(const std::string& name, double measured, double tolerance,
               const std::string& detail) {
        out.push_back({prefix + "/" + name, measured <= tolerance, measured,
                       tolerance, detail});
    }
};

std::mt19937_64 make_rng() { return std::mt19937_64(0x00c0ffee5eedULL); }

cplx random_cplx(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    const double im = u(rng);
    return {re, im};
}

Operator2 random_op(std::mt19937_64& rng) {
    Operator2 a;
    for (int i = 0; i < 4; ++i) a.m[i] = random_cplx(rng);
    return a;
}

Operator2 random_herm(std::mt19937_64& rng) {
    const Operator2 a = random_op(rng);
    return 0.5 * (a + adjoint(a));
}

Operator2 random_density(std::mt19937_64& rng) {
    const Operator2 a = random_op(rng);
    const Operator2 m = a * adjoint(a);
    return (1.0 / trace(m).real()) * m;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

// smallest eigenvalue of a 2x2 Hermitian matrix
double herm2_min_eig(const Operator2& a) {
    const double mid = 0.5 * (a.m[0].real() + a.m[3].real());
    const double dd = 0.5 * (a.m[0].real() - a.m[3].real());
    const double disc = std::sqrt(dd * dd + std::norm(a(0, 1)));
    return mid - disc;
}

// ---------------------------------------------------------------- algebra --

std::vector<CheckResult> suite_algebra() {
    Suite S("algebra");
    auto rng = make_rng();

    {  // ||b+ E + b- E*||_1 = |b+| + |b-|  (rank-1 split of the trace norm)
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -8.0, 8.0);
            const Operator2 E = coherence_op(fam, s);
            const cplx bp = random_cplx(rng), bm = random_cplx(rng);
            const double val = trace_norm(bp * E + bm * adjoint(E));
            worst = std::max(worst,
                             std::abs(val - (std::abs(bp) + std::abs(bm))));
        }
        {  // pinned instance: coefficients (3, 4) give exactly 7
            const LZFamily fam(1.0);
            const Operator2 E = coherence_op(fam, 0.7);
            worst = std::max(
                worst, std::abs(trace_norm(3.0 * E + 4.0 * adjoint(E)) - 7.0));
        }
        S.check("trace-norm-rank1-split", worst, 1e-12,
                "max | ||b+E+b-E*||_1 - (|b+|+|b-|) | over 200 samples");
    }

    {  // |tr(AB)| <= ||A|| ||B||_1
        double worst = -1.0;
        for (int t = 0; t < 1000; ++t) {
            const Operator2 a = random_op(rng), b = random_op(rng);
            const double lhs = std::abs(trace(a * b));
            const double rhs = operator_norm(a) * trace_norm(b);
            worst = std::max(worst, lhs - rhs);
        }
        S.check("pairing-inequality", worst, 1e-12,
                "max of |tr(AB)| - ||A|| ||B||_1 over 1000 random pairs");
    }

    {  // norm axioms for the trace norm
        double worst = 0.0;
        for (int t = 0; t < 300; ++t) {
            const Operator2 a = random_op(rng), b = random_op(rng);
            worst = std::max(
                worst, trace_norm(a + b) - trace_norm(a) - trace_norm(b));
            const cplx c = random_cplx(rng);
            worst = std::max(worst, std::abs(trace_norm(c * a) -
                                             std::abs(c) * trace_norm(a)));
        }
        S.check("trace-norm-axioms", worst, 1e-12,
                "triangle inequality and absolute homogeneity, 300 samples");
    }

    {  // vectorize round trip is exact
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Operator2 a = random_op(rng);
            worst = std::max(worst, max_abs_diff(devectorize(vectorize(a)), a));
        }
        S.check("vectorize-round-trip", worst, 0.0,
                "devectorize(vectorize(A)) == A exactly, 100 samples");
    }

    {  // bilinear duality pairing tr(dual(S)(A) rho) = tr(A S(rho))
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            SuperOp Sop;
            for (int i = 0; i < 16; ++i) Sop.s[i] = random_cplx(rng);
            const SuperOp D = dual(Sop);
            const Operator2 a = random_op(rng), r = random_op(rng);
            worst = std::max(worst, std::abs(trace(apply(D, a) * r) -
                                             trace(a * apply(Sop, r))));
        }
        S.check("dual-pairing", worst, 1e-12,
                "tr(dual(S)(A) rho) vs tr(A S(rho)), 200 random triples");
    }

    {  // Choi spectrum of the identity channel is {2, 0, 0, 0}
        const auto ev = hermitian_eigenvalues(choi_matrix(identity_superop()));
        const double worst =
            std::max({std::abs(ev[0]), std::abs(ev[1]), std::abs(ev[2]),
                      std::abs(ev[3] - 2.0)});
        S.check("choi-identity-spectrum", worst, 1e-12,
                "eigenvalues of the identity Choi matrix vs {0,0,0,2}");
    }

    return S.out;
}

// ------------------------------------------------------------------ model --

std::vector<CheckResult> suite_model() {
    Suite S("model");
    auto rng = make_rng();

    {  // H = e (P+ - P-)
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -30.0, 30.0);
            const auto [pp, pm] = projectors(fam, s);
            const double e = gap_energy(fam, s);
            worst = std::max(worst, max_abs_diff(hamiltonian(fam, s),
                                                 e * (pp - pm)));
        }
        S.check("spectral-identity", worst, 1e-12,
                "||H - e(P+ - P-)||_max over 200 samples");
    }

    {  // {P+, P-, E, E*} is orthonormal in the Hilbert-Schmidt inner product
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -20.0, 20.0);
            const auto [pp, pm] = projectors(fam, s);
            const Operator2 E = coherence_op(fam, s);
            const Operator2 basis[4] = {pp, pm, E, adjoint(E)};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    const cplx gram = hs_inner(basis[i], basis[j]);
                    worst = std::max(
                        worst, std::abs(gram - (i == j ? 1.0 : 0.0)));
                }
        }
        S.check("basis-orthonormal", worst, 1e-12,
                "Gram matrix of {P+,P-,E,E*} vs identity, 100 samples");
    }

    {  // dP/ds and dE/ds against central finite differences
        double worst = 0.0;
        const double h = 1e-5;
        for (int t = 0; t < 100; ++t) {
            const LZFamily fam(uniform(rng, 0.5, 2.0));
            const double s = uniform(rng, -10.0, 10.0);
            const Operator2 fd_p =
                (1.0 / (2.0 * h)) * (projectors(fam, s + h).first -
                                     projectors(fam, s - h).first);
            worst = std::max(
                worst, max_abs_diff(projector_rate(fam, s).first, fd_p));
            const Operator2 fd_e = (1.0 / (2.0 * h)) *
                                   (coherence_op(fam, s + h) -
                                    coherence_op(fam, s - h));
            worst = std::max(worst, max_abs_diff(edot(fam, s), fd_e));
        }
        S.check("derivative-formulas-fd", worst, 1e-7,
                "dP+/ds and dE/ds vs central differences (h=1e-5)");
    }

    {  // tr(P-(dP+/ds)^2 P-) equals the closed form g^2/(64 e^4)
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -20.0, 20.0);
            const auto [pp, pm] = projectors(fam, s);
            (void)pp;
            const Operator2 pd = projector_rate(fam, s).first;
            const double direct = trace(pm * pd * pd * pm).real();
            worst = std::max(worst,
                             std::abs(direct - fs_velocity(fam, s)));
        }
        S.check("fs-velocity-direct", worst, 1e-12,
                "direct trace vs closed form over 200 samples");
    }

    {  // profile derivative evaluators vs five-point finite differences
        const GammaProfile profiles[3] = {
            GammaProfile::constant(0.7), GammaProfile::gaussian_bump(1.0, 4.0),
            GammaProfile::logistic_step(0.5, 2.0)};
        double worst = 0.0;
        const double h = 1e-2;
        for (const auto& gp : profiles) {
            for (int t = 0; t < 60; ++t) {
                const double s = uniform(rng, -12.0, 12.0);
                auto d5 = [&](auto&& f) {
                    return (8.0 * (f(s + h) - f(s - h)) -
                            (f(s + 2 * h) - f(s - 2 * h))) /
                           (12.0 * h);
                };
                const double scale = std::max(1e-3, 1e-3 * gp.sup());
                const double fd_rate =
                    d5([&](double x) { return gp.value(x); });
                worst = std::max(worst,
                                 std::abs(fd_rate - gp.rate(s)) /
                                     std::max(scale, std::abs(gp.rate(s))));
                const double fd_curv =
                    d5([&](double x) { return gp.rate(x); });
                worst = std::max(
                    worst, std::abs(fd_curv - gp.curvature(s)) /
                               std::max(scale, std::abs(gp.curvature(s))));
            }
        }
        S.check("gamma-profile-derivatives", worst, 1e-6,
                "relative defect of rate/curvature vs 5-point stencil");
    }

    return S.out;
}

// ---------------------------------------------------------------- lindblad --

std::vector<CheckResult> suite_lindblad() {
    Suite S("lindblad");
    auto rng = make_rng();

    {  // generator annihilates both spectral projections
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -15.0, 15.0);
            const GammaProfile gm = GammaProfile::constant(uniform(rng, 0.0, 2.0));
            const SuperOp L = dephasing_lindbladian(fam, s, gm);
            const auto [pp, pm] = projectors(fam, s);
            worst = std::max(worst, trace_norm(apply(L, pp)));
            worst = std::max(worst, trace_norm(apply(L, pm)));
        }
        S.check("dephasing-stationarity", worst, 1e-12,
                "||L P?||_1 over 100 sampled (g, s, gamma)");
    }

    {  // spectrum {0, 0, 2(-i-gamma)e, 2(i-gamma)e} on the operator basis
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -15.0, 15.0);
            const double g0 = uniform(rng, 0.0, 2.0);
            const GammaProfile gm = GammaProfile::constant(g0);
            const SuperOp L = dephasing_lindbladian(fam, s, gm);
            const double e = gap_energy(fam, s);
            const Operator2 E = coherence_op(fam, s);
            const cplx lamE = 2.0 * e * cplx(-g0, -1.0);
            worst = std::max(worst, max_abs_diff(apply(L, E), lamE * E));
            worst = std::max(worst, max_abs_diff(apply(L, adjoint(E)),
                                                 std::conj(lamE) * adjoint(E)));
        }
        S.check("dephasing-spectrum", worst, 1e-12,
                "L E = 2(-i-gamma)e E and the conjugate branch, 100 samples");
    }

    {  // induced trace-norm bound ||D rho||_1 <= 4 e ||rho||_1
        double worst = -1.0;
        for (int t = 0; t < 300; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -15.0, 15.0);
            const SuperOp D = dephasing_part(fam, s);
            const Operator2 rho = random_op(rng);
            const double lhs = trace_norm(apply(D, rho));
            const double rhs =
                4.0 * gap_energy(fam, s) * trace_norm(rho);
            worst = std::max(worst, lhs - rhs);
        }
        S.check("dephasing-norm-bound", worst, 1e-10,
                "max of ||D rho||_1 - 4e||rho||_1 over 300 samples");
    }

    {  // minimal-form reduction reproduces the full generator
        double worst = 0.0;
        int done = 0;
        while (done < 50) {
            const double ep = uniform(rng, -2.0, 2.0);
            const double em = uniform(rng, -2.0, 2.0);
            std::vector<std::pair<cplx, cplx>> fv;
            const int na = 1 + static_cast<int>(rng() % 2);
            for (int a = 0; a < na; ++a)
                fv.emplace_back(random_cplx(rng), random_cplx(rng));
            MinimalDephasingForm mf;
            try {
                mf = minimal_form(ep, em, fv);
            } catch (const std::invalid_argument&) {
                continue;  // degenerate draw; resample
            }
            if (std::abs(mf.kappa) < 0.05) continue;
            ++done;

            GeneralLindblad gl;
            gl.H = Operator2{};
            gl.H.m[0] = ep;
            gl.H.m[3] = em;
            for (const auto& [fp, fm] : fv) {
                Operator2 j{};
                j.m[0] = fp;
                j.m[3] = fm;
                gl.jumps.push_back(j);
            }
            const SuperOp full = general_lindbladian(gl);

            Operator2 hc{};  // kappa (P+ - P-) in the same eigenbasis
            hc.m[0] = mf.kappa;
            hc.m[3] = -mf.kappa;
            const SuperOp C = commutator_superop(hc);
            const SuperOp canonical =
                cplx(0.0, -1.0) * C +
                (-mf.gamma / (2.0 * std::abs(mf.kappa))) * (C * C);

            const Operator2 e01(0.0, 1.0, 0.0, 0.0);
            const Operator2 e10(0.0, 0.0, 1.0, 0.0);
            const Operator2 dp(1.0, 0.0, 0.0, 0.0);
            const Operator2 dm(0.0, 0.0, 0.0, 1.0);
            for (const Operator2& x : {dp, dm, e01, e10})
                worst = std::max(
                    worst, max_abs_diff(apply(full, x), apply(canonical, x)));
            worst = std::max(
                worst, std::abs(mf.lambda - (cplx(0.0, -2.0) * mf.kappa -
                                             2.0 * mf.gamma *
                                                 std::abs(mf.kappa))));
        }
        S.check("minimal-form-equivalence", worst, 1e-12,
                "full vs canonical generator on the operator basis, 50 draws");
    }

    {  // gauge transformations leave the generator invariant
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            GeneralLindblad gl;
            gl.H = random_herm(rng);
            const int na = 1 + (t % 3);
            for (int a = 0; a < na; ++a) gl.jumps.push_back(random_op(rng));
            GaugeParams gp;
            for (int a = 0; a < na; ++a) gp.c.push_back(random_cplx(rng));
            gp.e = uniform(rng, -3.0, 3.0);
            const SuperOp before = general_lindbladian(gl);
            const SuperOp after = general_lindbladian(gauge_transform(gl, gp));
            worst = std::max(worst, max_abs_diff(after, before));
        }
        S.check("gauge-invariance", worst, 1e-10,
                "generator before vs after random gauge shifts, 50 draws");
    }

    {  // L^{-1} is a right inverse on the off-diagonal sector
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const LZFamily fam(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -15.0, 15.0);
            const GammaProfile gm = GammaProfile::constant(uniform(rng, 0.0, 2.0));
            const Operator2 E = coherence_op(fam, s);
            const Operator2 X =
                random_cplx(rng) * E + random_cplx(rng) * adjoint(E);
            const Operator2 Y = inverse_on_range(fam, s, gm, X);
            const SuperOp L = dephasing_lindbladian(fam, s, gm);
            worst = std::max(worst, max_abs_diff(apply(L, Y), X));
            worst = std::max(
                worst,
                trace_norm(apply(kernel_projection(fam, s).P, Y)));
        }
        S.check("inverse-on-range", worst, 1e-10,
                "L(L^{-1}X) = X and P L^{-1} X = 0, 100 random off-diagonal X");
    }

    return S.out;
}

// --------------------------------------------------------------- adiabatic --

std::vector<CheckResult> suite_adiabatic() {
    Suite S("adiabatic");

    const LZFamily fam(1.0);
    const GammaProfile g_const = GammaProfile::constant(0.5);
    const GammaProfile g_bump = GammaProfile::gaussian_bump(1.0, 4.0);
    const GammaProfile g_zero = GammaProfile::constant(0.0);

    {  // transport intertwines the kernel projections and moves P- to P-
        const auto tr = parallel_transport(fam, -5.0, 5.0, 1e-10);
        const SuperOp Pst = kernel_projection(fam, -5.0).P;
        const SuperOp Pen = kernel_projection(fam, 5.0).P;
        const double worst = max_abs_diff(tr.T * Pst, Pen * tr.T);
        const Operator2 moved = apply(tr.T, projectors(fam, -5.0).second);
        const double kernel_defect =
            trace_norm(moved - projectors(fam, 5.0).second);
        S.check("transport-intertwining", worst, 1e-8,
                "||T P_{s'} - P_s T||_max, s' = -5, s = 5, tol 1e-10");
        S.check("transport-kernel", kernel_defect, 1e-8,
                "||T P^-_{-5} - P^-_{5}||_1");

        // isometry on ran P and two-segment composition
        auto rng = make_rng();
        double iso = 0.0;
        const auto [pp0, pm0] = projectors(fam, -5.0);
        for (int t = 0; t < 50; ++t) {
            const Operator2 rho =
                random_cplx(rng) * pp0 + random_cplx(rng) * pm0;
            iso = std::max(iso, std::abs(trace_norm(apply(tr.T, rho)) -
                                         trace_norm(rho)));
        }
        S.check("transport-isometry", iso, 1e-8,
                "trace norm preserved on ran P_{s'}, 50 random combinations");

        const auto trA = parallel_transport(fam, -5.0, 0.0, 1e-10);
        const auto trB = parallel_transport(fam, 0.0, 5.0, 1e-10);
        S.check("transport-composition", max_abs_diff(trB.T * trA.T, tr.T),
                1e-8, "T(5,0) T(0,-5) vs T(5,-5) entrywise");
    }

    {  // P L^{-1} dP/ds = 0
        auto rng = make_rng();
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const LZFamily f2(uniform(rng, 0.3, 3.0));
            const double s = uniform(rng, -15.0, 15.0);
            const GammaProfile gm =
                GammaProfile::constant(uniform(rng, 0.0, 2.0));
            const Operator2 inv = inverse_on_range(
                f2, s, gm, projector_rate(f2, s).first);
            worst = std::max(
                worst, trace_norm(apply(kernel_projection(f2, s).P, inv)));
        }
        S.check("kernel-annihilates-inverse-rate", worst, 1e-12,
                "||P L^{-1} dP+/ds||_1 over 100 samples");
    }

    {  // closed forms vs definitional construction (both signs, two profiles)
        double worst_a = 0.0, worst_b = 0.0, worst_bd = 0.0;
        const double s = 2.0, sp = -3.0;
        for (const GammaProfile* gm : {&g_const, &g_bump}) {
            for (const Sign sign : {Sign::plus, Sign::minus}) {
                worst_a = std::max(
                    worst_a,
                    max_abs_diff(first_order_a(fam, *gm, s, sp, sign),
                                 first_order_a_definitional(fam, *gm, s, sp,
                                                            sign)));
                worst_b = std::max(
                    worst_b,
                    max_abs_diff(
                        second_order_b(fam, *gm, s, sp, sign,
                                       Direction::forward),
                        second_order_b_definitional(fam, *gm, s, sp, sign,
                                                    Direction::forward)));
                worst_bd = std::max(
                    worst_bd,
                    max_abs_diff(
                        second_order_b(fam, *gm, s, sp, sign,
                                       Direction::dual),
                        second_order_b_definitional(fam, *gm, s, sp, sign,
                                                    Direction::dual)));
            }
        }
        S.check("a-closed-vs-definitional", worst_a, 1e-8,
                "(s,s') = (2,-3), const and bump profiles, both signs");
        S.check("b-closed-vs-definitional", worst_b, 1e-8,
                "forward kernel, same cells");
        S.check("b-dual-closed-vs-definitional", worst_bd, 1e-8,
                "dual-direction kernel, same cells");
    }

    {  // gamma = 0 reduction: a equals L0^{-1} dP/ds directly
        auto rng = make_rng();
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const LZFamily f2(uniform(rng, 0.5, 2.0));
            const double s = uniform(rng, -8.0, 8.0);
            const double sp = s - uniform(rng, 0.5, 10.0);
            const Operator2 a =
                first_order_a(f2, g_zero, s, sp, Sign::minus);
            const Operator2 ref = inverse_on_range(
                f2, s, g_zero, projector_rate(f2, s).second);
            worst = std::max(worst, max_abs_diff(a, ref));
        }
        S.check("a-gamma0-inverse-rate", worst, 1e-12,
                "a^- at gamma=0 vs L0^{-1} dP-/ds, 50 samples");
    }

    {  // structural facts about a; trace-norm identities for a and its dual
        auto rng = make_rng();
        double anti = 0.0, herm = 0.0, tl = 0.0, n1 = 0.0, n2 = 0.0;
        for (int t = 0; t < 50; ++t) {
            const LZFamily f2(uniform(rng, 0.5, 2.0));
            const double s = uniform(rng, -8.0, 8.0);
            const double sp = s - uniform(rng, 0.5, 10.0);
            const Operator2 ap = first_order_a(f2, g_const, s, sp, Sign::plus);
            const Operator2 am = first_order_a(f2, g_const, s, sp, Sign::minus);
            anti = std::max(anti, max_abs_diff(ap, -1.0 * am));
            herm = std::max(herm, max_abs_diff(ap, adjoint(ap)));
            tl = std::max(tl, std::abs(trace(ap)));

            const double e = gap_energy(f2, s);
            const Operator2 a0 = first_order_a(f2, g_zero, s, sp, Sign::minus);
            n1 = std::max(n1, std::abs(trace_norm(a0) -
                                       f2.g / (8.0 * e * e * e)));
            const double g0 = uniform(rng, 0.0, 2.0);
            const GammaProfile gm = GammaProfile::constant(g0);
            const Operator2 ah =
                first_order_a_hat(f2, gm, s, s, Sign::plus);
            n2 = std::max(
                n2, std::abs(trace_norm(ah) -
                             f2.g / (8.0 * std::sqrt(1.0 + g0 * g0) * e * e *
                                     e)));
        }
        S.check("a-sign-antisymmetry", anti, 1e-15, "a+ = -a-, 50 samples");
        S.check("a-hermitian-traceless", std::max(herm, tl), 1e-15,
                "a+ Hermitian and traceless, 50 samples");
        S.check("a-trace-norm-identity", n1, 1e-12,
                "||a^-||_1 = g/(8e^3) at gamma = 0, 50 samples");
        S.check("a-hat-trace-norm-identity", n2, 1e-12,
                "coherent part: ||a-hat^+||_1 = g/(8 sqrt(1+gamma^2) e^3)");
    }

    {  // order of the stationary-equation residual: exactly eps^2
        const double s = 1.0, sp = -4.0, h = 1e-5;
        auto residual = [&](double eps) {
            auto state = [&](double x) {
                return projectors(fam, x).second +
                       eps * first_order_a(fam, g_const, x, sp, Sign::minus);
            };
            const Operator2 lhs =
                apply(dephasing_lindbladian(fam, s, g_const), state(s));
            const Operator2 dstate =
                (1.0 / (2.0 * h)) * (state(s + h) - state(s - h));
            return trace_norm(lhs - eps * dstate);
        };
        const double eps[3] = {0.1, 0.05, 0.025};
        double xs = 0, ys = 0, xx = 0, xy = 0;
        for (const double e : eps) {
            const double x = std::log(e), y = std::log(residual(e));
            xs += x;
            ys += y;
            xx += x * x;
            xy += x * y;
        }
        const double slope =
            (3.0 * xy - xs * ys) / (3.0 * xx - xs * xs);
        S.check("stationary-residual-order", std::abs(slope - 2.0), 0.05,
                "slope of ||L(P+eps a) - eps d/ds(P+eps a)||_1 vs eps");
    }

    {  // boundedness scans of the second-order kernel and its rate
        std::vector<double> grid;
        for (int i = 0; i <= 100; ++i) grid.push_back(-50.0 + i);
        const auto rep_bump = b_rate_bound_check(fam, g_bump, grid, -50.0);
        const auto rep_const = b_rate_bound_check(fam, g_const, grid, -50.0);
        const double worst =
            std::max({rep_bump.max_b_e3, rep_bump.max_bdot_e3,
                      rep_const.max_b_e3, rep_const.max_bdot_e3});
        std::ostringstream det;
        det << "max ||b||_1 e^3 = "
            << std::max(rep_bump.max_b_e3, rep_const.max_b_e3)
            << ", max ||db/ds||_1 e^3 = "
            << std::max(rep_bump.max_bdot_e3, rep_const.max_bdot_e3)
            << " on s in [-50, 50]";
        S.check("b-bound-scan", std::isfinite(worst) ? worst : 1e30, 1e3,
                det.str());
    }

    return S.out;
}

// ---------------------------------------------------------------- propagate --

std::vector<CheckResult> suite_propagate() {
    Suite S("propagate");
    auto rng = make_rng();

    const LZFamily fam(1.0);
    const GammaProfile gm = GammaProfile::constant(0.5);
    const GammaProfile g_zero = GammaProfile::constant(0.0);
    IntegratorConfig cfg;  // rtol 1e-10, atol 1e-12

    {  // trace / Hermiticity / positivity preservation on random densities
        double tdef = 0.0, hdef = 0.0, pdef = 0.0;
        for (int t = 0; t < 5; ++t) {
            const Operator2 rho0 = random_density(rng);
            const auto res =
                evolve_state(fam, gm, 0.5, rho0, -4.0, 4.0, cfg);
            tdef = std::max(tdef, std::abs(trace(res.value).real() - 1.0));
            tdef = std::max(tdef, std::abs(trace(res.value).imag()));
            hdef = std::max(hdef,
                            max_abs_diff(res.value, adjoint(res.value)));
            pdef = std::min(pdef, herm2_min_eig(res.value));
        }
        S.check("state-trace-preserved", tdef, 1e-12,
                "|tr rho - 1| after evolution, 5 random densities");
        S.check("state-hermiticity-preserved", hdef, 1e-10,
                "||rho - rho*||_max after evolution");
        S.check("state-positivity", -pdef, 1e-8,
                "-(min eigenvalue) of evolved densities");
    }

    {  // purity is conserved by the purely Hamiltonian flow
        const Operator2 rho0 = random_density(rng);
        const double pur0 = trace(rho0 * rho0).real();
        const auto res =
            evolve_state(fam, g_zero, 0.7, rho0, -4.0, 4.0, cfg);
        const double pur1 = trace(res.value * res.value).real();
        S.check("unitary-purity", std::abs(pur1 - pur0), 1e-9,
                "tr(rho^2) drift with gamma = 0");
    }

    {  // the maximally mixed state is stationary
        Operator2 half{};
        half.m[0] = 0.5;
        half.m[3] = 0.5;
        const auto res = evolve_state(fam, gm, 0.5, half, -4.0, 4.0, cfg);
        S.check("mixed-state-stationary", max_abs_diff(res.value, half),
                1e-12, "rho = 1/2 evolves to itself");
    }

    {  // semigroup composition over an interior split point
        const auto whole = evolve_superop(fam, gm, 1.0, -2.0, 2.0, cfg);
        const auto first = evolve_superop(fam, gm, 1.0, -2.0, 0.5, cfg);
        const auto second = evolve_superop(fam, gm, 1.0, 0.5, 2.0, cfg);
        const double worst =
            max_abs_diff(second.value * first.value, whole.value);
        S.check("semigroup-composition", worst, 10.0 * cfg.rtol,
                "U(2,0.5) U(0.5,-2) vs U(2,-2), eps = 1");
    }

    {  // superoperator columns match direct state evolution
        const auto U = evolve_superop(fam, gm, 1.0, -2.0, 2.0, cfg);
        const Operator2 rho0 = random_density(rng);
        const auto direct =
            evolve_state(fam, gm, 1.0, rho0, -2.0, 2.0, cfg);
        const double worst =
            max_abs_diff(apply(U.value, rho0), direct.value);
        S.check("superop-vs-state", worst, 10.0 * cfg.rtol,
                "U rho0 vs direct state propagation");
    }

    {  // dual propagation pairs correctly with the forward propagator
        const auto U = evolve_superop(fam, gm, 1.0, -2.0, 2.0, cfg);
        const SuperOp Ud = dual(U.value);
        double ode_worst = 0.0;
        for (int t = 0; t < 3; ++t) {
            const Operator2 A = random_herm(rng);
            const auto back =
                evolve_dual(fam, gm, 1.0, A, 2.0, -2.0, cfg);
            ode_worst = std::max(ode_worst,
                                 max_abs_diff(back.value, apply(Ud, A)));
        }
        S.check("dual-ode-vs-dual-matrix", ode_worst, 10.0 * cfg.rtol,
                "dual ODE route vs transpose-pairing of U, 3 observables");

        double pair_worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Operator2 A = random_op(rng), rho = random_op(rng);
            pair_worst = std::max(
                pair_worst, std::abs(trace(apply(Ud, A) * rho) -
                                     trace(A * apply(U.value, rho))));
        }
        S.check("duality-pairing", pair_worst, 1e-12,
                "tr((U*A) rho) = tr(A (U rho)), 100 random pairs");

        const Operator2 one = identity_op();
        const auto back_one =
            evolve_dual(fam, gm, 1.0, one, 2.0, -2.0, cfg);
        S.check("dual-fixes-identity", max_abs_diff(back_one.value, one),
                1e-10, "dual propagation of the identity observable");
    }

    {  // CPTP diagnostics of a propagated channel and a unitary channel
        const auto U = evolve_superop(fam, gm, 0.5, -5.0, 5.0, cfg);
        const CptpReport rep = cptp_report(U.value);
        S.check("cptp-trace-defect", rep.trace_defect, 1e-9,
                "dual(U) applied to identity, eps = 0.5, T = 5");
        S.check("cptp-choi-positivity", std::max(-rep.choi_min_eig, 0.0),
                1e-8, "smallest Choi eigenvalue above -1e-8");

        const auto V = evolve_superop(fam, g_zero, 1.0, -1.0, 1.0, cfg);
        const auto ev = hermitian_eigenvalues(choi_matrix(V.value));
        const double worst =
            std::max({std::abs(ev[0]), std::abs(ev[1]), std::abs(ev[2]),
                      std::abs(ev[3] - 2.0)});
        S.check("unitary-choi-spectrum", worst, 1e-9,
                "gamma = 0 channel has Choi eigenvalues {2,0,0,0}");
    }

    {  // trace-norm contractivity on random Hermitian inputs
        const auto U = evolve_superop(fam, gm, 0.5, -5.0, 5.0, cfg);
        double worst = -1.0;
        for (int t = 0; t < 20; ++t) {
            const Operator2 rho = random_herm(rng);
            worst = std::max(worst,
                             trace_norm(apply(U.value, rho)) -
                                 trace_norm(rho) * (1.0 + 1e-9));
        }
        S.check("trace-norm-contractivity", worst, 0.0,
                "||U rho||_1 <= (1+1e-9) ||rho||_1, 20 Hermitian samples");
    }

    {  // halving rtol moves the answer by less than the prior error budget
        const Operator2 rho0 = random_density(rng);
        const auto coarse =
            evolve_state(fam, gm, 0.5, rho0, -5.0, 5.0, cfg);
        IntegratorConfig tight = cfg;
        tight.rtol = 0.5 * cfg.rtol;
        const auto fine =
            evolve_state(fam, gm, 0.5, rho0, -5.0, 5.0, tight);
        const double budget =
            cfg.rtol * static_cast<double>(coarse.steps_accepted);
        const double moved = max_abs_diff(coarse.value, fine.value);
        std::ostringstream det;
        det << "moved " << moved << " vs budget rtol*steps = " << budget;
        S.check("tolerance-self-consistency", moved, budget, det.str());
    }

    return S.out;
}

// --------------------------------------------------------------- transition --

std::vector<CheckResult> suite_transition() {
    Suite S("transition");
    const LZFamily g1(1.0);
    const GammaProfile gm05 = GammaProfile::constant(0.5);
    IntegratorConfig cfg;

    {  // exact two-term split of the measured probability
        const double T = 20.0, eps = 0.3;
        const auto split = duhamel_split(g1, gm05, eps, T, cfg, 1e-10);
        const auto rec = measured_p(g1, gm05, eps, T, cfg);
        const double defect = std::abs(split.coherent_part +
                                       split.incoherent_part - rec.p_measured);
        std::ostringstream det;
        det << "coherent " << split.coherent_part << " + incoherent "
            << split.incoherent_part << " vs measured " << rec.p_measured;
        S.check("duhamel-identity", defect, 1e-6, det.str());
        S.check("p-measured-range",
                std::max(rec.p_raw - 1.0, -rec.p_raw), 1e-8,
                "raw probability within [0, 1] up to roundoff");
    }

    {  // the probability depends on (g, eps) only through g^2/eps
        const auto a = measured_p(g1, gm05, 0.5, 30.0, cfg);
        const auto b = measured_p(LZFamily(2.0), gm05, 2.0, 15.0, cfg);
        S.check("scale-invariance",
                std::abs(a.p_measured - b.p_measured), 5e-3,
                "(g, eps, T) = (1, 0.5, 30) vs (2, 2.0, 15)");
    }

    {  // dephasing suppresses late-time coherences monotonically
        const double T = 10.0, eps = 0.5;
        const SuperOp Q = kernel_projection(g1, T).Q;
        const Operator2 start = projectors(g1, -T).second;
        double prev = std::numeric_limits<double>::infinity();
        double worst = 0.0;
        for (const double g0 : {0.0, 0.5, 1.0, 2.0}) {
            const GammaProfile gp = GammaProfile::constant(g0);
            const auto run = evolve_superop(g1, gp, eps, -T, T, cfg);
            const double off =
                trace_norm(apply(Q, apply(run.value, start)));
            worst = std::max(worst, off - prev);
            prev = off;
        }
        S.check("coherence-suppression-monotone", worst, 1e-12,
                "off-diagonal trace norm non-increasing in gamma "
                "{0, 0.5, 1, 2}");
    }

    {  // closed form of the infinite-horizon incoherent integral
        double worst = 0.0;
        for (const double g0 : {0.25, 0.5, 1.0, 2.0}) {
            const GammaProfile gp = GammaProfile::constant(g0);
            const double numeric = incoherent_integral(
                g1, gp, std::numeric_limits<double>::infinity(), 1e-13);
            const double closed = 2.0 * g0 / (3.0 * (1.0 + g0 * g0));
            worst = std::max(worst, std::abs(numeric - closed));
        }
        S.check("incoherent-closed-form", worst, 1e-10,
                "vs 2 gamma / (3 g^2 (1+gamma^2)) at g = 1");
    }

    {  // envelope bound on the finite-horizon truncation
        const GammaProfile g_one = GammaProfile::constant(1.0);
        const double inf = std::numeric_limits<double>::infinity();
        double worst = -1.0;
        for (const double T : {5.0, 10.0, 25.0}) {
            const double tail = incoherent_integral(g1, g_one, inf, 1e-13) -
                                incoherent_integral(g1, g_one, T, 1e-13);
            worst = std::max(worst, tail - tail_bound(g1, g_one, T));
        }
        S.check("tail-bound-envelope", worst, 0.0,
                "integral(inf) - integral(T) <= bound for T in {5, 10, 25}; "
                "the one-sided envelope formula certifies the two-sided "
                "truncation only for sup gamma >= 1, so the check pins "
                "gamma = 1");
        S.check("tail-bound-value",
                tail_bound(g1, g_one, 25.0), 3.21e-7,
                "bound at (g, gamma, T) = (1, 1, 25)");
    }

    {  // the coherent term is a function of g^2/eps alone
        S.check("coherent-scale-invariance",
                std::abs(coherent_lz(1.0, 0.5) - coherent_lz(2.0, 2.0)),
                1e-15, "coherent_lz(1, 0.5) vs coherent_lz(2, 2.0)");
    }

    {  // prediction composes its two verified ingredients
        double worst = 0.0;
        for (const double g0 : {0.5, 1.0}) {
            const GammaProfile gp = GammaProfile::constant(g0);
            const double expected =
                coherent_lz(1.0, 0.2) +
                0.2 * (2.0 * g0 / (3.0 * (1.0 + g0 * g0)));
            worst = std::max(
                worst, std::abs(predicted_p(g1, gp, 0.2) - expected));
        }
        S.check("predicted-composition", worst, 1e-10,
                "predicted_p vs closed-form sum at eps = 0.2");
    }

    return S.out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "algebra", "model", "lindblad", "adiabatic", "propagate",
        "transition", "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite) {
    if (suite == "algebra") return suite_algebra();
    if (suite == "model") return suite_model();
    if (suite == "lindblad") return suite_lindblad();
    if (suite == "adiabatic") return suite_adiabatic();
    if (suite == "propagate") return suite_propagate();
    if (suite == "transition") return suite_transition();
    if (suite == "all") {
        std::vector<CheckResult> all;
        for (const auto& name : suite_names()) {
            if (name == "all") continue;
            auto part = run_suite(name);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument(
        "unknown verification suite '" + suite +
        "' (known: algebra, model, lindblad, adiabatic, propagate, "
        "transition, all)");
}

}  // namespace openlz
