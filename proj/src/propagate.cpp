#include "openlz/propagate.hpp"

#include <cmath>

namespace openlz {

namespace {

// L_s X = -i [H, X] - (gamma_s / 2 e_s) [H, [H, X]], written in place.
inline void apply_generator(const Operator2& H, double damp, const Operator2& X,
                            Operator2& out) {
    const Operator2 c1 = H * X - X * H;  // [H, X]
    if (damp == 0.0) {
        out = cplx(0.0, -1.0) * c1;
        return;
    }
    const Operator2 c2 = H * c1 - c1 * H;  // [H, [H, X]]
    out = cplx(0.0, -1.0) * c1 - damp * c2;
}

template <class V>
void fill_stats(PropagationResult<V>& r, const StepStats& st) {
    r.steps_accepted = st.accepted;
    r.steps_rejected = st.rejected;
    r.max_local_error = st.max_err;
}

}  // namespace

PropagationResult<Operator2> evolve_state(const LZFamily& fam,
                                          const GammaProfile& gamma, double eps,
                                          const Operator2& rho0, double s0,
                                          double s1, const IntegratorConfig& cfg,
                                          DenseSolution<4>* dense,
                                          double dense_from) {
    const double inv_eps = 1.0 / eps;
    auto rhs = [&](double s, const CVec<4>& y, CVec<4>& dy) {
        const Operator2 H = hamiltonian(fam, s);
        const double e = gap_energy(fam, s);
        const double damp = gamma.value(s) / (2.0 * e);
        Operator2 X;
        for (int i = 0; i < 4; ++i) X.m[i] = y[i];
        Operator2 out;
        apply_generator(H, damp, X, out);
        for (int i = 0; i < 4; ++i) dy[i] = inv_eps * out.m[i];
    };

    CVec<4> y;
    for (int i = 0; i < 4; ++i) y[i] = rho0.m[i];
    StepStats st;
    y = integrate<4>(rhs, s0, s1, y, cfg, &st, dense, dense_from);

    PropagationResult<Operator2> res;
    for (int i = 0; i < 4; ++i) res.value.m[i] = y[i];
    fill_stats(res, st);
    return res;
}

PropagationResult<SuperOp> evolve_superop(const LZFamily& fam,
                                          const GammaProfile& gamma, double eps,
                                          double s0, double s1,
                                          const IntegratorConfig& cfg,
                                          DenseSolution<16>* dense,
                                          double dense_from) {
    const double inv_eps = 1.0 / eps;
    // Column j of U (the image of the j-th vectorization basis element) lives
    // at entries {i*4 + j : i}; each column evolves independently under L_s.
    auto rhs = [&](double s, const CVec<16>& y, CVec<16>& dy) {
        const Operator2 H = hamiltonian(fam, s);
        const double e = gap_energy(fam, s);
        const double damp = gamma.value(s) / (2.0 * e);
        for (int j = 0; j < 4; ++j) {
            Operator2 X;
            for (int i = 0; i < 4; ++i) X.m[i] = y[i * 4 + j];
            Operator2 out;
            apply_generator(H, damp, X, out);
            for (int i = 0; i < 4; ++i) dy[i * 4 + j] = inv_eps * out.m[i];
        }
    };

    CVec<16> y{};
    for (int i = 0; i < 4; ++i) y[i * 4 + i] = 1.0;  // identity superoperator
    StepStats st;
    y = integrate<16>(rhs, s0, s1, y, cfg, &st, dense, dense_from);

    PropagationResult<SuperOp> res;
    for (int i = 0; i < 16; ++i) res.value.s[i] = y[i];
    fill_stats(res, st);
    return res;
}

PropagationResult<Operator2> evolve_dual(const LZFamily& fam,
                                         const GammaProfile& gamma, double eps,
                                         const Operator2& A0, double s_top,
                                         double s_bottom,
                                         const IntegratorConfig& cfg,
                                         DenseSolution<4>* dense) {
    // A(s) := U*(s_top, s) A0 obeys eps dA/ds = -L*_s A with
    // L*_s A = +i [H, A] - (gamma_s / 2 e_s) [H, [H, A]].
    // Substituting t = -s, B(t) := A(-t) turns the backward problem into a
    // forward one:  eps dB/dt = +L*_{-t} B,  t from -s_top up to -s_bottom.
    const double inv_eps = 1.0 / eps;
    auto rhs = [&](double t, const CVec<4>& y, CVec<4>& dy) {
        const double s = -t;
        const Operator2 H = hamiltonian(fam, s);
        const double e = gap_energy(fam, s);
        const double damp = gamma.value(s) / (2.0 * e);
        Operator2 X;
        for (int i = 0; i < 4; ++i) X.m[i] = y[i];
        // L*_s X = +i [H, X] - damp [H, [H, X]]
        const Operator2 c1 = H * X - X * H;
        Operator2 out = cplx(0.0, 1.0) * c1;
        if (damp != 0.0) {
            const Operator2 c2 = H * c1 - c1 * H;
            out = out - damp * c2;
        }
        for (int i = 0; i < 4; ++i) dy[i] = inv_eps * out.m[i];
    };

    CVec<4> y;
    for (int i = 0; i < 4; ++i) y[i] = A0.m[i];
    StepStats st;
    y = integrate<4>(rhs, -s_top, -s_bottom, y, cfg, &st, dense,
                     dense ? -s_top : 0.0);

    PropagationResult<Operator2> res;
    for (int i = 0; i < 4; ++i) res.value.m[i] = y[i];
    fill_stats(res, st);
    return res;
}

CptpReport cptp_report(const SuperOp& U) {
    CptpReport rep;

    // Trace preservation: the dual map must fix the identity.
    const SuperOp Ud = dual(U);
    const Operator2 one = identity_op();
    const Operator2 img = apply(Ud, one);
    rep.trace_defect = max_abs_diff(img, one);

    // Complete positivity: Choi matrix PSD up to roundoff.
    const Herm4 C = choi_matrix(U);
    const auto ev = hermitian_eigenvalues(C);
    rep.choi_min_eig = ev[0];
    return rep;
}

}  // namespace openlz
