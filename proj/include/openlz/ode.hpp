#pragma once

// Explicit embedded Runge-Kutta 5(4) pair (Dormand-Prince) with FSAL,
// proportional-integral step control, and the standard quartic dense-output
// interpolant.  Templated on the (complex) state dimension; the driven
// Lindblad systems here are N = 4 (states) and N = 16 (propagators), plus the
// N = 20 transport co-integration.
//
// The fast phase 2 e_s / eps is oscillatory, not dissipatively stiff, so an
// explicit pair with steps ~ eps/e_s is the right tool at desk scale.
// Integration runs in either time direction (t1 < t0 allowed).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "openlz/algebra.hpp"

namespace openlz {

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;      // 0: |t1 - t0|
    double min_step = 0.0;      // 0: 1e-9 |t1 - t0|; going below reports failure
    double initial_step = 0.0;  // 0: automatic
};

struct IntegratorFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_err = 0.0;  // max normalized local error among accepted steps (<= 1)
};

template <std::size_t N>
using CVec = std::array<cplx, N>;

namespace dp5 {
// nodes and stage coefficients
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded error weights (order-5 minus order-4 solution)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

template <std::size_t N>
struct DenseSegment {
    double t0 = 0.0, h = 0.0;  // covers [t0, t0+h] (h signed)
    std::array<CVec<N>, 5> c{};

    CVec<N> eval(double t) const {
        const double th = (t - t0) / h, th1 = 1.0 - th;
        CVec<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = c[0][i] +
                   th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
        return y;
    }
};

// Piecewise interpolant collected over an integration run; evaluation clamps
// to the covered range (queries land inside by construction in all callers).
template <std::size_t N>
struct DenseSolution {
    std::vector<DenseSegment<N>> segments;
    int dir = 1;  // sign of the integration direction

    bool empty() const { return segments.empty(); }

    CVec<N> operator()(double t) const {
        std::size_t lo = 0, hi = segments.size();
        while (hi - lo > 1) {  // last segment with t0 not beyond t
            const std::size_t mid = (lo + hi) / 2;
            if ((t - segments[mid].t0) * dir >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return segments[lo].eval(t);
    }
};

// One integration run.  `f(t, y, dydt)` fills the derivative.  If `dense` is
// non-null, interpolation segments whose far end reaches `dense_from` (in the
// direction of integration) are recorded; pass dense_from = t0 for full
// coverage.
template <std::size_t N, class RHS>
CVec<N> integrate(RHS&& f, double t0, double t1, CVec<N> y,
                  const IntegratorConfig& cfg, StepStats* stats = nullptr,
                  DenseSolution<N>* dense = nullptr, double dense_from = 0.0) {
    if (t1 == t0) {
        if (dense) {  // degenerate constant segment so eval() stays total
            DenseSegment<N> seg;
            seg.t0 = t0;
            seg.h = 1.0;
            seg.c[0] = y;
            dense->segments.push_back(seg);
            dense->dir = 1;
        }
        return y;
    }

    const double span = std::abs(t1 - t0);
    const int dir = t1 > t0 ? 1 : -1;
    const double hmax = cfg.max_step > 0.0 ? cfg.max_step : span;
    const double hmin = cfg.min_step > 0.0 ? cfg.min_step : 1e-9 * span;
    if (dense) {
        dense->dir = dir;
        if (dense_from == 0.0) dense_from = t0;
    }

    std::array<CVec<N>, 7> k;
    CVec<N> ytmp, ynext;
    f(t0, y, k[0]);

    auto scaled_err = [&](const CVec<N>& y0, const CVec<N>& y1) {
        // max of componentwise mixed absolute/relative errors
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc =
                cfg.atol + cfg.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double e =
                std::abs(k[0][i] * dp5::e1 + k[2][i] * dp5::e3 + k[3][i] * dp5::e4 +
                         k[4][i] * dp5::e5 + k[5][i] * dp5::e6 + k[6][i] * dp5::e7);
            err = std::max(err, e / sc);
        }
        return err;  // caller multiplies by |h|
    };

    double h;
    if (cfg.initial_step > 0.0) {
        h = std::min(cfg.initial_step, hmax);
    } else {
        // standard two-probe guess: h ~ 0.01 |y|/|f|, refined by a curvature
        // estimate from one Euler step
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k[0][i]) / sc);
        }
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, hmax);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + dir * h0 * k[0][i];
        CVec<N> f1;
        f(t0 + dir * h0, ytmp, f1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
            d2 = std::max(d2, std::abs(f1[i] - k[0][i]) / sc);
        }
        d2 /= h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                      : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, hmax});
    }
    h = std::max(h, hmin);

    // PI controller constants (classic 5th-order values)
    const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    const double facc1 = 5.0, facc2 = 0.1;  // hnew = h/fac, fac in [0.1, 5]
    double facold = 1e-4;
    double t = t0;
    bool last_rejected = false;

    while ((t1 - t) * dir > 0.0) {
        bool final_step = false;
        if (h >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            final_step = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * dp5::a21 * k[0][i];
        f(t + dp5::c2 * hs, ytmp, k[1]);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp5::a31 * k[0][i] + dp5::a32 * k[1][i]);
        f(t + dp5::c3 * hs, ytmp, k[2]);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp5::a41 * k[0][i] + dp5::a42 * k[1][i] +
                                   dp5::a43 * k[2][i]);
        f(t + dp5::c4 * hs, ytmp, k[3]);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp5::a51 * k[0][i] + dp5::a52 * k[1][i] +
                                   dp5::a53 * k[2][i] + dp5::a54 * k[3][i]);
        f(t + dp5::c5 * hs, ytmp, k[4]);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (dp5::a61 * k[0][i] + dp5::a62 * k[1][i] +
                                   dp5::a63 * k[2][i] + dp5::a64 * k[3][i] +
                                   dp5::a65 * k[4][i]);
        f(t + hs, ytmp, k[5]);
        for (std::size_t i = 0; i < N; ++i)
            ynext[i] = y[i] + hs * (dp5::b1 * k[0][i] + dp5::b3 * k[2][i] +
                                    dp5::b4 * k[3][i] + dp5::b5 * k[4][i] +
                                    dp5::b6 * k[5][i]);
        f(t + hs, ynext, k[6]);  // FSAL stage

        const double err = h * scaled_err(y, ynext);

        const double fac11 = std::pow(std::max(err, 1e-300), expo1);
        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            if (stats) {
                ++stats->accepted;
                stats->max_err = std::max(stats->max_err, err);
            }
            if (dense && (t + hs - dense_from) * dir >= 0.0) {
                DenseSegment<N> seg;
                seg.t0 = t;
                seg.h = hs;
                for (std::size_t i = 0; i < N; ++i) {
                    const cplx dy = ynext[i] - y[i];
                    seg.c[0][i] = y[i];
                    seg.c[1][i] = dy;
                    seg.c[2][i] = hs * k[0][i] - dy;
                    seg.c[3][i] = dy - hs * k[6][i] - seg.c[2][i];
                    seg.c[4][i] =
                        hs * (dp5::d1 * k[0][i] + dp5::d3 * k[2][i] +
                              dp5::d4 * k[3][i] + dp5::d5 * k[4][i] +
                              dp5::d6 * k[5][i] + dp5::d7 * k[6][i]);
                }
                dense->segments.push_back(seg);
            }
            t = final_step ? t1 : t + hs;
            y = ynext;
            k[0] = k[6];

            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            h = std::min(hnew, hmax);
            last_rejected = false;
        } else {
            if (stats) ++stats->rejected;
            if (h <= hmin)
                throw IntegratorFailure(
                    "integrate: step size underflow (stiffness budget "
                    "exceeded; requested tolerances too tight for this eps)");
            h = h / std::min(facc1, fac11 / safe);
            last_rejected = true;
        }
        h = std::max(h, hmin);
    }
    return y;
}

}  // namespace openlz
