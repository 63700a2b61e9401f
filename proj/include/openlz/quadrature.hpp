#pragma once

// Adaptive quadrature: a 15-point Gauss-Kronrod rule driven by a
// worst-panel-first queue (used for the rate integrals, where integrands are
// smooth and decay like e_tau^{-5}), and an adaptive Simpson refinement
// (used on the dense-output checkpoints of the exact split, where evaluation
// is an interpolation lookup).  Improper ranges go through tau = g sinh(u),
// which also equalizes resolution between the crossing region and the tails.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace openlz {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    int panels = 0;
    bool converged = false;
};

namespace gk15 {
// Kronrod nodes on [0,1] of |x| (symmetric), Kronrod weights, Gauss weights
inline constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {0.129484966168870, 0.279705391489277,
                                 0.381830050505119, 0.417959183673469};
}  // namespace gk15

// One Gauss-Kronrod 15(7) panel; error estimate |K15 - G7|.
template <class F>
inline void gk15_panel(F&& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * gk15::xgk[j]);
        fv[14 - j] = f(c + h * gk15::xgk[j]);
    }
    fv[7] = f(c);
    double k = gk15::wgk[7] * fv[7];
    double g = gk15::wg[3] * fv[7];
    for (int j = 0; j < 7; ++j) k += gk15::wgk[j] * (fv[j] + fv[14 - j]);
    for (int j = 0; j < 3; ++j) {
        const int idx = 2 * j + 1;  // Gauss points are the odd Kronrod nodes
        g += gk15::wg[j] * (fv[idx] + fv[14 - idx]);
    }
    value = k * h;
    err = std::abs((k - g) * h);
}

template <class F>
QuadResult adaptive_gk15(F&& f, double a, double b, double abstol,
                         int panel_limit = 4000) {
    struct Panel {
        double a, b, value, err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::vector<Panel> heap;
    auto push = [&](double lo, double hi) {
        Panel p{lo, hi, 0.0, 0.0};
        gk15_panel(f, lo, hi, p.value, p.err);
        heap.push_back(p);
        std::push_heap(heap.begin(), heap.end());
    };
    push(a, b);

    auto total_err = [&] {
        double e = 0.0;
        for (const Panel& p : heap) e += p.err;
        return e;
    };

    while (static_cast<int>(heap.size()) < panel_limit) {
        if (total_err() <= abstol) break;
        std::pop_heap(heap.begin(), heap.end());
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {  // interval exhausted
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        push(worst.a, mid);
        push(mid, worst.b);
    }

    for (const Panel& p : heap) out.value += p.value;
    out.error = total_err();
    out.panels = static_cast<int>(heap.size());
    out.converged = out.error <= abstol;
    return out;
}

// Adaptive Simpson with the usual 1/15 Richardson error estimate.
namespace detail {
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, double& err_acc,
                   bool& ok) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) {
        ok = false;
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol) {
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                       err_acc, ok) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                       err_acc, ok);
}
}  // namespace detail

template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double abstol,
                            int max_depth = 40) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    bool ok = true;
    out.value = detail::simpson_rec(f, a, b, fa, fm, fb, whole, abstol,
                                    max_depth, out.error, ok);
    out.converged = ok && out.error <= abstol;
    return out;
}

// integral of f over (a, b) after tau = g sinh(u); infinite endpoints are
// cut at |tau| = 1e8 g, far below any tolerance used here for integrands
// decaying like e_tau^{-5}.
template <class F>
QuadResult integrate_sinh(F&& f, double g, double a, double b, double abstol,
                          int panel_limit = 4000) {
    const double cut = std::asinh(1e8);
    const double ua = std::isinf(a) ? (a < 0 ? -cut : cut) : std::asinh(a / g);
    const double ub = std::isinf(b) ? (b < 0 ? -cut : cut) : std::asinh(b / g);
    auto sub = [&](double u) {
        const double ch = std::cosh(u);
        return f(g * std::sinh(u)) * g * ch;
    };
    return adaptive_gk15(sub, ua, ub, abstol, panel_limit);
}

}  // namespace openlz
