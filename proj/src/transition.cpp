#include "openlz/transition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "openlz/lindblad.hpp"
#include "openlz/quadrature.hpp"

namespace openlz {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch())
        .count();
}

SuperOp superop_from(const CVec<16>& v) {
    SuperOp S;
    for (int i = 0; i < 16; ++i) S.s[i] = v[i];
    return S;
}

}  // namespace

double coherent_lz(double g, double eps) {
    if (g <= 0.0) throw std::invalid_argument("coherent_lz: g must be > 0");
    if (eps <= 0.0) throw std::invalid_argument("coherent_lz: eps must be > 0");
    return std::exp(-std::numbers::pi * g * g / (2.0 * eps));
}

double incoherent_integral(const LZFamily& fam, const GammaProfile& gamma,
                           double T, double qtol) {
    if (qtol <= 0.0)
        throw std::invalid_argument("incoherent_integral: qtol must be > 0");
    if (!(T > 0.0))
        throw std::invalid_argument("incoherent_integral: T must be > 0");
    if (gamma.is_zero()) return 0.0;

    const double g2 = fam.g * fam.g;
    auto integrand = [&](double tau) {
        const double gs = gamma.value(tau);
        const double e = gap_energy(fam, tau);
        const double e5 = e * e * e * e * e;
        return g2 * gs / (64.0 * (1.0 + gs * gs) * e5);
    };
    const QuadResult q = integrate_sinh(integrand, fam.g, -T, T, qtol);
    if (!q.converged)
        throw std::runtime_error(
            "incoherent_integral: quadrature did not converge to requested "
            "tolerance");
    return q.value;
}

double tail_bound(const LZFamily& fam, const GammaProfile& gamma, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("tail_bound: T must be > 0");
    if (std::isinf(T)) return 0.0;
    return gamma.sup() * fam.g * fam.g / (8.0 * T * T * T * T);
}

double predicted_p(const LZFamily& fam, const GammaProfile& gamma, double eps,
                   double qtol) {
    const double inf = std::numeric_limits<double>::infinity();
    return coherent_lz(fam.g, eps) +
           eps * incoherent_integral(fam, gamma, inf, qtol);
}

TransitionRecord measured_p(const LZFamily& fam, const GammaProfile& gamma,
                            double eps, double T, const IntegratorConfig& cfg,
                            double qtol) {
    if (!(T > 0.0)) throw std::invalid_argument("measured_p: T must be > 0");
    if (!(eps > 0.0))
        throw std::invalid_argument("measured_p: eps must be > 0");
    const double t_start = now_seconds();

    TransitionRecord rec;
    rec.g = fam.g;
    rec.epsilon = eps;
    rec.gamma_spec = gamma.descriptor();
    rec.T = T;
    rec.rtol_used = cfg.rtol;
    rec.qtol_used = qtol;

    // One oscillation period of the fast phase at the horizon, for averaging.
    const double eT = gap_energy(fam, T);
    double window = std::numbers::pi * eps / eT;
    if (window > T) window = T;

    DenseSolution<16> dense;
    const auto run =
        evolve_superop(fam, gamma, eps, -T, T, cfg, &dense, T - window);

    const Operator2 plus_T = projectors(fam, T).first;
    const Operator2 minus_start = projectors(fam, -T).second;

    const Operator2 rho_final = apply(run.value, minus_start);
    rec.p_raw = trace(plus_T * rho_final).real();
    rec.p_measured = rec.p_raw;
    if (rec.p_measured < 0.0 || rec.p_measured > 1.0) {
        rec.clamped = true;
        rec.p_measured = std::clamp(rec.p_measured, 0.0, 1.0);
    }

    // Composite Simpson average of the instantaneous excited population over
    // the final oscillation period (removes the residual coherent beat).
    {
        const int n = 64;  // even
        const double a = T - window, h = window / n;
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double t = (k == n) ? T : a + h * k;
            const Operator2 rho_t = apply(superop_from(dense(t)), minus_start);
            const Operator2 plus_t = projectors(fam, t).first;
            const double f = trace(plus_t * rho_t).real();
            const double wgt = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += wgt * f;
        }
        rec.p_phase_avg = acc * (h / 3.0) / window;
    }

    const CptpReport cp = cptp_report(run.value);
    rec.cptp_trace_defect = cp.trace_defect;
    rec.choi_min_eig = cp.choi_min_eig;
    rec.steps_accepted = run.steps_accepted;

    rec.p_coherent = coherent_lz(fam.g, eps);
    rec.incoherent_integral = incoherent_integral(fam, gamma, T, qtol);
    rec.p_predicted = rec.p_coherent + eps * rec.incoherent_integral;
    rec.residual = rec.p_measured - rec.p_predicted;
    rec.tail_bound = tail_bound(fam, gamma, T);

    rec.wall_time_s = now_seconds() - t_start;
    return rec;
}

DuhamelSplit duhamel_split(const LZFamily& fam, const GammaProfile& gamma,
                           double eps, double T, const IntegratorConfig& cfg,
                           double qtol) {
    if (!(T > 0.0))
        throw std::invalid_argument("duhamel_split: T must be > 0");
    const GammaProfile off = GammaProfile::constant(0.0);
    const Operator2 plus_T = projectors(fam, T).first;
    const Operator2 minus_start = projectors(fam, -T).second;

    // Coherent channel: purely Hamiltonian propagation of the ground
    // projector, kept as a dense interpolant for the integrand below.
    DenseSolution<4> fwd;
    evolve_state(fam, off, eps, minus_start, -T, T, cfg, &fwd, -T);

    DuhamelSplit out;
    out.coherent_part = trace(plus_T * devectorize(fwd(T))).real();
    if (gamma.is_zero()) return out;  // integrand carries a gamma factor

    // Dual propagation of the late-time excited projector under the full
    // generator, indexed by t = -s.
    DenseSolution<4> bwd;
    evolve_dual(fam, gamma, eps, plus_T, T, -T, cfg, &bwd);

    auto integrand = [&](double tau) {
        const double gs = gamma.value(tau);
        if (gs == 0.0) return 0.0;
        const Operator2 A = devectorize(bwd(-tau));
        const Operator2 rho0 = devectorize(fwd(tau));
        const Operator2 dr = apply(dephasing_part(fam, tau), rho0);
        return gs * trace(A * dr).real();
    };
    const QuadResult q = adaptive_simpson(integrand, -T, T, qtol);
    if (!q.converged)
        throw std::runtime_error(
            "duhamel_split: quadrature did not converge to requested "
            "tolerance");
    out.incoherent_part = q.value / (2.0 * eps);
    return out;
}

OrderFit order_fit(const std::vector<TransitionRecord>& records) {
    if (records.size() < 3)
        throw std::invalid_argument("order_fit: need at least 3 records");
    const auto& first = records.front();
    for (const auto& r : records) {
        if (r.g != first.g || r.gamma_spec != first.gamma_spec ||
            r.T != first.T)
            throw std::invalid_argument(
                "order_fit: records must share (g, gamma profile, T)");
    }
    for (std::size_t i = 0; i < records.size(); ++i)
        for (std::size_t j = i + 1; j < records.size(); ++j)
            if (records[i].epsilon == records[j].epsilon)
                throw std::invalid_argument(
                    "order_fit: epsilon values must be distinct");

    OrderFit fit;
    std::vector<std::pair<double, double>> pts;  // (eps, |residual|)
    for (const auto& r : records) {
        const double floor =
            10.0 * (r.rtol_used * static_cast<double>(r.steps_accepted) +
                    r.qtol_used);
        if (std::abs(r.residual) < floor) {
            ++fit.excluded;
            continue;
        }
        pts.emplace_back(r.epsilon, std::abs(r.residual));
    }
    if (pts.size() < 3)
        throw std::invalid_argument(
            "order_fit: fewer than 3 residuals above the noise floor");
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& [e, r] : pts) {
        fit.epsilons.push_back(e);
        fit.residuals.push_back(r);
        const double x = std::log(e), y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ymean = sy / n;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = std::log(pts[i].first), y = std::log(pts[i].second);
        const double yhat = fit.intercept + fit.slope * x;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace openlz
