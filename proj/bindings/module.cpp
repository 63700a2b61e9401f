#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "openlz/adiabatic.hpp"
#include "openlz/model.hpp"
#include "openlz/sweep.hpp"
#include "openlz/transition.hpp"
#include "openlz/verify.hpp"

namespace py = pybind11;

namespace {

using namespace openlz;

GammaProfile parse_gamma(const std::string& spec) {
    return GammaProfile::parse(spec);
}

Sign parse_sign(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    throw std::invalid_argument("sign must be '+' or '-'");
}

Direction parse_direction(const std::string& d) {
    if (d == "forward") return Direction::forward;
    if (d == "dual") return Direction::dual;
    throw std::invalid_argument("direction must be 'forward' or 'dual'");
}

double resolve_T(double T, double g) { return T > 0.0 ? T : 25.0 / g; }

py::list matrix_of(const Operator2& a) {
    py::list rows;
    for (int i = 0; i < 2; ++i) {
        py::list row;
        for (int j = 0; j < 2; ++j) row.append(a(i, j));
        rows.append(row);
    }
    return rows;
}

py::dict record_dict(const TransitionRecord& r) {
    py::dict d;
    d["g"] = r.g;
    d["epsilon"] = r.epsilon;
    d["gamma_spec"] = r.gamma_spec;
    d["T"] = r.T;
    d["p_measured"] = r.p_measured;
    d["p_phase_avg"] = r.p_phase_avg;
    d["p_coherent"] = r.p_coherent;
    d["incoherent_integral"] = r.incoherent_integral;
    d["p_predicted"] = r.p_predicted;
    d["residual"] = r.residual;
    d["tail_bound"] = r.tail_bound;
    d["cptp_trace_defect"] = r.cptp_trace_defect;
    d["choi_min_eig"] = r.choi_min_eig;
    d["steps_accepted"] = r.steps_accepted;
    d["wall_time_s"] = r.wall_time_s;
    d["clamped"] = r.clamped;
    d["p_raw"] = r.p_raw;
    return d;
}

TransitionRecord compute_record(double g, const std::string& gamma, double eps,
                                double T, double rtol, double atol,
                                double qtol) {
    const LZFamily fam(g);
    const GammaProfile gm = parse_gamma(gamma);
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    return measured_p(fam, gm, eps, resolve_T(T, g), cfg, qtol);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Transition probabilities and adiabatic expansion terms for slowly "
        "driven two-level systems with energy-basis dephasing";

    m.def("coherent_lz", &openlz::coherent_lz, py::arg("g"),
          py::arg("epsilon"),
          "Coherent transition probability exp(-pi g^2 / (2 epsilon)).");

    m.def(
        "incoherent_integral",
        [](double g, const std::string& gamma, double T, double qtol) {
            return incoherent_integral(LZFamily(g), parse_gamma(gamma), T,
                                       qtol);
        },
        py::arg("g"), py::arg("gamma"),
        py::arg("T") = std::numeric_limits<double>::infinity(),
        py::arg("qtol") = 1e-12,
        "Integral of g^2 gamma_s / (64 (1+gamma_s^2) e_s^5) over [-T, T].");

    m.def(
        "tail_bound",
        [](double g, const std::string& gamma, double T) {
            return tail_bound(LZFamily(g), parse_gamma(gamma), T);
        },
        py::arg("g"), py::arg("gamma"), py::arg("T"),
        "Envelope bound sup(gamma) g^2 / (8 T^4) on the horizon truncation "
        "of the incoherent integral (certifies the two-sided tail for "
        "sup(gamma) >= 1).");

    m.def(
        "predicted_p",
        [](double g, const std::string& gamma, double eps, double qtol) {
            return predicted_p(LZFamily(g), parse_gamma(gamma), eps, qtol);
        },
        py::arg("g"), py::arg("gamma"), py::arg("epsilon"),
        py::arg("qtol") = 1e-12,
        "coherent_lz + epsilon * incoherent_integral at infinite horizon.");

    m.def(
        "measured_p",
        [](double g, const std::string& gamma, double eps, double T,
           double rtol, double atol, double qtol) {
            TransitionRecord rec;
            {
                py::gil_scoped_release release;
                rec = compute_record(g, gamma, eps, T, rtol, atol, qtol);
            }
            return record_dict(rec);
        },
        py::arg("g"), py::arg("gamma"), py::arg("epsilon"), py::arg("T") = 0.0,
        py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12,
        py::arg("qtol") = 1e-12,
        "Propagate the lower-band projector across the crossing and return "
        "the full transition record as a dict.  T <= 0 selects the default "
        "horizon 25/g.");

    m.def(
        "duhamel_split",
        [](double g, const std::string& gamma, double eps, double T,
           double rtol, double atol, double qtol) {
            const LZFamily fam(g);
            const GammaProfile gm = parse_gamma(gamma);
            IntegratorConfig cfg;
            cfg.rtol = rtol;
            cfg.atol = atol;
            DuhamelSplit split;
            {
                py::gil_scoped_release release;
                split = duhamel_split(fam, gm, eps, resolve_T(T, g), cfg, qtol);
            }
            return py::make_tuple(split.coherent_part, split.incoherent_part);
        },
        py::arg("g"), py::arg("gamma"), py::arg("epsilon"), py::arg("T") = 0.0,
        py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12,
        py::arg("qtol") = 1e-10,
        "Exact two-term split (coherent, incoherent) that sums to the "
        "measured probability.");

    m.def(
        "first_order_a",
        [](double g, const std::string& gamma, double s, double s_prime,
           const std::string& sign) {
            return matrix_of(first_order_a(LZFamily(g), parse_gamma(gamma), s,
                                           s_prime, parse_sign(sign)));
        },
        py::arg("g"), py::arg("gamma"), py::arg("s"), py::arg("s_prime"),
        py::arg("sign") = "+",
        "First-order expansion coefficient a^sign at evaluation point s, "
        "anchored at s_prime, as a nested 2x2 complex list.");

    m.def(
        "first_order_a_hat",
        [](double g, const std::string& gamma, double s_anchor, double s_eval,
           const std::string& sign) {
            return matrix_of(first_order_a_hat(LZFamily(g), parse_gamma(gamma),
                                               s_anchor, s_eval,
                                               parse_sign(sign)));
        },
        py::arg("g"), py::arg("gamma"), py::arg("s_anchor"), py::arg("s_eval"),
        py::arg("sign") = "+",
        "Dual-direction first-order coefficient, indexed (anchor, "
        "evaluation).");

    m.def(
        "second_order_b",
        [](double g, const std::string& gamma, double s, double s_prime,
           const std::string& sign, const std::string& direction) {
            return matrix_of(second_order_b(LZFamily(g), parse_gamma(gamma), s,
                                            s_prime, parse_sign(sign),
                                            parse_direction(direction)));
        },
        py::arg("g"), py::arg("gamma"), py::arg("s"), py::arg("s_prime"),
        py::arg("sign") = "+", py::arg("direction") = "forward",
        "Second-order expansion kernel; for direction='dual' the positional "
        "arguments read (anchor, evaluation).");

    m.def(
        "gap_energy",
        [](double g, double s) { return gap_energy(LZFamily(g), s); },
        py::arg("g"), py::arg("s"),
        "Half the instantaneous level splitting, sqrt(s^2 + g^2) / 2.");

    m.def(
        "verify",
        [](const std::string& suite) {
            std::vector<CheckResult> results;
            {
                py::gil_scoped_release release;
                results = run_suite(suite);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["measured"] = r.measured;
                d["tolerance"] = r.tolerance;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("suite") = "all",
        "Run a built-in verification suite; returns a list of per-check "
        "dicts.");

    m.def(
        "sweep",
        [](const std::string& config_text) {
            SweepConfig cfg = parse_config(config_text);
            validate_config(cfg);
            SweepReport report;
            {
                py::gil_scoped_release release;
                report = run_sweep(cfg);
            }
            py::dict out;
            py::list records;
            for (const auto& r : report.records) records.append(record_dict(r));
            out["records"] = records;
            py::list fits;
            for (const auto& gf : report.fits) {
                py::dict d;
                d["g"] = gf.g;
                d["gamma_spec"] = gf.gamma_spec;
                d["T"] = gf.T;
                d["epsilons"] = gf.fit.epsilons;
                d["residuals"] = gf.fit.residuals;
                d["slope"] = gf.fit.slope;
                d["intercept"] = gf.fit.intercept;
                d["r_squared"] = gf.fit.r_squared;
                d["excluded"] = gf.fit.excluded;
                fits.append(d);
            }
            out["fits"] = fits;
            py::list failures;
            for (const auto& cf : report.failures) {
                py::dict d;
                d["index"] = cf.index;
                d["cell"] = cf.cell;
                d["reason"] = cf.reason;
                failures.append(d);
            }
            out["failures"] = failures;
            py::list fit_failures;
            for (const auto& ff : report.fit_failures) {
                py::dict d;
                d["group"] = ff.group;
                d["reason"] = ff.reason;
                fit_failures.append(d);
            }
            out["fit_failures"] = fit_failures;
            out["grid_size"] = report.grid_size;
            return out;
        },
        py::arg("config_text"),
        "Parse a key = value sweep configuration, run the grid, and return "
        "records, order fits, and failures.");
}
