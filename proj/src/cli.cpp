#include "openlz/cli.hpp"

#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "openlz/adiabatic.hpp"
#include "openlz/model.hpp"
#include "openlz/sweep.hpp"
#include "openlz/transition.hpp"
#include "openlz/verify.hpp"

namespace openlz {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCellFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitVerifyFailure = 3;

struct TransitionArgs {
    double g = 0.0;
    double epsilon = 0.0;
    std::string gamma = "const:0";
    std::string horizon = "auto";
    double rtol = 1e-10;
    double atol = 1e-12;
    double qtol = 1e-12;
    bool json = false;
};

struct SweepArgs {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value, applied after the file
    std::string output;                  // overrides the config's output key
    std::string format;                  // "", "csv", or "json"
    std::string workers;                 // "", "auto", or a positive integer
};

struct VerifyArgs {
    std::string suite = "all";
};

struct ExpansionArgs {
    double g = 0.0;
    std::string gamma = "const:0";
    double s_min = -10.0;
    double s_max = 10.0;
    unsigned points = 101;
    std::string s_prime = "auto";  // anchor; "auto" means s_min
    std::string output;            // empty -> stdout
};

double resolve_horizon(const std::string& spec, double g) {
    if (spec == "auto") return 25.0 / g;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(spec, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("T must be 'auto' or a positive number");
    }
    if (pos != spec.size() || !(v > 0.0))
        throw std::invalid_argument("T must be 'auto' or a positive number");
    return v;
}

int run_transition(const TransitionArgs& a, std::ostream& out,
                   std::ostream& err) {
    TransitionRecord rec;
    try {
        const LZFamily fam(a.g);
        const GammaProfile gamma = GammaProfile::parse(a.gamma);
        const double T = resolve_horizon(a.horizon, a.g);
        IntegratorConfig cfg;
        cfg.rtol = a.rtol;
        cfg.atol = a.atol;
        rec = measured_p(fam, gamma, a.epsilon, T, cfg, a.qtol);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: transition cell failed: " << e.what() << "\n";
        return kExitCellFailure;
    }

    if (a.json) {
        nlohmann::json j;
        j["g"] = rec.g;
        j["epsilon"] = rec.epsilon;
        j["gamma_spec"] = rec.gamma_spec;
        j["T"] = rec.T;
        j["p_measured"] = rec.p_measured;
        j["p_phase_avg"] = rec.p_phase_avg;
        j["p_coherent"] = rec.p_coherent;
        j["incoherent_integral"] = rec.incoherent_integral;
        j["p_predicted"] = rec.p_predicted;
        j["residual"] = rec.residual;
        j["tail_bound"] = rec.tail_bound;
        j["cptp_trace_defect"] = rec.cptp_trace_defect;
        j["choi_min_eig"] = rec.choi_min_eig;
        j["steps_accepted"] = rec.steps_accepted;
        j["wall_time_s"] = rec.wall_time_s;
        j["clamped"] = rec.clamped;
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    out << "g: " << format_g17(rec.g) << "\n"
        << "epsilon: " << format_g17(rec.epsilon) << "\n"
        << "gamma_spec: " << rec.gamma_spec << "\n"
        << "T: " << format_g17(rec.T) << "\n"
        << "p_measured: " << format_g17(rec.p_measured) << "\n"
        << "p_phase_avg: " << format_g17(rec.p_phase_avg) << "\n"
        << "p_coherent: " << format_g17(rec.p_coherent) << "\n"
        << "incoherent_integral: " << format_g17(rec.incoherent_integral)
        << "\n"
        << "p_predicted: " << format_g17(rec.p_predicted) << "\n"
        << "residual: " << format_g17(rec.residual) << "\n"
        << "tail_bound: " << format_g17(rec.tail_bound) << "\n"
        << "cptp_trace_defect: " << format_g17(rec.cptp_trace_defect) << "\n"
        << "choi_min_eig: " << format_g17(rec.choi_min_eig) << "\n"
        << "steps_accepted: " << rec.steps_accepted << "\n"
        << "wall_time_s: " << format_g17(rec.wall_time_s) << "\n"
        << "clamped: " << (rec.clamped ? "true" : "false") << "\n";
    return kExitOk;
}

int run_sweep_cmd(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    try {
        cfg = parse_config_file(a.config_path);
        for (const auto& kv : a.overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(
                    "override '" + kv + "' is not of the form key=value");
            set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!a.output.empty()) set_config_key(cfg, "output", a.output);
        if (!a.format.empty()) set_config_key(cfg, "format", a.format);
        if (!a.workers.empty()) set_config_key(cfg, "workers", a.workers);
        validate_config(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    const SweepReport report = run_sweep(cfg);

    auto emit = [&](std::ostream& os) {
        if (cfg.format == SweepConfig::Format::json)
            write_json(report, os);
        else
            write_csv(report, os);
    };
    if (cfg.output.empty()) {
        emit(out);
    } else {
        std::ofstream ofs(cfg.output);
        if (!ofs)
            err << "error: cannot open output file '" << cfg.output << "'\n";
        else
            emit(ofs);
    }

    std::ostream& note = cfg.output.empty() ? err : out;
    note << report.records.size() << "/" << report.grid_size
         << " cells computed";
    if (!cfg.output.empty()) note << ", written to " << cfg.output;
    note << "\n";
    for (const auto& gf : report.fits) {
        note << "fit g=" << format_g17(gf.g) << " gamma=" << gf.gamma_spec
             << " T=" << format_g17(gf.T) << ": slope=" << std::setprecision(6)
             << gf.fit.slope << " intercept=" << gf.fit.intercept
             << " r2=" << gf.fit.r_squared << " points="
             << gf.fit.epsilons.size() << " excluded=" << gf.fit.excluded
             << "\n";
    }
    for (const auto& ff : report.fit_failures)
        note << "fit skipped (" << ff.group << "): " << ff.reason << "\n";
    for (const auto& cf : report.failures)
        err << "cell failed (" << cf.cell << "): " << cf.reason << "\n";

    return report.failures.empty() ? kExitOk : kExitCellFailure;
}

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<CheckResult> results;
    try {
        results = run_suite(a.suite);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    std::size_t failed = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        out << (r.passed ? "PASS" : "FAIL") << "  " << r.name
            << "  measured=" << std::scientific << std::setprecision(3)
            << r.measured << " tol=" << r.tolerance << std::defaultfloat;
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
    }
    out << results.size() << " checks, " << failed << " failed\n";
    return failed == 0 ? kExitOk : kExitVerifyFailure;
}

int run_expansion(const ExpansionArgs& a, std::ostream& out,
                  std::ostream& err) {
    const LZFamily fam(a.g);
    const GammaProfile gamma = GammaProfile::parse(a.gamma);
    if (!(a.s_max > a.s_min))
        throw std::invalid_argument("require s-max > s-min");
    if (a.points < 2) throw std::invalid_argument("require points >= 2");
    double anchor = a.s_min;
    if (a.s_prime != "auto") {
        std::size_t pos = 0;
        anchor = std::stod(a.s_prime, &pos);
        if (pos != a.s_prime.size())
            throw std::invalid_argument("s-prime must be 'auto' or a number");
    }

    auto emit = [&](std::ostream& os) {
        os << "s,gap_energy,gamma,a_plus_norm,a_minus_norm,a_hat_plus_norm,"
              "b_plus_norm,b_minus_norm,b_dual_plus_norm,b_plus_norm_e3\n";
        const double step = (a.s_max - a.s_min) / (a.points - 1);
        for (unsigned i = 0; i < a.points; ++i) {
            const double s = a.s_min + step * i;
            const double e = gap_energy(fam, s);
            const double ap = trace_norm(
                first_order_a(fam, gamma, s, anchor, Sign::plus));
            const double am = trace_norm(
                first_order_a(fam, gamma, s, anchor, Sign::minus));
            const double ah = trace_norm(
                first_order_a_hat(fam, gamma, anchor, s, Sign::plus));
            const double bp = trace_norm(second_order_b(
                fam, gamma, s, anchor, Sign::plus, Direction::forward));
            const double bm = trace_norm(second_order_b(
                fam, gamma, s, anchor, Sign::minus, Direction::forward));
            const double bd = trace_norm(second_order_b(
                fam, gamma, anchor, s, Sign::plus, Direction::dual));
            os << format_g17(s) << ',' << format_g17(e) << ','
               << format_g17(gamma.value(s)) << ',' << format_g17(ap) << ','
               << format_g17(am) << ',' << format_g17(ah) << ','
               << format_g17(bp) << ',' << format_g17(bm) << ','
               << format_g17(bd) << ',' << format_g17(bp * e * e * e) << "\n";
        }
    };

    if (a.output.empty()) {
        emit(out);
    } else {
        std::ofstream ofs(a.output);
        if (!ofs) {
            err << "error: cannot open output file '" << a.output << "'\n";
            return kExitCellFailure;
        }
        emit(ofs);
        err << "expansion table written to " << a.output << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{
        "simulator and verification harness for slowly driven two-level "
        "open systems with energy-basis dephasing"};
    app.require_subcommand(1);

    TransitionArgs ta;
    auto* t = app.add_subcommand(
        "transition", "compute one transition-probability record");
    t->add_option("--g", ta.g, "gap parameter (> 0)")->required();
    t->add_option("--epsilon", ta.epsilon, "adiabatic parameter (> 0)")
        ->required();
    t->add_option("--gamma", ta.gamma,
                  "dephasing profile: const:G0 | gauss:G0:W | logistic:G0:W")
        ->capture_default_str();
    t->add_option("--T", ta.horizon, "half horizon, or 'auto' (= 25/g)")
        ->capture_default_str();
    t->add_option("--rtol", ta.rtol, "integrator relative tolerance")
        ->capture_default_str();
    t->add_option("--atol", ta.atol, "integrator absolute tolerance")
        ->capture_default_str();
    t->add_option("--qtol", ta.qtol, "quadrature tolerance")
        ->capture_default_str();
    t->add_flag("--json", ta.json, "emit a JSON object instead of key: value");

    SweepArgs sa;
    auto* s = app.add_subcommand(
        "sweep", "run a (g, epsilon, gamma) grid from a config file");
    s->add_option("--config", sa.config_path, "config file (key = value lines)")
        ->required();
    s->add_option("--set", sa.overrides,
                  "override a config key, e.g. --set T=30 (repeatable)");
    s->add_option("--output", sa.output, "output path (overrides config)");
    s->add_option("--format", sa.format, "csv or json (overrides config)");
    s->add_option("--workers", sa.workers,
                  "worker count or 'auto' (overrides config)");

    VerifyArgs va;
    auto* v = app.add_subcommand("verify", "run built-in verification suites");
    v->add_option("--suite", va.suite,
                  "algebra | model | lindblad | adiabatic | propagate | "
                  "transition | all")
        ->capture_default_str();

    ExpansionArgs ea;
    auto* x = app.add_subcommand(
        "expansion", "tabulate expansion-term trace norms over an s grid");
    x->add_option("--g", ea.g, "gap parameter (> 0)")->required();
    x->add_option("--gamma", ea.gamma, "dephasing profile descriptor")
        ->capture_default_str();
    x->add_option("--s-min", ea.s_min, "grid start")->capture_default_str();
    x->add_option("--s-max", ea.s_max, "grid end")->capture_default_str();
    x->add_option("--points", ea.points, "grid size (>= 2)")
        ->capture_default_str();
    x->add_option("--s-prime", ea.s_prime,
                  "anchor point, or 'auto' (= s-min)")
        ->capture_default_str();
    x->add_option("--output", ea.output, "output path (default: stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("openlz");
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (t->parsed()) return run_transition(ta, out, err);
        if (s->parsed()) return run_sweep_cmd(sa, out, err);
        if (v->parsed()) return run_verify(va, out, err);
        if (x->parsed()) return run_expansion(ea, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCellFailure;
    }
    err << "error: no subcommand given\n";
    return kExitConfigError;
}

}  // namespace openlz
