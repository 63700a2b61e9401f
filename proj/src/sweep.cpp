#include "openlz/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace openlz {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) items.push_back(cur);
    }
    return items;
}

double parse_positive(const std::string& key, const std::string& item) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(item, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != item.size())
        throw std::invalid_argument("config key '" + key + "': '" + item +
                                    "' is not a number");
    if (!(v > 0.0))
        throw std::invalid_argument("config key '" + key + "': value " + item +
                                    " must be > 0");
    return v;
}

std::vector<double> parse_positive_list(const std::string& key,
                                        const std::string& value) {
    std::vector<double> out;
    for (const auto& item : split_list(value))
        out.push_back(parse_positive(key, item));
    if (out.empty())
        throw std::invalid_argument("config key '" + key +
                                    "': expected a comma-separated list of "
                                    "positive numbers");
    return out;
}

std::string cell_label(double g, double eps, const std::string& gamma) {
    return "g=" + format_g17(g) + ",epsilon=" + format_g17(eps) +
           ",gamma=" + gamma;
}

}  // namespace

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void set_config_key(SweepConfig& cfg, const std::string& key,
                    const std::string& value) {
    if (key == "g") {
        cfg.g_values = parse_positive_list(key, value);
    } else if (key == "epsilon") {
        cfg.epsilon_values = parse_positive_list(key, value);
    } else if (key == "gamma") {
        auto specs = split_list(value);
        if (specs.empty())
            throw std::invalid_argument(
                "config key 'gamma': expected a comma-separated list of "
                "profile descriptors (const:G0 | gauss:G0:W | logistic:G0:W)");
        for (auto& spec : specs) {
            try {
                spec = GammaProfile::parse(spec).descriptor();
            } catch (const std::exception& e) {
                throw std::invalid_argument("config key 'gamma': " +
                                            std::string(e.what()));
            }
        }
        cfg.gamma_specs = std::move(specs);
    } else if (key == "T") {
        if (value == "auto") {
            cfg.t_auto = true;
            cfg.T = 0.0;
        } else {
            cfg.T = parse_positive(key, value);
            cfg.t_auto = false;
        }
    } else if (key == "rtol") {
        cfg.rtol = parse_positive(key, value);
    } else if (key == "atol") {
        cfg.atol = parse_positive(key, value);
    } else if (key == "qtol") {
        cfg.qtol = parse_positive(key, value);
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "format") {
        if (value == "csv")
            cfg.format = SweepConfig::Format::csv;
        else if (value == "json")
            cfg.format = SweepConfig::Format::json;
        else
            throw std::invalid_argument(
                "config key 'format': expected 'csv' or 'json', got '" +
                value + "'");
    } else if (key == "workers") {
        if (value == "auto") {
            cfg.workers = 0;
        } else {
            const double v = parse_positive(key, value);
            if (v != static_cast<unsigned>(v))
                throw std::invalid_argument(
                    "config key 'workers': expected a positive integer or "
                    "'auto'");
            cfg.workers = static_cast<unsigned>(v);
        }
    } else {
        throw std::invalid_argument(
            "unknown config key '" + key +
            "' (accepted: g, epsilon, gamma, T, rtol, atol, qtol, output, "
            "format, workers)");
    }
}

SweepConfig parse_config(const std::string& text) {
    SweepConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(
                "config line " + std::to_string(lineno) +
                ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " +
                                        std::to_string(lineno) +
                                        ": empty key before '='");
        set_config_key(cfg, key, value);
    }
    return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

double resolved_horizon(const SweepConfig& cfg) {
    if (!cfg.t_auto) return cfg.T;
    if (cfg.g_values.empty())
        throw std::invalid_argument(
            "config: T=auto requires at least one g value");
    const double gmin =
        *std::min_element(cfg.g_values.begin(), cfg.g_values.end());
    return 25.0 / gmin;
}

void validate_config(SweepConfig& cfg) {
    if (cfg.g_values.empty())
        throw std::invalid_argument("config: no g values given");
    if (cfg.epsilon_values.empty())
        throw std::invalid_argument("config: no epsilon values given");
    if (cfg.gamma_specs.empty())
        throw std::invalid_argument("config: no gamma profiles given");
    if (cfg.t_auto) {
        cfg.T = resolved_horizon(cfg);
        cfg.t_auto = false;
    }
    if (!(cfg.T > 0.0))
        throw std::invalid_argument("config: T must be > 0");
}

SweepReport run_sweep(const SweepConfig& config) {
    SweepConfig cfg = config;
    validate_config(cfg);

    const std::size_t ng = cfg.g_values.size();
    const std::size_t ne = cfg.epsilon_values.size();
    const std::size_t np = cfg.gamma_specs.size();
    const std::size_t grid = ng * ne * np;

    IntegratorConfig icfg;
    icfg.rtol = cfg.rtol;
    icfg.atol = cfg.atol;

    std::vector<std::optional<TransitionRecord>> slots(grid);
    std::vector<std::string> errors(grid);

    auto run_cell = [&](std::size_t idx) {
        const std::size_t ig = idx / (ne * np);
        const std::size_t ie = (idx / np) % ne;
        const std::size_t ip = idx % np;
        const double g = cfg.g_values[ig];
        const double eps = cfg.epsilon_values[ie];
        const std::string& spec = cfg.gamma_specs[ip];
        try {
            const LZFamily fam(g);
            const GammaProfile gamma = GammaProfile::parse(spec);
            slots[idx] = measured_p(fam, gamma, eps, cfg.T, icfg, cfg.qtol);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    };

    unsigned workers = cfg.workers
                           ? cfg.workers
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(grid, 1)));

    if (workers <= 1) {
        for (std::size_t i = 0; i < grid; ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i =
                        next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= grid) return;
                    run_cell(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    SweepReport report;
    report.grid_size = grid;
    for (std::size_t i = 0; i < grid; ++i) {
        if (slots[i]) {
            report.records.push_back(std::move(*slots[i]));
        } else {
            const std::size_t ig = i / (ne * np);
            const std::size_t ie = (i / np) % ne;
            const std::size_t ip = i % np;
            report.failures.push_back(
                {i,
                 cell_label(cfg.g_values[ig], cfg.epsilon_values[ie],
                            cfg.gamma_specs[ip]),
                 errors[i]});
        }
    }

    // Order fits per (g, gamma profile) group, in grid order of the groups.
    for (std::size_t ig = 0; ig < ng; ++ig) {
        for (std::size_t ip = 0; ip < np; ++ip) {
            std::vector<TransitionRecord> group;
            for (const auto& r : report.records)
                if (r.g == cfg.g_values[ig] &&
                    r.gamma_spec == cfg.gamma_specs[ip])
                    group.push_back(r);
            std::size_t distinct = 0;
            {
                std::vector<double> eps;
                for (const auto& r : group) eps.push_back(r.epsilon);
                std::sort(eps.begin(), eps.end());
                distinct = static_cast<std::size_t>(
                    std::unique(eps.begin(), eps.end()) - eps.begin());
            }
            if (distinct < 3) continue;  // no fit intended for this group
            const std::string label = "g=" + format_g17(cfg.g_values[ig]) +
                                      ",gamma=" + cfg.gamma_specs[ip];
            try {
                report.fits.push_back({cfg.g_values[ig], cfg.gamma_specs[ip],
                                       cfg.T, order_fit(group)});
            } catch (const std::exception& e) {
                report.fit_failures.push_back({label, e.what()});
            }
        }
    }
    return report;
}

void write_csv(const SweepReport& report, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const auto& r : report.records) {
        os << format_g17(r.g) << ',' << format_g17(r.epsilon) << ','
           << r.gamma_spec << ',' << format_g17(r.T) << ','
           << format_g17(r.p_measured) << ',' << format_g17(r.p_coherent)
           << ',' << format_g17(r.incoherent_integral) << ','
           << format_g17(r.p_predicted) << ',' << format_g17(r.residual)
           << ',' << format_g17(r.tail_bound) << ','
           << format_g17(r.cptp_trace_defect) << ',' << r.steps_accepted
           << ',' << format_g17(r.wall_time_s) << '\n';
    }
}

void write_json(const SweepReport& report, std::ostream& os) {
    nlohmann::json root;
    root["records"] = nlohmann::json::array();
    for (const auto& r : report.records) {
        root["records"].push_back({{"g", r.g},
                                   {"epsilon", r.epsilon},
                                   {"gamma_spec", r.gamma_spec},
                                   {"T", r.T},
                                   {"p_measured", r.p_measured},
                                   {"p_coherent", r.p_coherent},
                                   {"incoherent_integral",
                                    r.incoherent_integral},
                                   {"p_predicted", r.p_predicted},
                                   {"residual", r.residual},
                                   {"tail_bound", r.tail_bound},
                                   {"cptp_trace_defect", r.cptp_trace_defect},
                                   {"steps_accepted", r.steps_accepted},
                                   {"wall_time_s", r.wall_time_s}});
    }
    root["fits"] = nlohmann::json::array();
    for (const auto& f : report.fits) {
        root["fits"].push_back({{"g", f.g},
                                {"gamma_spec", f.gamma_spec},
                                {"T", f.T},
                                {"epsilons", f.fit.epsilons},
                                {"residuals", f.fit.residuals},
                                {"slope", f.fit.slope},
                                {"intercept", f.fit.intercept},
                                {"r_squared", f.fit.r_squared},
                                {"excluded", f.fit.excluded}});
    }
    root["failures"] = nlohmann::json::array();
    for (const auto& f : report.failures)
        root["failures"].push_back(
            {{"index", f.index}, {"cell", f.cell}, {"reason", f.reason}});
    root["fit_failures"] = nlohmann::json::array();
    for (const auto& f : report.fit_failures)
        root["fit_failures"].push_back(
            {{"group", f.group}, {"reason", f.reason}});
    os << root.dump(2) << '\n';
}

}  // namespace openlz
