#pragma once

// Batch layer: parse line-oriented sweep configurations, run grids of
// transition records concurrently with deterministic ordering, group
// order fits, and serialize to CSV / JSON.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "openlz/transition.hpp"

namespace openlz {

struct SweepConfig {
    std::vector<double> g_values;
    std::vector<double> epsilon_values;
    std::vector<std::string> gamma_specs;  // profile descriptors

    bool t_auto = true;  // horizon rule T = 25 / min(g)
    double T = 0.0;      // explicit horizon when t_auto is false

    double rtol = 1e-10;
    double atol = 1e-12;
    double qtol = 1e-12;

    std::string output;  // empty: write to stdout
    enum class Format { csv, json };
    Format format = Format::csv;

    unsigned workers = 0;  // 0: hardware concurrency
};

// Accepted keys: g, epsilon, gamma (comma-separated lists), T (number or
// "auto"), rtol, atol, qtol, output, format (csv|json), workers (int or
// "auto"). Lines are `key = value`; `#` starts a comment. Later assignments
// override earlier ones. Throws std::invalid_argument naming the offending
// key and the accepted grammar.
SweepConfig parse_config(const std::string& text);
SweepConfig parse_config_file(const std::string& path);

// Apply one `key` / `value` override (same grammar as the file keys).
void set_config_key(SweepConfig& cfg, const std::string& key,
                    const std::string& value);

// Check list non-emptiness / positivity and resolve T=auto. Throws
// std::invalid_argument on an invalid configuration.
void validate_config(SweepConfig& cfg);

double resolved_horizon(const SweepConfig& cfg);

struct CellFailure {
    std::size_t index = 0;  // grid index
    std::string cell;       // "g=..,epsilon=..,gamma=.."
    std::string reason;
};

struct GroupFit {
    double g = 0.0;
    std::string gamma_spec;
    double T = 0.0;
    OrderFit fit;
};

struct FitFailure {
    std::string group;  // "g=..,gamma=.."
    std::string reason;
};

struct SweepReport {
    std::vector<TransitionRecord> records;  // grid order, successes only
    std::vector<GroupFit> fits;             // one per (g, gamma) with >=3 eps
    std::vector<CellFailure> failures;      // grid order
    std::vector<FitFailure> fit_failures;
    std::size_t grid_size = 0;
};

// Evaluate the full grid (lexicographic in (g, epsilon, gamma) indices).
// Per-cell exceptions become CellFailure entries; record order is
// independent of the worker count.
SweepReport run_sweep(const SweepConfig& cfg);

inline constexpr const char* kCsvHeader =
    "g,epsilon,gamma_spec,T,p_measured,p_coherent,incoherent_integral,"
    "p_predicted,residual,tail_bound,cptp_trace_defect,steps_accepted,"
    "wall_time_s";

void write_csv(const SweepReport& report, std::ostream& os);
void write_json(const SweepReport& report, std::ostream& os);

// 17-significant-digit decimal form (round-trips a double exactly).
std::string format_g17(double x);

}  // namespace openlz
