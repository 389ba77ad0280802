#pragma once

// Scenario runner behind the `ofp solve` command: configuration, dispatch,
// and JSON / CSV rendering of results and convergence traces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ofp/contraction.hpp"
#include "ofp/errors.hpp"
#include "ofp/solver.hpp"

namespace ofp::cli {

inline constexpr const char* kVersion = OFP_VERSION;

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_solver_failure = 3,
    exit_condition_violation = 4,
};

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Scenario { signal, periodic, check_h, probe_uniqueness };
enum class OutputFormat { json, csv };

const char* to_string(Scenario s);
Scenario parse_scenario(const std::string& s);
const char* to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

struct RunConfig {
    Scenario scenario = Scenario::signal;
    std::size_t grid_n = 1000;
    double tol = 1e-10;
    std::size_t max_iters = 10000;
    int m_param = 1;
    double lambda_bvp = 1.0;
    double alpha = 1.0;
    double c = 2.0;
    std::uint64_t seed = 0;
    OutputFormat output_format = OutputFormat::json;
    /// Empty means standard output.
    std::string output_path;
    bool trace = false;
    /// Operator under test for check-h: signal, identity or reflect-double (u -> -2u).
    std::string op = "signal";
    /// constant | logarithmic; empty selects the scenario default.
    std::string modulus;
    double modulus_c = 0.15;
    /// Sampled pairs for check-h.
    std::size_t pairs = 200;

    /// Throws ConfigError.
    void validate() const;
};

struct PeriodicExtras {
    ConditionReport hypothesis;
    double ode_residual = 0.0;
};

struct RunReport {
    RunConfig config;
    std::variant<std::monostate, FixedPointResult, ConditionReport, UniquenessReport> outcome;
    std::optional<PeriodicExtras> periodic;
    std::string error;
    int exit_code = exit_ok;
    double wall_ms = 0.0;
    std::string version = kVersion;
};

/// Runs the configured scenario. Invalid configurations throw ConfigError;
/// solver failures and condition violations are reported through exit_code.
RunReport run(const RunConfig& config);

/// run() followed by writing the rendered report to config.output_path.
RunReport run_and_write(const RunConfig& config);

nlohmann::json config_json(const RunConfig& config);
nlohmann::json trace_json(const IterateTrace& trace);
nlohmann::json report_json(const RunReport& report);

/// CSV with columns iter,step_norm,a_priori,a_posteriori at 17 significant digits.
std::string trace_csv(const IterateTrace& trace);

/// Rendered report: JSON document, or CSV (trace for solve scenarios,
/// summary rows otherwise).
std::string render(const RunReport& report);

/// Writes the trace of a result recorded with record_trace. Empty path means stdout.
void emit_trace(const FixedPointResult& result, OutputFormat format, const std::string& path);

/// Parses `solve` arguments (and an optional key = value config file) into a RunConfig.
/// Returns std::nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv);

/// Entry point of the ofp executable; returns the process exit status.
int main(int argc, const char* const* argv);

} // namespace ofp::cli
