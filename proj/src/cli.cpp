#include "ofp/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "ofp/lattice.hpp"
#include "ofp/operators.hpp"

namespace ofp::cli {

namespace {

template <typename Enum, std::size_t N>
Enum lookup(const std::string& s, const std::pair<const char*, Enum> (&table)[N], const char* what) {
    for (const auto& [name, value] : table) {
        if (s == name) return value;
    }
    throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

constexpr std::pair<const char*, Scenario> kScenarios[] = {
    {"signal", Scenario::signal},
    {"periodic", Scenario::periodic},
    {"check-h", Scenario::check_h},
    {"probe-uniqueness", Scenario::probe_uniqueness},
};

constexpr std::pair<const char*, OutputFormat> kFormats[] = {
    {"json", OutputFormat::json},
    {"csv", OutputFormat::csv},
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Modulus resolve_modulus(const RunConfig& cfg) {
    std::string kind = cfg.modulus;
    if (kind.empty()) kind = cfg.scenario == Scenario::periodic ? "logarithmic" : "constant";
    if (kind == "logarithmic") return Modulus::logarithmic();
    return Modulus::constant(cfg.modulus_c);
}

Operator check_h_operator(const RunConfig& cfg) {
    if (cfg.op == "identity") return Operator([](const GridFunction& u) { return u; });
    if (cfg.op == "reflect-double") return Operator([](const GridFunction& u) { return -2.0 * u; });
    return SignalFeedbackOperator(cfg.m_param).as_operator();
}

SolveConfig solve_config(const RunConfig& cfg) {
    SolveConfig sc;
    sc.tol = cfg.tol;
    sc.max_iters = cfg.max_iters;
    sc.record_trace = cfg.trace || cfg.output_format == OutputFormat::csv;
    sc.seed = cfg.seed;
    return sc;
}

std::vector<NamedStart> probe_starts(std::size_t n) {
    using std::numbers::pi;
    return {
        {"0", GridFunction::zero(n)},
        {"1", GridFunction::constant(n, 1.0)},
        {"t", GridFunction::sample(n, [](double t) { return t; })},
        {"1-t", GridFunction::sample(n, [](double t) { return 1.0 - t; })},
        {"sin^2(pi t)", GridFunction::sample(n, [](double t) {
             const double s = std::sin(pi * t);
             return s * s;
         })},
    };
}

nlohmann::json values_json(const GridFunction& u) {
    return std::vector<double>(u.values().data(), u.values().data() + u.size());
}

nlohmann::json condition_json(const ConditionReport& r) {
    nlohmann::json j{{"pairs_tested", r.pairs_tested},
                     {"pairs_passed", r.pairs_passed},
                     {"worst_ratio", r.worst_ratio},
                     {"passed", r.passed()}};
    if (r.witness) {
        if (const auto* w = std::get_if<PairWitness>(&*r.witness)) {
            j["witness"] = {{"node", w->node},
                            {"t", w->lower.node(w->node)},
                            {"lhs", w->lhs},
                            {"rhs", w->rhs},
                            {"lower", values_json(w->lower)},
                            {"upper", values_json(w->upper)}};
        } else {
            const auto& s = std::get<ScalarWitness>(*r.witness);
            j["witness"] = {{"t", s.t},     {"x", s.x},     {"y", s.y},
                            {"gap", s.gap}, {"lhs", s.lhs}, {"rhs", s.rhs},
                            {"inequality", s.inequality}};
        }
    }
    return j;
}

nlohmann::json result_json(const FixedPointResult& r) {
    return {{"fixed_point_values", values_json(r.fixed_point)},
            {"residual", r.residual},
            {"residual_threshold", r.residual_threshold},
            {"lambda", r.lambda},
            {"d0", r.d0},
            {"iterations", r.iterations},
            {"case", to_string(r.case_taken)}};
}

nlohmann::json probe_json(const UniquenessReport& r) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : r.runs) {
        nlohmann::json j{{"start", run.start}, {"status", run.result ? "converged" : "failed"}};
        if (run.result) {
            j["iterations"] = run.result->iterations;
            j["residual"] = run.result->residual;
            j["lambda"] = run.result->lambda;
            j["d0"] = run.result->d0;
            j["case"] = to_string(run.result->case_taken);
        } else {
            j["error"] = run.error;
        }
        runs.push_back(std::move(j));
    }
    return {{"runs", std::move(runs)}, {"max_pairwise_distance", r.max_pairwise_distance}};
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output path '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing output path '" + path + "'");
}

} // namespace

const char* to_string(Scenario s) {
    for (const auto& [name, value] : kScenarios) {
        if (value == s) return name;
    }
    return "?";
}

Scenario parse_scenario(const std::string& s) { return lookup(s, kScenarios, "scenario"); }

const char* to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat parse_format(const std::string& s) { return lookup(s, kFormats, "output format"); }

void RunConfig::validate() const {
    if (grid_n < 2) throw ConfigError("grid-n must be >= 2");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
    if (max_iters < 1) throw ConfigError("max-iters must be >= 1");
    if (m_param < 1) throw ConfigError("m-param must be >= 1");
    if (!(lambda_bvp > 0.0)) throw ConfigError("lambda must be > 0");
    if (!(alpha > 0.0 && alpha <= lambda_bvp)) {
        throw ConfigError("alpha must satisfy 0 < alpha <= lambda * N (N = 1)");
    }
    if (!std::isfinite(c)) throw ConfigError("c must be finite");
    if (op != "signal" && op != "identity" && op != "reflect-double") {
        throw ConfigError("unknown operator '" + op + "'");
    }
    if (!modulus.empty() && modulus != "constant" && modulus != "logarithmic") {
        throw ConfigError("unknown modulus '" + modulus + "'");
    }
    if (!(modulus_c > 0.0 && modulus_c < 1.0)) throw ConfigError("modulus-c must lie in (0,1)");
    if (pairs < 1) throw ConfigError("pairs must be >= 1");
}

RunReport run(const RunConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    RunReport report;
    report.config = config;

    try {
        const Modulus f = resolve_modulus(config);
        const ConeSpec spec{};
        switch (config.scenario) {
            case Scenario::signal: {
                const SignalFeedbackOperator op(config.m_param);
                report.outcome = solve(op.as_operator(), GridFunction::zero(config.grid_n), f, spec,
                                       solve_config(config));
                break;
            }
            case Scenario::periodic: {
                const double c = config.c;
                const double lam = config.lambda_bvp;
                const Nonlinearity F = [c, lam](double, double u) { return c - lam * u; };
                const PeriodicBVPOperator op(lam, F, config.alpha, config.grid_n);
                const auto result = solve(op.as_operator(), GridFunction::zero(config.grid_n), f,
                                          spec, solve_config(config));
                TripleSamplerConfig sampler;
                sampler.seed = config.seed;
                const auto triples = sample_hypothesis_triples(sampler);
                report.periodic = PeriodicExtras{
                    check_periodic_hypothesis(F, lam, config.alpha, triples),
                    ode_residual(result.fixed_point, F)};
                report.outcome = result;
                if (!report.periodic->hypothesis.passed()) report.exit_code = exit_condition_violation;
                break;
            }
            case Scenario::check_h: {
                PairSamplerConfig sampler;
                sampler.n = config.grid_n;
                sampler.count = config.pairs;
                sampler.seed = config.seed;
                const auto pairs = sample_comparable_pairs(sampler);
                const ConditionReport r = check_condition_H(check_h_operator(config), f, pairs, spec);
                if (!r.passed()) report.exit_code = exit_condition_violation;
                report.outcome = r;
                break;
            }
            case Scenario::probe_uniqueness: {
                const SignalFeedbackOperator op(config.m_param);
                SolveConfig sc = solve_config(config);
                sc.record_trace = false;
                const UniquenessReport r =
                    uniqueness_probe(op.as_operator(), probe_starts(config.grid_n), f, spec, sc);
                if (!r.all_converged()) {
                    report.exit_code = exit_solver_failure;
                    report.error = "at least one probe run failed";
                } else if (r.max_pairwise_distance > 10.0 * config.tol) {
                    report.exit_code = exit_condition_violation;
                    report.error = "fixed points from different starts disagree";
                }
                report.outcome = r;
                break;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        report.exit_code = exit_solver_failure;
        report.error = e.what();
    }

    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

RunReport run_and_write(const RunConfig& config) {
    RunReport report = run(config);
    write_text(render(report), config.output_path);
    return report;
}

nlohmann::json config_json(const RunConfig& c) {
    return {{"scenario", to_string(c.scenario)},
            {"grid_n", c.grid_n},
            {"tol", c.tol},
            {"max_iters", c.max_iters},
            {"m_param", c.m_param},
            {"lambda", c.lambda_bvp},
            {"alpha", c.alpha},
            {"c", c.c},
            {"seed", c.seed},
            {"format", to_string(c.output_format)},
            {"out", c.output_path},
            {"trace", c.trace},
            {"operator", c.op},
            {"modulus", c.modulus.empty() ? resolve_modulus(c).describe() : c.modulus},
            {"modulus_c", c.modulus_c},
            {"pairs", c.pairs}};
}

nlohmann::json trace_json(const IterateTrace& trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"iter", s.index},
                         {"step_norm", s.step_norm},
                         {"a_priori", s.a_priori},
                         {"a_posteriori", s.a_posteriori}});
    }
    return {{"direction", to_string(trace.direction)}, {"steps", std::move(steps)}};
}

nlohmann::json report_json(const RunReport& report) {
    nlohmann::json j{{"config", config_json(report.config)},
                     {"exit_code", report.exit_code},
                     {"wall_ms", report.wall_ms},
                     {"version", report.version}};
    if (!report.error.empty()) j["error"] = report.error;

    if (const auto* r = std::get_if<FixedPointResult>(&report.outcome)) {
        j["result"] = result_json(*r);
        if (report.periodic) {
            j["result"]["hypothesis"] = condition_json(report.periodic->hypothesis);
            j["result"]["ode_residual"] = report.periodic->ode_residual;
        }
        if (report.config.trace && r->trace) j["trace"] = trace_json(*r->trace);
    } else if (const auto* c = std::get_if<ConditionReport>(&report.outcome)) {
        j["result"] = condition_json(*c);
    } else if (const auto* u = std::get_if<UniquenessReport>(&report.outcome)) {
        j["result"] = probe_json(*u);
    }
    return j;
}

std::string trace_csv(const IterateTrace& trace) {
    std::string out = "iter,step_norm,a_priori,a_posteriori\n";
    for (const auto& s : trace.steps) {
        out += std::to_string(s.index) + ',' + fmt17(s.step_norm) + ',' + fmt17(s.a_priori) + ',' +
               fmt17(s.a_posteriori) + '\n';
    }
    return out;
}

std::string render(const RunReport& report) {
    if (report.config.output_format == OutputFormat::json) return report_json(report).dump(2) + "\n";

    if (const auto* r = std::get_if<FixedPointResult>(&report.outcome)) {
        return r->trace ? trace_csv(*r->trace) : trace_csv(IterateTrace{});
    }
    if (const auto* c = std::get_if<ConditionReport>(&report.outcome)) {
        std::string out = "pairs_tested,pairs_passed,worst_ratio,passed\n";
        out += std::to_string(c->pairs_tested) + ',' + std::to_string(c->pairs_passed) + ',' +
               fmt17(c->worst_ratio) + ',' + (c->passed() ? "true" : "false") + '\n';
        return out;
    }
    if (const auto* u = std::get_if<UniquenessReport>(&report.outcome)) {
        std::string out = "start,status,iterations,residual,case,max_pairwise_distance\n";
        for (const auto& run : u->runs) {
            out += '"' + run.start + "\",";
            if (run.result) {
                out += "converged," + std::to_string(run.result->iterations) + ',' +
                       fmt17(run.result->residual) + ',' + to_string(run.result->case_taken);
            } else {
                out += "failed,,,";
            }
            out += ',' + fmt17(u->max_pairwise_distance) + '\n';
        }
        return out;
    }
    // Solver failure before any result: header only.
    return trace_csv(IterateTrace{});
}

void emit_trace(const FixedPointResult& result, OutputFormat format, const std::string& path) {
    if (!result.trace) throw DomainError("emit_trace: result was solved without record_trace");
    if (format == OutputFormat::csv) {
        write_text(trace_csv(*result.trace), path);
    } else {
        write_text(trace_json(*result.trace).dump(2) + "\n", path);
    }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv) {
    if (argc < 2 || std::string(argv[1]) != "solve") {
        if (argc >= 2 && (std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h")) {
            std::cout << "usage: ofp solve --scenario <signal|periodic|check-h|probe-uniqueness> "
                         "[options]\n       ofp solve --help\n";
            return std::nullopt;
        }
        if (argc >= 2 && std::string(argv[1]) == "--version") {
            std::cout << kVersion << "\n";
            return std::nullopt;
        }
        throw ConfigError("expected the 'solve' command");
    }

    RunConfig cfg;
    std::string scenario = "signal";
    std::string format = "json";

    CLI::App app{"Fixed points of decreasing ordered-contraction operators", "ofp solve"};
    app.set_config("--config", "", "Key = value configuration file (flags take precedence)");
    app.allow_config_extras(false);
    app.add_option("--scenario", scenario, "signal | periodic | check-h | probe-uniqueness")
        ->required();
    app.add_option("--grid-n", cfg.grid_n, "Grid intervals on [0,1]");
    app.add_option("--tol", cfg.tol, "Certified tolerance for ||x_k - x*||_1");
    app.add_option("--max-iters", cfg.max_iters, "Iteration budget");
    app.add_option("--m-param", cfg.m_param, "Channel parameter of the signal operator");
    app.add_option("--lambda", cfg.lambda_bvp, "Shift lambda of the periodic problem");
    app.add_option("--alpha", cfg.alpha, "Hypothesis constant alpha, 0 < alpha <= lambda");
    app.add_option("--c", cfg.c, "Constant c in F(t,u) = c - lambda u");
    app.add_option("--seed", cfg.seed, "Seed for sampled checks");
    app.add_option("--format", format, "json | csv");
    app.add_option("--out", cfg.output_path, "Output file (default: stdout)");
    app.add_flag("--trace", cfg.trace, "Include the convergence trace");
    app.add_option("--operator", cfg.op, "check-h operator: signal | identity | reflect-double");
    app.add_option("--modulus", cfg.modulus, "constant | logarithmic");
    app.add_option("--modulus-c", cfg.modulus_c, "Value of the constant modulus");
    app.add_option("--pairs", cfg.pairs, "Sampled comparable pairs for check-h");

    try {
        app.parse(argc - 1, argv + 1);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    cfg.scenario = parse_scenario(scenario);
    cfg.output_format = parse_format(format);
    cfg.validate();
    return cfg;
}

int main(int argc, const char* const* argv) {
    try {
        const auto cfg = parse_args(argc, argv);
        if (!cfg) return exit_ok;
        const RunReport report = run_and_write(*cfg);
        if (!report.error.empty()) std::cerr << "ofp: " << report.error << "\n";
        return report.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "ofp: configuration error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const Error& e) {
        std::cerr << "ofp: " << e.what() << "\n";
        return exit_solver_failure;
    }
}

} // namespace ofp::cli
