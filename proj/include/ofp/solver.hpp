#pragma once

// Fixed points of decreasing operators satisfying the ordered contraction
// condition. The operator is squared (B = A o A is increasing), a start point
// with x0 <= B x0 (or x0 >= B x0) is selected, and the monotone Picard chain
// x_{k+1} = B x_k is run until its a-posteriori certificate meets the tolerance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ofp/contraction.hpp"
#include "ofp/lattice.hpp"
#include "ofp/operator.hpp"

namespace ofp {

enum class StartCase { I, II };
enum class Direction { increasing, decreasing };

const char* to_string(StartCase c);
const char* to_string(Direction d);

struct SolveConfig {
    /// Target for the certified distance ||x_k - x*||_1.
    double tol = 1e-10;
    std::size_t max_iters = 10000;
    bool record_trace = true;
    /// Keep every iterate x_0, x_1, ... in the trace (memory heavy).
    bool record_iterates = false;
    /// Recompute lambda from the latest step norm instead of d0 only.
    bool retighten_rate = false;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TraceStep {
    /// k: the step runs from x_k to x_{k+1}.
    std::size_t index = 0;
    /// ||x_{k+1} - x_k||_1
    double step_norm = 0.0;
    /// lambda^k / (1 - lambda) d0, bounds ||x* - x_k||_1.
    double a_priori = 0.0;
    /// lambda / (1 - lambda) step_norm, bounds ||x* - x_{k+1}||_1.
    double a_posteriori = 0.0;
};

struct IterateTrace {
    Direction direction = Direction::increasing;
    std::vector<TraceStep> steps;
    std::vector<GridFunction> iterates;
};

struct FixedPointResult {
    GridFunction fixed_point;
    /// ||A x* - x*|| in the native norm.
    double residual = 0.0;
    double residual_threshold = 0.0;
    /// Zero when the d0 = 0 short-circuit fired (no rate is defined then).
    double lambda = 0.0;
    double d0 = 0.0;
    /// Applications of B after the start point was selected.
    std::size_t iterations = 0;
    StartCase case_taken = StartCase::I;
    std::optional<IterateTrace> trace;
};

struct StartChoice {
    GridFunction x0;
    StartCase case_taken;
    Direction direction;
};

struct IterateOutcome {
    GridFunction limit;
    IterateTrace trace;
    double lambda = 0.0;
    double d0 = 0.0;
    std::size_t iterations = 0;
};

/// B(u) = A(A(u)).
Operator square(const Operator& a);

/// Case I when u0 and A(u0) are comparable, otherwise Case II from min(u0, A(u0)).
/// The chosen x0 is checked against B(x0) in the chosen direction; a failed
/// check throws MonotonicityError.
StartChoice choose_start(const Operator& a, const GridFunction& u0, const ConeSpec& spec = {});

/// Runs x_{k+1} = B(x_k) from x0 in the given direction until
/// a_posteriori_bound(lambda, ||x_{k+1} - x_k||_1) <= cfg.tol.
IterateOutcome iterate(const Operator& b, const GridFunction& x0, Direction direction,
                       const Modulus& f, const ConeSpec& spec, const SolveConfig& cfg);

/// Full pipeline choose_start -> square -> iterate, followed by the residual check
/// ||A x* - x*|| <= 2 N M tol + a.residual_allowance().
FixedPointResult solve(const Operator& a, const GridFunction& u0, const Modulus& f,
                       const ConeSpec& spec = {}, const SolveConfig& cfg = {});

struct ProbeRun {
    std::string start;
    std::optional<FixedPointResult> result;
    std::string error;
};

struct UniquenessReport {
    std::vector<ProbeRun> runs;
    /// Largest sup distance between the fixed points of two successful runs.
    double max_pairwise_distance = 0.0;

    [[nodiscard]] bool all_converged() const;
};

struct NamedStart {
    std::string name;
    GridFunction u0;
};

/// Solves from every start (concurrently). Per-run failures are recorded, not thrown.
UniquenessReport uniqueness_probe(const Operator& a, const std::vector<NamedStart>& starts,
                                  const Modulus& f, const ConeSpec& spec = {},
                                  const SolveConfig& cfg = {});

} // namespace ofp
