#include "ofp/solver.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace ofp {

const char* to_string(StartCase c) { return c == StartCase::I ? "I" : "II"; }

const char* to_string(Direction d) {
    return d == Direction::increasing ? "increasing" : "decreasing";
}

void SolveConfig::validate() const {
    if (!(tol > 0.0)) throw DomainError("solve config: tol must be > 0");
    if (max_iters < 1) throw DomainError("solve config: max_iters must be >= 1");
}

Operator square(const Operator& a) {
    return Operator([a](const GridFunction& u) { return a(a(u)); }, a.residual_allowance());
}

namespace {

bool ordered(const GridFunction& from, const GridFunction& to, Direction direction,
             const ConeSpec& spec) {
    return direction == Direction::increasing ? leq(from, to, spec) : leq(to, from, spec);
}

} // namespace

StartChoice choose_start(const Operator& a, const GridFunction& u0, const ConeSpec& spec) {
    spec.validate();
    const GridFunction au0 = a(u0);
    GridFunction::require_same_grid(u0, au0);

    StartChoice choice{u0, StartCase::I, Direction::increasing};
    if (leq(u0, au0, spec)) {
        // x0 = u0 <= A u0
    } else if (leq(au0, u0, spec)) {
        choice.direction = Direction::decreasing;
    } else {
        // v0 = inf{u0, A u0} satisfies v0 <= A v0 for decreasing A.
        choice.x0 = inf_sup(u0, au0).first;
        choice.case_taken = StartCase::II;
        if (!leq(choice.x0, a(choice.x0), spec)) {
            throw MonotonicityError("case II start violates v0 <= A v0; operator is not decreasing");
        }
    }
    if (!ordered(choice.x0, a(a(choice.x0)), choice.direction, spec)) {
        throw MonotonicityError(std::string("start point is not ") + to_string(choice.direction) +
                                " under A o A; operator violates monotonicity or the contraction condition");
    }
    return choice;
}

IterateOutcome iterate(const Operator& b, const GridFunction& x0, Direction direction,
                       const Modulus& f, const ConeSpec& spec, const SolveConfig& cfg) {
    cfg.validate();
    spec.validate();

    IterateOutcome out{x0, IterateTrace{direction, {}, {}}, 0.0, 0.0, 0};
    GridFunction current = x0;
    GridFunction next = b(current);
    if (!ordered(current, next, direction, spec)) {
        throw MonotonicityError(std::string("x0 and B(x0) are not ") + to_string(direction));
    }
    out.d0 = monotone_norm(next - current, spec);
    if (cfg.record_iterates) out.trace.iterates.push_back(current);
    if (out.d0 == 0.0) return out;

    out.lambda = contraction_rate(f, spec, out.d0);
    double a_priori = a_priori_bound(out.lambda, out.d0, 0);

    for (std::size_t k = 0;; ++k) {
        const double step = k == 0 ? out.d0 : monotone_norm(next - current, spec);
        double post = 0.0;
        if (step > 0.0) {
            const double rate = cfg.retighten_rate
                                    ? std::min(out.lambda, contraction_rate(f, spec, step))
                                    : out.lambda;
            post = a_posteriori_bound(rate, step);
        }
        if (cfg.record_trace) out.trace.steps.push_back({k, step, a_priori, post});
        if (cfg.record_iterates) out.trace.iterates.push_back(next);

        if (post <= cfg.tol) {
            out.limit = std::move(next);
            out.iterations = k + 1;
            return out;
        }
        if (k + 1 >= cfg.max_iters) {
            std::ostringstream msg;
            msg << "no convergence after " << cfg.max_iters << " iterations (certificate "
                << post << " > tol " << cfg.tol << ")";
            throw ConvergenceError(msg.str());
        }
        current = std::move(next);
        next = b(current);
        if (!ordered(current, next, direction, spec)) {
            std::ostringstream msg;
            msg << "iterate chain lost monotonicity at step " << k + 1;
            throw MonotonicityError(msg.str());
        }
        a_priori = out.lambda * a_priori;
    }
}

FixedPointResult solve(const Operator& a, const GridFunction& u0, const Modulus& f,
                       const ConeSpec& spec, const SolveConfig& cfg) {
    const StartChoice start = choose_start(a, u0, spec);
    IterateOutcome run = iterate(square(a), start.x0, start.direction, f, spec, cfg);

    const double residual = sup_distance(a(run.limit), run.limit);
    const double threshold = 2.0 * spec.normal_constant * spec.upper_equiv * cfg.tol +
                             a.residual_allowance();
    if (!(residual <= threshold)) {
        std::ostringstream msg;
        msg << "fixed-point residual " << residual << " exceeds threshold " << threshold;
        throw ConvergenceError(msg.str());
    }

    FixedPointResult result{std::move(run.limit), residual, threshold, run.lambda, run.d0,
                            run.iterations, start.case_taken, std::nullopt};
    if (cfg.record_trace || cfg.record_iterates) result.trace = std::move(run.trace);
    return result;
}

bool UniquenessReport::all_converged() const {
    return std::all_of(runs.begin(), runs.end(), [](const ProbeRun& r) { return r.result.has_value(); });
}

UniquenessReport uniqueness_probe(const Operator& a, const std::vector<NamedStart>& starts,
                                  const Modulus& f, const ConeSpec& spec, const SolveConfig& cfg) {
    std::vector<std::future<ProbeRun>> pending;
    pending.reserve(starts.size());
    for (const auto& start : starts) {
        pending.push_back(std::async(std::launch::async, [&a, &f, &spec, &cfg, &start] {
            ProbeRun run{start.name, std::nullopt, {}};
            try {
                run.result = solve(a, start.u0, f, spec, cfg);
            } catch (const Error& e) {
                run.error = e.what();
            }
            return run;
        }));
    }

    UniquenessReport report;
    for (auto& p : pending) report.runs.push_back(p.get());
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
            const auto& ri = report.runs[i].result;
            const auto& rj = report.runs[j].result;
            if (!ri || !rj) continue;
            report.max_pairwise_distance =
                std::max(report.max_pairwise_distance, sup_distance(ri->fixed_point, rj->fixed_point));
        }
    }
    return report;
}

} // namespace ofp
