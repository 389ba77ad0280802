#include "ofp/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ofp {

namespace {

constexpr std::size_t kModulusSamples = 10000;
constexpr double kModulusSampleLo = 1e-9;
constexpr double kModulusSampleHi = 1e9;

double log_modulus(double t) {
    // ln(1 + 1/t) without overflowing 1/t for tiny t.
    const double log_term = t >= 1.0 ? std::log1p(1.0 / t) : std::log1p(t) - std::log(t);
    // t ln(1 + 1/t) -> 1 from below; keep the result strictly inside (0,1).
    return std::min(t * log_term, std::nextafter(1.0, 0.0));
}

} // namespace

Modulus::Modulus(Kind kind, double c, std::function<double(double)> fn, std::string name)
    : kind_(kind), c_(c), fn_(std::move(fn)), name_(std::move(name)) {}

Modulus Modulus::constant(double c) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("constant modulus needs c in (0,1)");
    return Modulus(Kind::constant, c, nullptr, "constant");
}

Modulus Modulus::logarithmic() { return Modulus(Kind::logarithmic, 0.0, nullptr, "logarithmic"); }

Modulus Modulus::user(std::function<double(double)> fn, std::string name) {
    if (!fn) throw DomainError("user modulus: empty callable");
    const double log_lo = std::log(kModulusSampleLo);
    const double log_hi = std::log(kModulusSampleHi);
    double prev = 0.0;
    for (std::size_t i = 0; i < kModulusSamples; ++i) {
        const double t = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                               static_cast<double>(kModulusSamples - 1));
        const double v = fn(t);
        if (!(v > 0.0 && v < 1.0)) {
            std::ostringstream msg;
            msg << "user modulus leaves (0,1) at t=" << t << " (value " << v << ")";
            throw DomainError(msg.str());
        }
        if (i > 0 && v < prev) {
            std::ostringstream msg;
            msg << "user modulus decreases near t=" << t;
            throw DomainError(msg.str());
        }
        prev = v;
    }
    return Modulus(Kind::user, 0.0, std::move(fn), std::move(name));
}

double Modulus::operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("modulus evaluated at t <= 0");
    switch (kind_) {
        case Kind::constant: return c_;
        case Kind::logarithmic: return log_modulus(t);
        case Kind::user: return fn_(t);
    }
    return 0.0;
}

std::string Modulus::describe() const {
    if (kind_ == Kind::constant) {
        std::ostringstream out;
        out.precision(17);
        out << "constant(" << c_ << ")";
        return out.str();
    }
    return name_;
}

double violation_ratio(double lhs, double rhs, double tol) {
    const double denom = rhs + tol;
    if (denom > 0.0) return lhs / denom;
    return lhs <= denom ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<ComparablePair> sample_comparable_pairs(const PairSamplerConfig& cfg) {
    if (cfg.n < 1) throw DomainError("sampler: grid needs n >= 1");
    if (!(cfg.hi > cfg.lo)) throw DomainError("sampler: need lo < hi");
    if (!(cfg.amplitude >= 0.0 && cfg.amplitude <= 1.0)) {
        throw DomainError("sampler: amplitude must lie in [0,1]");
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto size = static_cast<Eigen::Index>(cfg.n) + 1;
    const double span = cfg.hi - cfg.lo;

    std::vector<ComparablePair> pairs;
    pairs.reserve(cfg.count);
    for (std::size_t k = 0; k < cfg.count; ++k) {
        Eigen::VectorXd base(size);
        if (k % 2 == 0) {
            // rough: independent node values
            for (Eigen::Index i = 0; i < size; ++i) base[i] = cfg.lo + span * unit(rng);
        } else {
            // smooth: mean + single harmonic, clipped to [lo, hi]
            const double mean = unit(rng);
            const double amp = 0.5 * unit(rng);
            const double freq = 1.0 + std::floor(4.0 * unit(rng));
            const double phase = 2.0 * std::numbers::pi * unit(rng);
            for (Eigen::Index i = 0; i < size; ++i) {
                const double t = GridFunction::node_at(i, cfg.n);
                const double s = mean + amp * std::sin(2.0 * std::numbers::pi * freq * t + phase);
                base[i] = cfg.lo + span * std::clamp(s, 0.0, 1.0);
            }
        }
        Eigen::VectorXd upper(size);
        const double scale = cfg.amplitude * unit(rng);
        for (Eigen::Index i = 0; i < size; ++i) {
            upper[i] = base[i] + scale * unit(rng) * (cfg.hi - base[i]);
        }
        pairs.push_back({GridFunction(std::move(base)), GridFunction(std::move(upper))});
    }
    return pairs;
}

namespace {

// Shared driver: for each pair evaluate lhs(u, v) and the scalar coefficient
// c(d) with d = ||v - u||, and check lhs <= c (v - u) + tol nodewise.
template <typename Lhs, typename Coefficient>
ConditionReport check_pairs(std::span<const ComparablePair> pairs, const ConeSpec& spec,
                            Lhs&& lhs_of, Coefficient&& coefficient_of) {
    spec.validate();
    ConditionReport report;
    double worst_failing = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& pair : pairs) {
        if (!leq(pair.lower, pair.upper, spec)) {
            throw SamplerError("sampler produced an incomparable pair");
        }
        const GridFunction gap = pair.upper - pair.lower;
        const double d = sup_norm(gap);
        // f is undefined at 0; the right-hand side vanishes there regardless.
        const double coef = d > 0.0 ? coefficient_of(d) : 0.0;
        const GridFunction lhs = lhs_of(pair.lower, pair.upper);

        double pair_worst = -std::numeric_limits<double>::infinity();
        Eigen::Index worst_node = 0;
        for (Eigen::Index i = 0; i < lhs.size(); ++i) {
            const double r = violation_ratio(lhs[i], coef * gap[i], spec.order_tol);
            if (r > pair_worst) {
                pair_worst = r;
                worst_node = i;
            }
        }
        ++report.pairs_tested;
        if (!any || pair_worst > report.worst_ratio) report.worst_ratio = pair_worst;
        any = true;
        if (pair_worst <= 1.0) {
            ++report.pairs_passed;
        } else if (pair_worst > worst_failing) {
            worst_failing = pair_worst;
            report.witness = PairWitness{pair.lower, pair.upper, worst_node, lhs[worst_node],
                                         coef * gap[worst_node]};
        }
    }
    return report;
}

} // namespace

ConditionReport check_condition_H(const Operator& a, const Modulus& f,
                                  std::span<const ComparablePair> pairs, const ConeSpec& spec) {
    return check_pairs(
        pairs, spec,
        [&](const GridFunction& u, const GridFunction& v) { return a(u) - a(v); },
        [&](double d) { return f(d); });
}

ConditionReport check_squared_contraction(const Operator& a, const Modulus& f,
                                          std::span<const ComparablePair> pairs,
                                          const ConeSpec& spec) {
    const double n_const = spec.normal_constant;
    return check_pairs(
        pairs, spec,
        [&](const GridFunction& u, const GridFunction& v) { return a(a(v)) - a(a(u)); },
        [&](double d) {
            const double fd = f(d);
            return f(n_const * fd * d) * fd;
        });
}

double contraction_rate(const Modulus& f, const ConeSpec& spec, double d0) {
    if (!(d0 > 0.0)) throw DomainError("contraction_rate: d0 must be > 0");
    spec.validate();
    const double scaled = spec.upper_equiv * d0;
    const double inner = f(scaled);
    return f(spec.normal_constant * inner * scaled) * inner;
}

double a_posteriori_bound(double lambda, double last_step) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("a_posteriori_bound: lambda must lie in (0,1)");
    }
    if (!(last_step >= 0.0)) throw DomainError("a_posteriori_bound: last_step must be >= 0");
    return lambda / (1.0 - lambda) * last_step;
}

} // namespace ofp
