#pragma once

// Contraction moduli, sampled verification of the ordered contraction condition
//
//     A(u) - A(v) <= f(||v - u||) (v - u)   for all u <= v,
//
// and the rate / error-bound formulas that follow from it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ofp/errors.hpp"
#include "ofp/lattice.hpp"
#include "ofp/operator.hpp"

namespace ofp {

/// Nondecreasing map f : (0, inf) -> (0, 1).
class Modulus {
public:
    enum class Kind { constant, logarithmic, user };

    /// f(t) = c, c in (0,1).
    static Modulus constant(double c);
    /// f(t) = t ln(1 + 1/t).
    static Modulus logarithmic();
    /// Arbitrary callable. Range and monotonicity are checked on 10^4
    /// log-spaced samples in (1e-9, 1e9); a violation throws DomainError.
    static Modulus user(std::function<double(double)> fn, std::string name = "user");

    /// Throws DomainError for t <= 0: f is not defined at zero.
    double operator()(double t) const;

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double constant_value() const { return c_; }
    [[nodiscard]] std::string describe() const;

private:
    Modulus(Kind kind, double c, std::function<double(double)> fn, std::string name);

    Kind kind_;
    double c_ = 0.0;
    std::function<double(double)> fn_;
    std::string name_;
};

inline double eval_modulus(const Modulus& f, double t) { return f(t); }

struct ComparablePair {
    GridFunction lower;
    GridFunction upper;
};

/// Failing pair for a grid-function inequality, at its worst node.
struct PairWitness {
    GridFunction lower;
    GridFunction upper;
    Eigen::Index node = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Failing sample for a scalar inequality in (t, x, y) with x > y.
struct ScalarWitness {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double gap = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string inequality;
};

struct ConditionReport {
    std::size_t pairs_tested = 0;
    std::size_t pairs_passed = 0;
    /// Largest lhs / (rhs + tol) seen. All samples pass iff this is <= 1.
    double worst_ratio = 0.0;
    /// The worst failing sample; empty when every sample passed.
    std::optional<std::variant<PairWitness, ScalarWitness>> witness;

    [[nodiscard]] bool passed() const { return pairs_passed == pairs_tested; }
};

/// lhs / (rhs + tol), with +inf when the denominator vanishes and lhs > 0.
double violation_ratio(double lhs, double rhs, double tol);

/// Comparable pairs (u, u + p) with p >= 0, so comparability holds by construction.
struct PairSamplerConfig {
    std::size_t n = 1000;
    std::size_t count = 200;
    double lo = 0.0;
    double hi = 1.0;
    /// Gap fraction: p(t_i) is drawn from [0, amplitude * (hi - u(t_i))].
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};

std::vector<ComparablePair> sample_comparable_pairs(const PairSamplerConfig& cfg);

/// Checks A(u) - A(v) <= f(||v-u||)(v-u) + order_tol nodewise for every pair.
/// The native sup norm is used inside f. Incomparable pairs throw SamplerError.
ConditionReport check_condition_H(const Operator& a, const Modulus& f,
                                  std::span<const ComparablePair> pairs,
                                  const ConeSpec& spec = {});

/// Checks the induced contraction of B = A o A:
///   B(v) - B(u) <= f(N f(d) d) f(d) (v - u) + order_tol,   d = ||v - u||.
ConditionReport check_squared_contraction(const Operator& a, const Modulus& f,
                                          std::span<const ComparablePair> pairs,
                                          const ConeSpec& spec = {});

/// lambda = f(N f(M d0) M d0) f(M d0). Requires d0 > 0.
double contraction_rate(const Modulus& f, const ConeSpec& spec, double d0);

/// lambda^k / (1 - lambda) * d0; bounds ||x* - x_k||_1.
template <typename Scalar>
Scalar a_priori_bound(Scalar lambda, Scalar d0, std::size_t k) {
    if (!(lambda > 0) || !(lambda < 1)) throw DomainError("a_priori_bound: lambda must lie in (0,1)");
    if (!(d0 >= 0)) throw DomainError("a_priori_bound: d0 must be >= 0");
    Scalar bound = d0 / (Scalar(1) - lambda);
    for (std::size_t i = 0; i < k; ++i) bound = lambda * bound;
    return bound;
}

/// lambda / (1 - lambda) * last_step; bounds the distance of the newest iterate to the limit.
double a_posteriori_bound(double lambda, double last_step);

} // namespace ofp
