#pragma once

// Concrete decreasing operators on C[0,1]:
//
//  * SignalFeedbackOperator
//      A u(t) = 1/(2 pi + u(t)) - pi^2/16 int_0^1 (s^2 + t^2)(1 + u(t) s^2)/(2 pi M) ds
//
//  * PeriodicBVPOperator, the integral form of u' = F(t,u), u(0) = u(1):
//      T u(t) = int_0^1 G(t,s) [F(s,u(s)) + lambda u(s)] ds
//    with the periodic Green's function G of u' + lambda u.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ofp/contraction.hpp"
#include "ofp/errors.hpp"
#include "ofp/lattice.hpp"
#include "ofp/operator.hpp"

namespace ofp {

/// Weights of the composite rule on n+1 equispaced nodes of [0,1]:
/// Simpson for even n, trapezoid for odd n.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> quadrature_weights(std::size_t n) {
    if (n < 1) throw DomainError("quadrature: need at least two nodes");
    const Scalar h = Scalar(1) / Scalar(n);
    const auto size = static_cast<Eigen::Index>(n) + 1;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(size);
    if (n % 2 == 0) {
        for (Eigen::Index i = 0; i < size; ++i) w[i] = (i % 2 == 1 ? Scalar(4) : Scalar(2)) * h / Scalar(3);
        w[0] = w[size - 1] = h / Scalar(3);
    } else {
        w.setConstant(h);
        w[0] = w[size - 1] = h / Scalar(2);
    }
    return w;
}

/// Approximates int_0^1 from node values at t_i = i/n, n = values.size() - 1.
template <typename Derived>
typename Derived::Scalar quadrature(const Eigen::MatrixBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    if (values.cols() != 1 || values.size() < 2) {
        throw DomainError("quadrature: expected a column of n+1 >= 2 node values");
    }
    return quadrature_weights<Scalar>(static_cast<std::size_t>(values.size() - 1)).dot(values.derived());
}

// ---------------------------------------------------------------------------
// Signal feedback operator

enum class IntegralMode { analytic, quadrature };

/// pole_free accepts any u > -2 pi (where the map is defined); cone also
/// rejects nodes below -order_tol.
enum class SignalDomain { pole_free, cone };

class SignalFeedbackOperator {
public:
    explicit SignalFeedbackOperator(int m_param = 1, IntegralMode mode = IntegralMode::analytic,
                                    SignalDomain domain = SignalDomain::pole_free,
                                    double order_tol = 1e-12);

    GridFunction operator()(const GridFunction& u) const;
    [[nodiscard]] Operator as_operator() const;

    [[nodiscard]] int m_param() const { return m_param_; }
    [[nodiscard]] IntegralMode mode() const { return mode_; }

    /// Bound on |quadrature - analytic| at a node with |u(t)| <= u_max.
    [[nodiscard]] double quadrature_error_model(std::size_t n, double u_max) const;

private:
    int m_param_;
    IntegralMode mode_;
    SignalDomain domain_;
    double order_tol_;
};

inline GridFunction signal_apply(const SignalFeedbackOperator& op, const GridFunction& u) {
    return op(u);
}

/// 1/(4 pi^2) + pi/(60 M): the nodewise factor bounding A(u) - A(v) by a multiple of v - u.
double signal_contraction_margin(const SignalFeedbackOperator& op);

// ---------------------------------------------------------------------------
// Periodic boundary value problem

using Nonlinearity = std::function<double(double t, double u)>;

/// G(t,s) = e^{lambda(1+s-t)}/(e^lambda - 1) for s <= t, e^{lambda(s-t)}/(e^lambda - 1) for s > t.
double greens_function(double lambda_bvp, double t, double s);

/// split_diagonal integrates each smooth branch of G(t,.) separately, with the
/// split at s = t. naive applies the composite rule across the jump there.
enum class KernelRule { split_diagonal, naive };

/// Row i holds the weights w_ij so that sum_j w_ij g(s_j) ~ int_0^1 G(t_i,s) g(s) ds.
Eigen::MatrixXd kernel_weights(double lambda_bvp, std::size_t n,
                               KernelRule rule = KernelRule::split_diagonal);

struct PeriodicOptions {
    KernelRule rule = KernelRule::split_diagonal;
    double normal_constant = 1.0;
    /// Discretisation error admitted in the solver's residual check.
    double residual_allowance = 1e-8;
};

class PeriodicBVPOperator {
public:
    PeriodicBVPOperator(double lambda_bvp, Nonlinearity f, double alpha, std::size_t n,
                        PeriodicOptions options = {});

    GridFunction operator()(const GridFunction& u) const;
    [[nodiscard]] Operator as_operator() const;

    [[nodiscard]] double lambda_bvp() const { return lambda_bvp_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] const Eigen::MatrixXd& weights() const { return weights_; }
    [[nodiscard]] const Nonlinearity& nonlinearity() const { return f_; }

private:
    double lambda_bvp_;
    Nonlinearity f_;
    double alpha_;
    std::size_t n_;
    PeriodicOptions options_;
    Eigen::MatrixXd weights_;
};

inline GridFunction periodic_apply(const PeriodicBVPOperator& op, const GridFunction& u) {
    return op(u);
}

struct ScalarTriple {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// y uniform in [y_lo, y_hi], t uniform in [0,1], x = y + gap with the gap
/// log-uniform in [gap_lo, gap_hi].
struct TripleSamplerConfig {
    std::size_t count = 10000;
    double y_lo = -5.0;
    double y_hi = 5.0;
    double gap_lo = 1e-6;
    double gap_hi = 10.0;
    std::uint64_t seed = 0;
};

std::vector<ScalarTriple> sample_hypothesis_triples(const TripleSamplerConfig& cfg);

/// With h(t,z) = F(t,z) + lambda z and d = x - y > 0 checks
///   0 <= h(t,y) - h(t,x) <= alpha d f(d),   f(d) = d ln(1 + 1/d).
/// Triples with x <= y throw SamplerError.
ConditionReport check_periodic_hypothesis(const Nonlinearity& f, double lambda_bvp, double alpha,
                                          std::span<const ScalarTriple> triples,
                                          double tol = 1e-12);

/// max(max_i |(u_{i+1} - u_{i-1})/(2h) - F(t_i, u_i)| over interior nodes, |u(0) - u(1)|).
double ode_residual(const GridFunction& u, const Nonlinearity& f);

} // namespace ofp
