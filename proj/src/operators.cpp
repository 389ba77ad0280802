#include "ofp/operators.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

namespace ofp {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

// ---------------------------------------------------------------------------
// Signal feedback operator

SignalFeedbackOperator::SignalFeedbackOperator(int m_param, IntegralMode mode, SignalDomain domain,
                                               double order_tol)
    : m_param_(m_param), mode_(mode), domain_(domain), order_tol_(order_tol) {
    if (m_param_ < 1) throw DomainError("signal operator: channel parameter M must be >= 1");
    if (!(order_tol_ >= 0.0)) throw DomainError("signal operator: order_tol must be >= 0");
}

GridFunction SignalFeedbackOperator::operator()(const GridFunction& u) const {
    const std::size_t n = u.n();
    const double coef = kPi / (32.0 * m_param_);
    const double min_node = u.values().minCoeff();
    if (domain_ == SignalDomain::cone && min_node < -order_tol_) {
        std::ostringstream msg;
        msg << "signal operator: input leaves the cone (min node " << min_node << ")";
        throw DomainError(msg.str());
    }
    if (!(2.0 * kPi + min_node > 0.0)) {
        throw DomainError("signal operator: input reaches the pole u = -2 pi");
    }

    Eigen::VectorXd out(u.size());
    if (mode_ == IntegralMode::analytic) {
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            const double t2 = u.node(i) * u.node(i);
            // int_0^1 (s^2 + t^2)(1 + u s^2) ds
            const double inner = 1.0 / 3.0 + t2 + u[i] * (0.2 + t2 / 3.0);
            out[i] = 1.0 / (2.0 * kPi + u[i]) - coef * inner;
        }
    } else {
        const Eigen::VectorXd w = quadrature_weights(n);
        Eigen::VectorXd s2(u.size());
        for (Eigen::Index j = 0; j < u.size(); ++j) s2[j] = u.node(j) * u.node(j);
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            const double t2 = u.node(i) * u.node(i);
            const Eigen::VectorXd integrand =
                ((s2.array() + t2) * (1.0 + u[i] * s2.array())).matrix();
            out[i] = 1.0 / (2.0 * kPi + u[i]) - coef * w.dot(integrand);
        }
    }
    return GridFunction(std::move(out));
}

Operator SignalFeedbackOperator::as_operator() const {
    return Operator([op = *this](const GridFunction& u) { return op(u); });
}

double SignalFeedbackOperator::quadrature_error_model(std::size_t n, double u_max) const {
    // Integrand g(s) = s^2 + t^2 + u s^4 + u t^2 s^2 on [0,1].
    const double h = 1.0 / static_cast<double>(n);
    const double coef = kPi / (32.0 * m_param_);
    if (n % 2 == 0) return coef * std::pow(h, 4) / 180.0 * 24.0 * u_max;  // g'''' = 24 u
    return coef * h * h / 12.0 * (2.0 + 14.0 * u_max);                    // |g''| <= 2 + 14|u|
}

double signal_contraction_margin(const SignalFeedbackOperator& op) {
    return 1.0 / (4.0 * kPi * kPi) + kPi / (60.0 * op.m_param());
}

// ---------------------------------------------------------------------------
// Green's function and kernel quadrature

namespace {

// Branch for s <= t, valid as an analytic function of s on all of [0,1].
double green_left(double lambda, double t, double s) {
    return std::exp(lambda * (s - t)) / -std::expm1(-lambda);
}

// Branch for s > t, likewise extended.
double green_right(double lambda, double t, double s) {
    return std::exp(lambda * (s - t)) / std::expm1(lambda);
}

struct NodeWeight {
    Eigen::Index node;
    double weight;
};

// Weights integrating a smooth function over [t_a, t_b] on the uniform grid of
// n intervals. The one-interval case borrows neighbouring nodes (cubic
// interpolation), so the integrand must stay smooth slightly beyond the segment.
std::vector<NodeWeight> segment_weights(Eigen::Index a, Eigen::Index b, Eigen::Index n) {
    const double h = 1.0 / static_cast<double>(n);
    const Eigen::Index count = b - a;
    std::vector<NodeWeight> w;
    if (count <= 0) return w;

    if (count == 1) {
        if (n < 3) {
            w.push_back({a, h / 2.0});
            w.push_back({b, h / 2.0});
            return w;
        }
        Eigen::Index first = a - 1;
        std::array<double, 4> c{-1.0, 13.0, 13.0, -1.0};
        if (a == 0) {
            first = 0;
            c = {9.0, 19.0, -5.0, 1.0};
        } else if (b == n) {
            first = n - 3;
            c = {1.0, -5.0, 19.0, 9.0};
        }
        for (Eigen::Index k = 0; k < 4; ++k) w.push_back({first + k, c[k] * h / 24.0});
        return w;
    }

    // Composite Simpson over an even number of intervals, then a 3/8 panel for odd counts.
    const Eigen::Index simpson_end = count % 2 == 0 ? b : b - 3;
    for (Eigen::Index i = a; i < simpson_end; i += 2) {
        w.push_back({i, h / 3.0});
        w.push_back({i + 1, 4.0 * h / 3.0});
        w.push_back({i + 2, h / 3.0});
    }
    if (count % 2 == 1) {
        const std::array<double, 4> c{1.0, 3.0, 3.0, 1.0};
        for (Eigen::Index k = 0; k < 4; ++k) w.push_back({simpson_end + k, c[k] * 3.0 * h / 8.0});
    }
    return w;
}

} // namespace

double greens_function(double lambda_bvp, double t, double s) {
    if (!(lambda_bvp > 0.0)) throw DomainError("greens_function: lambda must be > 0");
    if (!(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0)) {
        throw DomainError("greens_function: t and s must lie in [0,1]");
    }
    return s <= t ? green_left(lambda_bvp, t, s) : green_right(lambda_bvp, t, s);
}

Eigen::MatrixXd kernel_weights(double lambda_bvp, std::size_t n, KernelRule rule) {
    if (!(lambda_bvp > 0.0)) throw DomainError("kernel_weights: lambda must be > 0");
    if (n < 1) throw DomainError("kernel_weights: need n >= 1");
    const auto size = static_cast<Eigen::Index>(n) + 1;
    const auto node = [n](Eigen::Index i) { return GridFunction::node_at(i, n); };
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(size, size);

    if (rule == KernelRule::naive) {
        const Eigen::VectorXd q = quadrature_weights(n);
        for (Eigen::Index i = 0; i < size; ++i) {
            for (Eigen::Index j = 0; j < size; ++j) {
                w(i, j) = q[j] * greens_function(lambda_bvp, node(i), node(j));
            }
        }
        return w;
    }

    const auto last = static_cast<Eigen::Index>(n);
    for (Eigen::Index i = 0; i < size; ++i) {
        const double t = node(i);
        for (const auto& [j, q] : segment_weights(0, i, last)) {
            w(i, j) += q * green_left(lambda_bvp, t, node(j));
        }
        for (const auto& [j, q] : segment_weights(i, last, last)) {
            w(i, j) += q * green_right(lambda_bvp, t, node(j));
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// Periodic BVP operator

PeriodicBVPOperator::PeriodicBVPOperator(double lambda_bvp, Nonlinearity f, double alpha,
                                         std::size_t n, PeriodicOptions options)
    : lambda_bvp_(lambda_bvp), f_(std::move(f)), alpha_(alpha), n_(n), options_(options) {
    if (!(lambda_bvp_ > 0.0)) throw DomainError("periodic operator: lambda must be > 0");
    if (!(options_.normal_constant >= 1.0)) throw DomainError("periodic operator: N must be >= 1");
    if (!(alpha_ > 0.0 && alpha_ <= lambda_bvp_ * options_.normal_constant)) {
        throw DomainError("periodic operator: alpha must satisfy 0 < alpha <= lambda N");
    }
    if (!f_) throw DomainError("periodic operator: empty nonlinearity");
    if (!(options_.residual_allowance >= 0.0)) {
        throw DomainError("periodic operator: residual allowance must be >= 0");
    }
    weights_ = kernel_weights(lambda_bvp_, n_, options_.rule);
}

GridFunction PeriodicBVPOperator::operator()(const GridFunction& u) const {
    if (u.n() != n_) {
        throw GridMismatchError("periodic operator: built for n=" + std::to_string(n_) +
                                ", got n=" + std::to_string(u.n()));
    }
    Eigen::VectorXd h(u.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        double fj = 0.0;
        try {
            fj = f_(u.node(j), u[j]);
        } catch (const std::exception& e) {
            throw DomainError("periodic operator: F failed at node " + std::to_string(j) + ": " + e.what());
        }
        if (!std::isfinite(fj)) {
            throw DomainError("periodic operator: F is not finite at node " + std::to_string(j));
        }
        h[j] = fj + lambda_bvp_ * u[j];
    }
    return GridFunction(weights_ * h);
}

Operator PeriodicBVPOperator::as_operator() const {
    auto shared = std::make_shared<const PeriodicBVPOperator>(*this);
    return Operator([shared](const GridFunction& u) { return (*shared)(u); },
                    options_.residual_allowance);
}

std::vector<ScalarTriple> sample_hypothesis_triples(const TripleSamplerConfig& cfg) {
    if (!(cfg.gap_lo > 0.0 && cfg.gap_hi >= cfg.gap_lo)) {
        throw DomainError("triple sampler: need 0 < gap_lo <= gap_hi");
    }
    if (!(cfg.y_hi >= cfg.y_lo)) throw DomainError("triple sampler: need y_lo <= y_hi");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_lo = std::log(cfg.gap_lo);
    const double log_hi = std::log(cfg.gap_hi);
    std::vector<ScalarTriple> out;
    out.reserve(cfg.count);
    for (std::size_t k = 0; k < cfg.count; ++k) {
        const double t = unit(rng);
        const double y = cfg.y_lo + (cfg.y_hi - cfg.y_lo) * unit(rng);
        const double gap = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
        out.push_back({t, y + gap, y});
    }
    return out;
}

ConditionReport check_periodic_hypothesis(const Nonlinearity& f, double lambda_bvp, double alpha,
                                          std::span<const ScalarTriple> triples, double tol) {
    if (!(lambda_bvp > 0.0)) throw DomainError("hypothesis check: lambda must be > 0");
    if (!(alpha > 0.0)) throw DomainError("hypothesis check: alpha must be > 0");
    const Modulus modulus = Modulus::logarithmic();
    const auto h = [&](double t, double z) { return f(t, z) + lambda_bvp * z; };

    ConditionReport report;
    double worst_failing = -std::numeric_limits<double>::infinity();
    for (const auto& [t, x, y] : triples) {
        if (!(x > y)) throw SamplerError("hypothesis sampler produced x <= y");
        const double gap = x - y;
        const double diff = h(t, y) - h(t, x);
        const double bound = alpha * gap * modulus(gap);

        const double lower = violation_ratio(-diff, 0.0, tol);
        const double upper = violation_ratio(diff, bound, tol);
        const double worst = std::max(lower, upper);

        if (report.pairs_tested == 0 || worst > report.worst_ratio) report.worst_ratio = worst;
        ++report.pairs_tested;
        if (worst <= 1.0) {
            ++report.pairs_passed;
        } else if (worst > worst_failing) {
            worst_failing = worst;
            const bool lower_failed = lower >= upper;
            report.witness = ScalarWitness{t,
                                           x,
                                           y,
                                           gap,
                                           lower_failed ? -diff : diff,
                                           lower_failed ? 0.0 : bound,
                                           lower_failed ? "lower" : "upper"};
        }
    }
    return report;
}

double ode_residual(const GridFunction& u, const Nonlinearity& f) {
    const std::size_t n = u.n();
    if (n < 2) throw DomainError("ode_residual: need n >= 2");
    const double h = 1.0 / static_cast<double>(n);
    double worst = std::abs(u[0] - u[u.size() - 1]);
    for (Eigen::Index i = 1; i + 1 < u.size(); ++i) {
        const double derivative = (u[i + 1] - u[i - 1]) / (2.0 * h);
        worst = std::max(worst, std::abs(derivative - f(u.node(i), u[i])));
    }
    return worst;
}

} // namespace ofp
