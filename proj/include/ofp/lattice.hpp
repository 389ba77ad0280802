#pragma once

// Ordered function space on [0,1]: node-sampled grid functions, the pointwise
// cone order, lattice inf/sup, the sup norm and the monotone norm used by the
// convergence estimates.
//
// Everything is defined on the nodes t_i = i/n only. Values between nodes are
// outside the model.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "ofp/errors.hpp"

namespace ofp {

template <typename Scalar>
class BasicGridFunction {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit BasicGridFunction(Vector values) : values_(std::move(values)) {
        if (values_.size() < 2) {
            throw DomainError("grid function needs at least two nodes (n >= 1)");
        }
        if (!values_.allFinite()) {
            throw DomainError("grid function values must be finite");
        }
    }

    static BasicGridFunction constant(std::size_t n, Scalar c) {
        return BasicGridFunction(Vector::Constant(static_cast<Eigen::Index>(n) + 1, c));
    }

    static BasicGridFunction zero(std::size_t n) { return constant(n, Scalar(0)); }

    /// Samples fn(t) at t_i = i/n.
    template <typename Fn>
    static BasicGridFunction sample(std::size_t n, Fn&& fn) {
        Vector v(static_cast<Eigen::Index>(n) + 1);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = fn(node_at(i, n));
        }
        return BasicGridFunction(std::move(v));
    }

    static Scalar node_at(Eigen::Index i, std::size_t n) {
        return Scalar(i) / Scalar(n);
    }

    [[nodiscard]] std::size_t n() const { return static_cast<std::size_t>(values_.size() - 1); }
    [[nodiscard]] Eigen::Index size() const { return values_.size(); }
    [[nodiscard]] const Vector& values() const { return values_; }
    [[nodiscard]] Scalar operator[](Eigen::Index i) const { return values_[i]; }
    [[nodiscard]] Scalar node(Eigen::Index i) const { return node_at(i, n()); }

    friend BasicGridFunction operator+(const BasicGridFunction& a, const BasicGridFunction& b) {
        require_same_grid(a, b);
        return BasicGridFunction(a.values_ + b.values_);
    }
    friend BasicGridFunction operator-(const BasicGridFunction& a, const BasicGridFunction& b) {
        require_same_grid(a, b);
        return BasicGridFunction(a.values_ - b.values_);
    }
    friend BasicGridFunction operator-(const BasicGridFunction& a) {
        return BasicGridFunction(-a.values_);
    }
    friend BasicGridFunction operator*(Scalar s, const BasicGridFunction& a) {
        return BasicGridFunction(s * a.values_);
    }

    static void require_same_grid(const BasicGridFunction& a, const BasicGridFunction& b) {
        if (a.size() != b.size()) {
            throw GridMismatchError("grid resolution mismatch: n=" + std::to_string(a.n()) +
                                    " vs n=" + std::to_string(b.n()));
        }
    }

private:
    Vector values_;
};

/// Configuration of the ordered space.
///
/// The monotone norm is realised as monotone_scale * sup norm, which is monotone
/// for the pointwise cone. The norm-equivalence constants must bracket it:
/// lower_equiv * monotone_scale <= 1 <= upper_equiv * monotone_scale.
template <typename Scalar>
struct BasicConeSpec {
    Scalar normal_constant = 1;
    Scalar upper_equiv = 1;
    Scalar lower_equiv = 1;
    Scalar order_tol = Scalar(1e-12);
    Scalar monotone_scale = 1;

    void validate() const {
        if (!(normal_constant >= 1)) throw DomainError("cone: normal constant N must be >= 1");
        if (!(lower_equiv > 0) || !(upper_equiv >= lower_equiv)) {
            throw DomainError("cone: equivalence constants need M >= m > 0");
        }
        if (!(order_tol >= 0)) throw DomainError("cone: order tolerance must be >= 0");
        if (!(monotone_scale > 0) || lower_equiv * monotone_scale > 1 ||
            upper_equiv * monotone_scale < 1) {
            throw DomainError("cone: monotone norm scale incompatible with m, M");
        }
    }
};

using GridFunction = BasicGridFunction<double>;
using ConeSpec = BasicConeSpec<double>;

/// u <= v nodewise, up to spec.order_tol.
template <typename Scalar>
bool leq(const BasicGridFunction<Scalar>& u, const BasicGridFunction<Scalar>& v,
         const BasicConeSpec<Scalar>& spec = {}) {
    BasicGridFunction<Scalar>::require_same_grid(u, v);
    return ((u.values().array() - v.values().array()) <= spec.order_tol).all();
}

template <typename Scalar>
bool comparable(const BasicGridFunction<Scalar>& u, const BasicGridFunction<Scalar>& v,
                const BasicConeSpec<Scalar>& spec = {}) {
    return leq(u, v, spec) || leq(v, u, spec);
}

/// (pointwise min, pointwise max).
template <typename Scalar>
std::pair<BasicGridFunction<Scalar>, BasicGridFunction<Scalar>>
inf_sup(const BasicGridFunction<Scalar>& u, const BasicGridFunction<Scalar>& v) {
    BasicGridFunction<Scalar>::require_same_grid(u, v);
    return {BasicGridFunction<Scalar>(u.values().cwiseMin(v.values())),
            BasicGridFunction<Scalar>(u.values().cwiseMax(v.values()))};
}

template <typename Scalar>
Scalar sup_norm(const BasicGridFunction<Scalar>& u) {
    return u.values().cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar sup_distance(const BasicGridFunction<Scalar>& u, const BasicGridFunction<Scalar>& v) {
    BasicGridFunction<Scalar>::require_same_grid(u, v);
    return (u.values() - v.values()).cwiseAbs().maxCoeff();
}

/// The monotone norm ||.||_1 that enters every rate and error bound.
template <typename Scalar>
Scalar monotone_norm(const BasicGridFunction<Scalar>& u, const BasicConeSpec<Scalar>& spec = {}) {
    return spec.monotone_scale * sup_norm(u);
}

} // namespace ofp
