#pragma once

#include <functional>
#include <utility>

#include "ofp/lattice.hpp"

namespace ofp {

/// A self-map on grid functions, type-erased.
///
/// residual_allowance is the discretisation error the operator itself
/// contributes to a fixed-point residual (quadrature error for integral
/// operators, zero for exact maps). The solver adds it to its threshold.
class Operator {
public:
    using Map = std::function<GridFunction(const GridFunction&)>;

    explicit Operator(Map map, double residual_allowance = 0.0)
        : map_(std::move(map)), residual_allowance_(residual_allowance) {}

    GridFunction operator()(const GridFunction& u) const { return map_(u); }

    [[nodiscard]] double residual_allowance() const { return residual_allowance_; }

private:
    Map map_;
    double residual_allowance_;
};

} // namespace ofp
