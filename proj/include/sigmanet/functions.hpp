#pragma once

#include "sigmanet/kst.hpp"

#include <string>

namespace sigmanet {

/// A named target function with its natural dimension.
struct TargetFunction {
    std::string name;
    int d = 1;
    MultivariateFn fn;

    double operator()(std::span<const double> x) const { return fn(x); }
};

/// Resolve a selector: identity, const:<c>, abs-shift, sin-pi, mean2,
/// product2, or table:<csv path> (x,y samples, linear interpolation).
/// Throws std::invalid_argument for unknown selectors.
TargetFunction resolve_function(const std::string& selector);

}  // namespace sigmanet
