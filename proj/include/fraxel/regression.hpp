#pragma once

#include <span>

namespace fraxel {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of y on x.
FitResult linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Ordinary least squares of ln(ys) on ln(xs). All values must be > 0.
FitResult loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace fraxel
