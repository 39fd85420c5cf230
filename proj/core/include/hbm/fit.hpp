#pragma once

#include <cstddef>
#include <vector>

namespace hbm {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares straight line through (x_i, y_i).
LineFit linfit(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log|y| against log x (entries with y = 0 are skipped).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Extrapolated limit of y(t) -> lambda + c t^{-1/3} as t -> infinity,
/// least squares in s = t^{-1/3} over the last n_use points (>= 2).
double richardson_limit(const std::vector<double>& t, const std::vector<double>& y,
                        std::size_t n_use = 3);

}  // namespace hbm
