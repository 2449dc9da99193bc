#pragma once

#include <span>

namespace spherebl {

/// Ordinary least squares y = intercept + slope * x. Standard errors come
/// from the residual scatter (n - 2 degrees of freedom), so they absorb both
/// Monte Carlo noise and model misfit.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_std_error = 0.0;
  double slope_std_error = 0.0;
  int points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace spherebl
