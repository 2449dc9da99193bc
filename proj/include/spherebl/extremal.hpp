#pragma once

// Sharpness experiments: the truncated extremal family, the norm-finiteness
// boundary gamma * p = 1, the divergence of the multilinear left-hand side at
// the critical gamma, and R^delta growth of the localised Euclidean inequality.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherebl/exponents.hpp"
#include "spherebl/quadrature.hpp"
#include "spherebl/symmetry.hpp"

namespace spherebl {

struct ExtremalParams {
  double gamma = 0.5;
  /// Truncation floor eps in (0, 1/2).
  double trunc = 0.125;

  void validate() const;
};

/// The extremal function of a symmetry,
///
///   prod_{i>=2} |x_{a_i}|^{-g l_i} prod_{k in R} |x_k|^{-g}
///     + sum_{i>=2} (1 - |x_{a_i}|^2)^{-g (n - l_i) / 2}
///     + sum_{k in R} (1 - x_k^2)^{-g (n - 1) / 2},
///
/// with every singular base floored at eps: |x_a| -> max(|x_a|, eps) and
/// (1 - |x_a|^2) -> max(1 - |x_a|^2, eps).
Integrand extremal_function(const Symmetry& s, const ExtremalParams& params);

/// eps_k = 2^{-k} for k = first..last.
std::vector<double> dyadic_grid(int first, int last, bool inverse = true);
std::vector<double> default_eps_grid();  // 2^-3 .. 2^-20
std::vector<double> default_r_grid();    // 2^0 .. 2^10

enum class FitModel { log, power };

struct DivergenceReport {
  std::vector<double> eps_grid;
  /// Left-hand side per eps (the p-th power norm in a boundary scan).
  std::vector<Estimate> lhs;
  /// rhs_norms[k][J] = ||f_J^{eps_k}||_p; empty for boundary scans.
  std::vector<std::vector<Estimate>> rhs_norms;
  FitModel fit_model = FitModel::log;
  double slope = 0.0;
  double slope_std_error = 0.0;

  double gamma = 0.0;
  double p = 0.0;
  double predicted_slope = 0.0;
  /// "converged", "divergent-power" or "divergent-log".
  std::string classification;
  bool expected_divergent = false;
  /// Largest relative change of an RHS norm over the last two eps values.
  double rhs_last_change = 0.0;
  bool rhs_converged = true;
  bool pass = false;
};

/// Exponent of rho in the radial lower bound for the balanced left-hand side:
/// E(gamma) = n - 2 - gamma * B, divergent iff E(gamma) <= -1.
double radial_oracle(const BalancedType& t, double gamma);
/// The bracket B multiplying gamma in radial_oracle, exactly.
Rational radial_bracket(const BalancedType& t);
/// Solution of E(gamma) = -1, i.e. (n - 1) / B.
Rational critical_gamma(const BalancedType& t);

/// Predicted log-log slope of ||f^eps||_p^p against eps: 0 for gamma p < 1,
/// (1 - gamma p) times the largest singular dimension of the terms otherwise.
double predicted_norm_slope(const Symmetry& s, double gamma, double p);

DivergenceReport norm_boundary_scan(const Symmetry& s, double gamma, double p,
                                    std::span<const double> eps_grid, const QuadConfig& cfg);

/// Left-hand side of the balanced inequality over the full extremal family,
/// fitted against a + b log(1/eps). gamma defaults to 1 / p_tilde.
DivergenceReport sharpness_experiment(const BalancedType& t, double p, const QuadConfig& cfg,
                                      std::span<const double> eps_grid,
                                      std::optional<double> gamma = std::nullopt);

struct GrowthReport {
  std::vector<double> r_grid;
  std::vector<Estimate> lhs;
  double fitted_slope = 0.0;
  double slope_std_error = 0.0;
  /// First grid index used by the fit; earlier points are pre-asymptotic.
  int fit_from = 0;
  std::vector<double> local_slopes;
  Rational delta_target;
  double eta = 0.0;
  /// delta_target - eta * sum_J 1 / p_J, the exact growth rate of the test family.
  double eta_adjusted_target = 0.0;
  bool pass = false;
};

/// int_{B(0,R)} product(x) dx for each R in the grid, by uniform sampling of
/// the ball; slope fitted on the upper half of the grid.
GrowthReport growth_curve(int n, const std::function<double(std::span<const double>)>& product,
                          std::span<const double> r_grid, const QuadConfig& cfg);

/// Growth experiment with f_J(y) = min(1, |y|^{-s_J}), y = x restricted to the
/// complement of alpha_1^J, s_J = (n - |alpha_1^J| + eta) / p_J.
GrowthReport local_growth_experiment(std::span<const Symmetry> fams,
                                     std::span<const std::int64_t> exps, double eta,
                                     std::span<const double> r_grid, const QuadConfig& cfg);

std::string to_string(FitModel m);

}  // namespace spherebl
