#include "spherebl/extremal.hpp"

#include <algorithm>
#include <cmath>

#include "spherebl/enumerate.hpp"
#include "spherebl/error.hpp"
#include "spherebl/fit.hpp"

namespace spherebl {

namespace {

constexpr double kNormSlopeTolerance = 0.1;   // relative, absolute when the target is 0
constexpr double kRhsStableChange = 0.05;

struct BlockTerm {
  std::vector<int> inside;
  std::vector<int> outside;
  double product_power;  // exponent on max(|x_a|, eps)
  double sum_power;      // exponent on max(1 - |x_a|^2, eps)
};

double partial_norm2(std::span<const double> x, const std::vector<int>& idx) {
  double s = 0.0;
  for (int i : idx) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return s;
}

std::vector<int> others(int n, const std::vector<int>& idx) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(i);
  }
  return out;
}

bool geometric_decreasing(std::span<const double> grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0 && grid[k] < 0.5)) return false;
    if (k > 0 && !(grid[k] < grid[k - 1])) return false;
  }
  return true;
}

void check_eps_grid(std::span<const double> grid) {
  if (grid.size() < 3) throw InvalidType("eps grid needs at least three points");
  if (!geometric_decreasing(grid)) {
    throw InvalidType("eps grid must be strictly decreasing inside (0, 1/2)");
  }
}

}  // namespace

void ExtremalParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidType("gamma must be positive");
  if (!(trunc > 0.0 && trunc < 0.5)) throw InvalidType("truncation eps must lie in (0, 1/2)");
}

Integrand extremal_function(const Symmetry& s, const ExtremalParams& params) {
  params.validate();
  const int n = s.n();
  const double g = params.gamma;
  std::vector<BlockTerm> terms;
  for (std::size_t i = 1; i < s.alphas().size(); ++i) {
    const auto idx = s.alphas()[i].indices();
    const double len = static_cast<double>(idx.size());
    terms.push_back({idx, others(n, idx), -g * len, -0.5 * g * (n - len)});
  }
  for (int k : s.r_mask().indices()) {
    terms.push_back({{k}, others(n, {k}), -g, -0.5 * g * (n - 1)});
  }
  const double eps = params.trunc;
  auto eval = [terms = std::move(terms), eps](std::span<const double> x) {
    double product = 1.0;
    double sum = 0.0;
    for (const auto& t : terms) {
      const double r = std::sqrt(partial_norm2(x, t.inside));
      product *= std::pow(std::max(r, eps), t.product_power);
      // 1 - |x_a|^2 on the sphere, computed from the other coordinates.
      const double rest = partial_norm2(x, t.outside);
      sum += std::pow(std::max(rest, eps), t.sum_power);
    }
    // An empty term list (alpha_1 covering everything) leaves the constant 1.
    return product + sum;
  };
  return {n, std::move(eval), s,
          "extremal(gamma=" + std::to_string(g) + ", eps=" + std::to_string(eps) + ")"};
}

std::vector<double> dyadic_grid(int first, int last, bool inverse) {
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::ldexp(1.0, inverse ? -k : k));
  return out;
}

std::vector<double> default_eps_grid() { return dyadic_grid(3, 20, true); }
std::vector<double> default_r_grid() { return dyadic_grid(0, 10, false); }

Rational radial_bracket(const BalancedType& t) {
  const int n = t.n();
  auto parts = t.parts();
  Rational b = 0;
  for (std::size_t i = 0; i < t.lengths().size(); ++i) {
    // Functions with x_n inside block i. For i = 0 the weight is the number of
    // coordinates outside alpha_1, i.e. sum_{i>=2} l_i + R.
    parts[i] -= 1;
    b += Rational(BigInt(n - t.lengths()[i]) * multinomial(n - 1, parts));
    parts[i] += 1;
  }
  b += Rational(BigInt(t.r_tilde()) * (n - 1) * j_max(t), n);
  return b;
}

double radial_oracle(const BalancedType& t, double gamma) {
  return static_cast<double>(t.n() - 2) - gamma * radial_bracket(t).convert_to<double>();
}

Rational critical_gamma(const BalancedType& t) {
  return Rational(t.n() - 1) / radial_bracket(t);
}

double predicted_norm_slope(const Symmetry& s, double gamma, double p) {
  const double gp = gamma * p;
  if (gp <= 1.0) return 0.0;
  const int n = s.n();
  double dim = static_cast<double>(n - s.leading().weight());
  for (std::size_t i = 1; i < s.alphas().size(); ++i) {
    dim = std::max(dim, 0.5 * (n - s.alphas()[i].weight()));
  }
  if (!s.r_mask().empty()) dim = std::max(dim, 0.5 * (n - 1));
  return (1.0 - gp) * dim;
}

DivergenceReport norm_boundary_scan(const Symmetry& s, double gamma, double p,
                                    std::span<const double> eps_grid, const QuadConfig& cfg) {
  check_eps_grid(eps_grid);
  if (!(p >= 1.0)) throw InvalidType("Lebesgue exponent must be >= 1");
  DivergenceReport rep;
  rep.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  rep.gamma = gamma;
  rep.p = p;
  rep.predicted_slope = predicted_norm_slope(s, gamma, p);
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    const auto f = extremal_function(s, {gamma, eps_grid[k]});
    rep.lhs.push_back(lp_moment_sphere(f, p, cfg));
  }
  const double gp = gamma * p;
  const bool critical = std::abs(gp - 1.0) < 1e-9;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    if (critical) {
      x.push_back(std::log(1.0 / eps_grid[k]));
      y.push_back(rep.lhs[k].value);
    } else {
      x.push_back(std::log(eps_grid[k]));
      y.push_back(std::log(rep.lhs[k].value));
    }
  }
  const auto fit = fit_line(x, y);
  rep.slope = fit.slope;
  rep.slope_std_error = fit.slope_std_error;
  if (critical) {
    rep.fit_model = FitModel::log;
    rep.expected_divergent = true;
    const bool divergent = fit.slope > 3.0 * fit.slope_std_error;
    rep.classification = divergent ? "divergent-log" : "converged";
    rep.pass = divergent;
  } else {
    rep.fit_model = FitModel::power;
    rep.expected_divergent = gp > 1.0;
    rep.classification =
        std::abs(fit.slope) <= kNormSlopeTolerance ? "converged" : "divergent-power";
    const double tol = rep.predicted_slope == 0.0
                           ? kNormSlopeTolerance
                           : kNormSlopeTolerance * std::abs(rep.predicted_slope);
    const bool matches = std::abs(fit.slope - rep.predicted_slope) <=
                         tol + 3.0 * fit.slope_std_error;
    rep.pass = matches && ((rep.classification == "divergent-power") == rep.expected_divergent);
  }
  return rep;
}

DivergenceReport sharpness_experiment(const BalancedType& t, double p, const QuadConfig& cfg,
                                      std::span<const double> eps_grid,
                                      std::optional<double> gamma) {
  check_eps_grid(eps_grid);
  if (!(p >= 1.0)) throw InvalidType("Lebesgue exponent must be >= 1");
  const BigInt p_tilde = balanced_exponent(t);
  const double g = gamma.value_or(1.0 / p_tilde.convert_to<double>());
  ExtremalParams{g, eps_grid.front()}.validate();
  const auto fams = enumerate_symmetries(t);
  const std::size_t m = fams.size();

  DivergenceReport rep;
  rep.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  rep.gamma = g;
  rep.p = p;
  rep.fit_model = FitModel::log;
  const Rational g_crit = critical_gamma(t);
  rep.expected_divergent = g >= g_crit.convert_to<double>() * (1.0 - 1e-12);

  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    std::vector<Integrand> fs;
    fs.reserve(m);
    for (const auto& s : fams) fs.push_back(extremal_function(s, {g, eps_grid[k]}));
    auto est = estimate_means(
        t.n(), Domain::sphere, 1.0, static_cast<int>(m + 1),
        [&](std::span<const double> x, std::span<double> out) {
          double product = 1.0;
          for (std::size_t J = 0; J < m; ++J) {
            const double v = fs[J].eval(x);
            product *= v;
            out[J + 1] = std::pow(v, p);
          }
          out[0] = product;
        },
        cfg);
    rep.lhs.push_back(est[0]);
    std::vector<Estimate> norms;
    for (std::size_t J = 0; J < m; ++J) {
      Estimate e = est[J + 1];
      const double norm = std::pow(e.value, 1.0 / p);
      e.std_error = e.value > 0.0 ? norm / (p * e.value) * e.std_error : 0.0;
      e.value = norm;
      norms.push_back(e);
    }
    rep.rhs_norms.push_back(std::move(norms));
  }

  const auto& last = rep.rhs_norms.back();
  const auto& prev = rep.rhs_norms[rep.rhs_norms.size() - 2];
  for (std::size_t J = 0; J < m; ++J) {
    rep.rhs_last_change =
        std::max(rep.rhs_last_change, std::abs(last[J].value / prev[J].value - 1.0));
  }
  rep.rhs_converged = rep.rhs_last_change < kRhsStableChange;

  std::vector<double> x, y;
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    x.push_back(std::log(1.0 / eps_grid[k]));
    y.push_back(rep.lhs[k].value);
  }
  const auto fit = fit_line(x, y);
  rep.slope = fit.slope;
  rep.slope_std_error = fit.slope_std_error;
  const bool divergent = fit.slope > 3.0 * fit.slope_std_error;
  rep.classification = divergent ? "divergent-log" : "converged";
  const bool rhs_ok = g * p >= 1.0 || rep.rhs_converged;
  rep.pass = rhs_ok && divergent == rep.expected_divergent;
  return rep;
}

GrowthReport growth_curve(int n, const std::function<double(std::span<const double>)>& product,
                          std::span<const double> r_grid, const QuadConfig& cfg) {
  if (r_grid.size() < 3) throw InvalidType("R grid needs at least three points");
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    if (!(r_grid[k] > 0.0) || (k > 0 && !(r_grid[k] > r_grid[k - 1]))) {
      throw InvalidType("R grid must be positive and strictly increasing");
    }
  }
  GrowthReport rep;
  rep.r_grid.assign(r_grid.begin(), r_grid.end());
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    const double volume = unit_ball_volume(n) * std::pow(r_grid[k], n);
    auto est = estimate_means(
        n, Domain::ball, r_grid[k], 1,
        [&](std::span<const double> x, std::span<double> out) { out[0] = product(x); },
        cfg)[0];
    est.value *= volume;
    est.std_error *= volume;
    rep.lhs.push_back(est);
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    lx.push_back(std::log(r_grid[k]));
    ly.push_back(std::log(rep.lhs[k].value));
  }
  for (std::size_t k = 1; k < lx.size(); ++k) {
    rep.local_slopes.push_back((ly[k] - ly[k - 1]) / (lx[k] - lx[k - 1]));
  }
  rep.fit_from = static_cast<int>(r_grid.size() / 2);
  const auto from = static_cast<std::size_t>(rep.fit_from);
  const auto fit = fit_line(std::span(lx).subspan(from), std::span(ly).subspan(from));
  rep.fitted_slope = fit.slope;
  rep.slope_std_error = fit.slope_std_error;
  return rep;
}

GrowthReport local_growth_experiment(std::span<const Symmetry> fams,
                                     std::span<const std::int64_t> exps, double eta,
                                     std::span<const double> r_grid, const QuadConfig& cfg) {
  if (!(eta > 0.0)) throw InvalidType("eta must be positive");
  const Rational delta = local_delta(fams, exps);
  const int n = fams.front().n();
  struct Factor {
    std::vector<int> free;
    double s;
  };
  std::vector<Factor> factors;
  double inverse_sum = 0.0;
  for (std::size_t J = 0; J < fams.size(); ++J) {
    const auto free = complement(fams[J].leading()).indices();
    const double d = static_cast<double>(free.size());
    const double pj = static_cast<double>(exps[J]);
    factors.push_back({free, (d + eta) / pj});
    inverse_sum += 1.0 / pj;
  }
  auto product = [&factors](std::span<const double> x) {
    double v = 1.0;
    for (const auto& f : factors) {
      const double r2 = partial_norm2(x, f.free);
      // min(1, |y|^{-s}) = max(1, |y|^2)^{-s/2}
      v *= std::pow(std::max(r2, 1.0), -0.5 * f.s);
    }
    return v;
  };
  auto rep = growth_curve(n, product, r_grid, cfg);
  rep.delta_target = delta;
  rep.eta = eta;
  rep.eta_adjusted_target = delta.convert_to<double>() - eta * inverse_sum;
  rep.pass = std::isfinite(rep.fitted_slope) &&
             rep.fitted_slope <= delta.convert_to<double>() + 3.0 * rep.slope_std_error;
  return rep;
}

std::string to_string(FitModel m) { return m == FitModel::log ? "log" : "power"; }

}  // namespace spherebl
