// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spherebl/enumerate.hpp"
#include "spherebl/error.hpp"
#include "spherebl/exponents.hpp"
#include "spherebl/extremal.hpp"
#include "spherebl/functions.hpp"
#include "spherebl/quadrature.hpp"
#include "spherebl/symmetry.hpp"

using namespace spherebl;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += "; over the time limit";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

BigInt binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

QuadConfig quad(std::int64_t samples, std::uint64_t seed) {
  QuadConfig q;
  q.samples = samples;
  q.seed = seed;
  return q;
}

// Every stochastic criterion is a pure function of its seed; criterion 9
// calls each one again and compares the recorded values.
struct HolderRun {
  std::vector<double> values;
  int passed = 0;
  int total = 0;
  double worst_margin = 1e300;
};

HolderRun holder_runs() {
  HolderRun out;
  const std::vector<BalancedType> types{BalancedType(3, {2}), BalancedType(4, {2, 2}),
                                        BalancedType(5, {3, 2})};
  for (std::size_t ti = 0; ti < types.size(); ++ti) {
    const auto fam = enumerate_symmetries(types[ti]);
    const double p = balanced_exponent(types[ti]).convert_to<double>();
    const std::vector<double> ps(fam.size(), p);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      const std::uint64_t seed = derive_seed(1000 + ti, trial);
      std::vector<Integrand> fs;
      for (std::size_t j = 0; j < fam.size(); ++j) {
        fs.push_back(random_symmetric_function(fam[j], derive_seed(seed, j)));
      }
      const auto rec = holder_verify(fam, fs, ps, quad(1'000'000, seed));
      ++out.total;
      if (rec.pass) ++out.passed;
      out.worst_margin = std::min(out.worst_margin, rec.margin);
      out.values.push_back(rec.lhs.value);
      out.values.push_back(rec.rhs);
    }
  }
  return out;
}

struct SharpnessRun {
  DivergenceReport main;
  DivergenceReport control;
};

SharpnessRun sharpness_runs() {
  const BalancedType t(3, {2});
  return {sharpness_experiment(t, 1.8, quad(200'000, 61), default_eps_grid(), 0.5),
          sharpness_experiment(t, 2.0, quad(200'000, 62), default_eps_grid(), 0.45)};
}

struct ScanRun {
  DivergenceReport below;
  DivergenceReport above;
};

ScanRun scan_runs() {
  const Symmetry s(3, {MultiIndex::from_bits({1, 1, 0})});
  return {norm_boundary_scan(s, 0.25, 2.0, default_eps_grid(), quad(200'000, 71)),
          norm_boundary_scan(s, 0.75, 2.0, default_eps_grid(), quad(200'000, 72))};
}

GrowthReport growth_run() {
  const auto fam = enumerate_symmetries(BalancedType(3, {2}));
  const auto exps = per_function_exponents(fam);
  return local_growth_experiment(fam, exps, 0.1, default_r_grid(), quad(1'000'000, 81));
}

std::vector<double> flatten(const DivergenceReport& r) {
  std::vector<double> v{r.slope, r.slope_std_error, r.rhs_last_change};
  for (const auto& e : r.lhs) v.push_back(e.value);
  for (const auto& row : r.rhs_norms) {
    for (const auto& e : row) v.push_back(e.value);
  }
  return v;
}

std::vector<double> flatten(const GrowthReport& r) {
  std::vector<double> v{r.fitted_slope, r.slope_std_error};
  for (const auto& e : r.lhs) v.push_back(e.value);
  return v;
}

}  // namespace

int main() {
  report(1, "exact identities for every balanced type with n <= 10", 1.0, [] {
    int types = 0, bad = 0;
    for (int n = 3; n <= 10; ++n) {
      for (const auto& t : all_balanced_types(n)) {
        ++types;
        const BigInt p = balanced_exponent(t);
        const bool a = p == j_max(t) - edge_membership_count(t);
        const bool b = coordinate_partition_sum(t) == Rational(j_max(t));
        const bool c = Rational(1) / critical_gamma(t) == Rational(p);
        if (!(a && b && c)) ++bad;
      }
    }
    return Outcome{bad == 0, std::to_string(types) + " types, " + std::to_string(bad) + " failures"};
  });

  report(2, "enumerated families match the closed forms for n <= 8", 30.0, [] {
    int types = 0, bad = 0;
    for (int n = 3; n <= 8; ++n) {
      for (const auto& t : all_balanced_types(n)) {
        ++types;
        const auto fam = enumerate_symmetries(t);
        const BigInt p = balanced_exponent(t);
        bool ok = BigInt(uniform_exponent(fam)) == p;
        for (auto e : per_function_exponents(fam)) ok = ok && BigInt(e) == p;
        const auto classes = canonical_classes(fam);
        ok = ok && BigInt(static_cast<std::int64_t>(classes.size())) == j_max(t) / overcount_factor(t);
        if (!ok) ++bad;
      }
    }
    return Outcome{bad == 0, std::to_string(types) + " types, " + std::to_string(bad) + " mismatches"};
  });

  report(3, "worked examples and binomial forms", 0, [] {
    const bool a = balanced_exponent(BalancedType(3, {2})) == 2;
    const bool b = balanced_exponent(BalancedType(4, {2, 2})) == 4;
    bool c = true;
    for (int n = 3; n <= 12; ++n) {
      for (int l = 2; l <= n - 1; ++l) {
        const int k = n - l;
        c = c && balanced_exponent(BalancedType(n, {l})) == binom(n, k) - binom(n - 2, k);
      }
    }
    for (int k = 2; k <= 6; ++k) {
      c = c && balanced_exponent(BalancedType(2 * k, {k, k})) == 2 * binom(2 * k - 2, k - 1);
    }
    return Outcome{a && b && c, std::string("p(3,(2))=2 ") + (a ? "ok" : "bad") +
                                    ", p(4,(2,2))=4 " + (b ? "ok" : "bad") +
                                    ", binomial forms " + (c ? "ok" : "bad")};
  });

  report(4, "clique closure agrees with the so(n) bracket closure", 120.0, [] {
    auto pairs = [](const EdgeSet& a) {
      std::set<oracle::Pair> out;
      for (const auto& e : a.edges()) out.insert({e.i, e.j});
      return out;
    };
    int checked = 0, bad = 0;
    const oracle::SoN so4(4);
    const auto& b4 = so4.basis();
    for (std::uint32_t m = 0; m < (1U << b4.size()); ++m) {
      EdgeSet a(4);
      std::set<oracle::Pair> gens;
      for (std::size_t k = 0; k < b4.size(); ++k) {
        if ((m >> k) & 1U) {
          a.insert(b4[k].first, b4[k].second);
          gens.insert(b4[k]);
        }
      }
      ++checked;
      if (pairs(lie_closure(a)) != so4.closure(gens)) ++bad;
    }
    const oracle::SoN so5(5);
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 10'000; ++trial) {
      EdgeSet a(5);
      std::set<oracle::Pair> gens;
      for (const auto& e : so5.basis()) {
        if (gen() & 1U) {
          a.insert(e.first, e.second);
          gens.insert(e);
        }
      }
      ++checked;
      if (pairs(lie_closure(a)) != so5.closure(gens)) ++bad;
    }
    return Outcome{bad == 0, std::to_string(checked) + " subsets, " + std::to_string(bad) + " mismatches"};
  });

  HolderRun holder;
  report(5, "holder inequality on random symmetric families at p = p_tilde", 300.0, [&] {
    holder = holder_runs();
    return Outcome{holder.passed == holder.total,
                   std::to_string(holder.passed) + "/" + std::to_string(holder.total) +
                       " passed, smallest margin " + fmt("%.4g", holder.worst_margin)};
  });

  SharpnessRun sharp;
  report(6, "sharpness: divergence at critical gamma, no divergence below it", 600.0, [&] {
    sharp = sharpness_runs();
    const auto& m = sharp.main;
    const auto& c = sharp.control;
    const bool rhs = m.rhs_last_change < 0.05;
    const bool diverges = m.slope > 3.0 * m.slope_std_error;
    const bool control_flat = std::abs(c.slope) <= 3.0 * c.slope_std_error;
    return Outcome{rhs && diverges && control_flat,
                   fmt("gamma=0.5 p=1.8 slope %.4g +- %.3g, rhs change %.3g; ", m.slope,
                       m.slope_std_error, m.rhs_last_change) +
                       fmt("control gamma=0.45 p=2 slope %.4g +- %.3g", c.slope, c.slope_std_error)};
  });

  ScanRun scans;
  report(7, "truncated norm slopes on both sides of gamma p = 1", 0, [&] {
    scans = scan_runs();
    auto within = [](const DivergenceReport& r, double target) {
      const double tol = target == 0.0 ? 0.1 : 0.1 * std::abs(target);
      return std::abs(r.slope - target) <= tol + 3.0 * r.slope_std_error;
    };
    const bool a = within(scans.below, 0.0);
    const bool b = within(scans.above, -0.5);
    return Outcome{a && b, fmt("gamma p=0.5 slope %.4g +- %.3g (target 0); ", scans.below.slope,
                               scans.below.slope_std_error) +
                               fmt("gamma p=1.5 slope %.4g +- %.3g (target -0.5)",
                                   scans.above.slope, scans.above.slope_std_error)};
  });

  GrowthReport growth;
  report(8, "local growth exponent for n=3, eta=0.1", 600.0, [&] {
    growth = growth_run();
    const bool ok = growth.fitted_slope >= 1.2 && growth.fitted_slope <= 1.6;
    return Outcome{ok, fmt("slope %.4g +- %.3g, delta 1.5, eta-adjusted %.3g", growth.fitted_slope,
                           growth.slope_std_error, growth.eta_adjusted_target)};
  });

  report(9, "stochastic criteria are reproducible from their seeds", 0, [&] {
    int same = 0, total = 0;
    auto tally = [&](bool eq) {
      ++total;
      if (eq) ++same;
    };
    tally(holder_runs().values == holder.values);
    const auto s2 = sharpness_runs();
    tally(flatten(s2.main) == flatten(sharp.main));
    tally(flatten(s2.control) == flatten(sharp.control));
    const auto n2 = scan_runs();
    tally(flatten(n2.below) == flatten(scans.below));
    tally(flatten(n2.above) == flatten(scans.above));
    tally(flatten(growth_run()) == flatten(growth));
    return Outcome{same == total,
                   std::to_string(same) + "/" + std::to_string(total) + " reruns bit-identical"};
  });

  return failures == 0 ? 0 : 1;
}
