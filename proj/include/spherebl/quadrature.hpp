#pragma once

// Seeded Monte Carlo on the unit sphere S^{n-1} with the normalised uniform
// measure, and on Euclidean balls.
//
// Reproducibility contract: (rng algorithm, seed, samples, shards). Shard s
// draws from CounterRng(derive_seed(seed, s)); shard results are merged in
// shard order, so the thread count never changes a value.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherebl/rng.hpp"
#include "spherebl/symmetry.hpp"

namespace spherebl {

/// Hardware concurrency, at least 1.
int available_parallelism();

/// Worker threads used to execute shards: SPHEREBL_THREADS if set, otherwise
/// available_parallelism().
int worker_threads();

struct QuadConfig {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int shards = available_parallelism();

  /// Throws InvalidType unless samples >= 100 and shards >= 1.
  void validate() const;
  /// Same sample count and shards, seed replaced by derive_seed(seed, stream).
  QuadConfig substream(std::uint64_t stream) const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;

  double relative_error() const { return value != 0.0 ? std_error / std::abs(value) : 0.0; }
};

/// A nonnegative function on S^{n-1}. `eval` must be pure; it is called
/// concurrently from worker threads.
struct Integrand {
  int n = 0;
  std::function<double(std::span<const double>)> eval;
  std::optional<Symmetry> symmetry_tag;
  std::string label;
};

void sample_sphere_point(CounterRng& rng, std::span<double> out);
/// Uniform point in the ball of the given radius in R^{out.size()}.
void sample_ball_point(CounterRng& rng, double radius, std::span<double> out);
double unit_ball_volume(int dim);

/// Materialises the sample stream of integrate_sphere, shard by shard.
std::vector<std::vector<double>> sample_sphere(int n, const QuadConfig& cfg);

// Generic engine.

enum class Domain { sphere, ball };

/// Writes `outputs` values for one sample point.
using SampleKernel = std::function<void(std::span<const double> point, std::span<double> out)>;

/// Mean and standard error of each kernel output under uniform sampling of
/// the domain (sphere of dimension `dim`, or ball of `radius` in R^dim).
/// Throws NonFiniteSample on NaN or infinite outputs.
std::vector<Estimate> estimate_means(int dim, Domain domain, double radius, int outputs,
                                     const SampleKernel& kernel, const QuadConfig& cfg);

// Operations.

Estimate integrate_sphere(const Integrand& f, const QuadConfig& cfg);

/// (int f^p dsigma)^{1/p} with a delta-method standard error.
Estimate lp_norm_sphere(const Integrand& f, double p, const QuadConfig& cfg);

/// int f^p dsigma itself.
Estimate lp_moment_sphere(const Integrand& f, double p, const QuadConfig& cfg);

/// int_{B_k} f(y) (1 - |y|^2)^{(n-2-k)/2} dy, k = |alpha|, for f depending on
/// x_alpha only. The ball point is embedded on the sphere (remaining mass on
/// the first coordinate outside alpha) before calling f.eval.
Estimate ball_reduced_integral(const Integrand& f, const MultiIndex& alpha,
                               const QuadConfig& cfg);

struct VerificationRecord {
  Estimate lhs;
  std::vector<Estimate> norms;
  std::vector<double> exponents;
  double rhs = 0.0;
  double rhs_std_error = 0.0;
  double margin = 0.0;
  double relative_joint_error = 0.0;
  bool pass = false;
  /// Some integrand changed under x_{alpha_1} -> -x_{alpha_1}.
  bool reflection_flagged = false;
};

/// Checks int prod f_J dsigma <= prod ||f_J||_{p_J}. Every f_J must carry
/// fams[J] as its symmetry tag and p_J >= the per-function exponent.
VerificationRecord holder_verify(std::span<const Symmetry> fams, std::span<const Integrand> fs,
                                 std::span<const double> ps, const QuadConfig& cfg);

/// Largest relative change of f under random planar rotations inside single
/// blocks of its symmetry tag, over `trials` random points.
double block_rotation_defect(const Integrand& f, int trials, std::uint64_t seed);

/// True if f(x) == f(x with the alpha_1 block negated) at `trials` random points.
bool reflection_even(const Integrand& f, int trials, std::uint64_t seed);

}  // namespace spherebl
