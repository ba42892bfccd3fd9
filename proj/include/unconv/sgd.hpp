#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "unconv/rational.hpp"
#include "unconv/series.hpp"
#include "unconv/summation.hpp"

namespace unconv {

// Gradient-accumulation order sensitivity. The harness sums the displayed
// update Delta-w = -sum_i eta_i g_{sigma(i)} with gradients precomputed at a
// fixed point; it never simulates the sequential dynamics w_{t+1} = w_t -
// eta_t grad L(w_t). Order effects are therefore purely summation effects,
// measurable against an exact-rational reference.

// Per-step learning rates. Rates are doubles (hence exactly liftable to
// rationals); every rate must be positive.
class LrSchedule {
 public:
  enum class Kind { Constant, InverseSqrt, FromList };

  static LrSchedule constant(double eta);
  // eta_i = eta0 / sqrt(i)
  static LrSchedule inverse_sqrt(double eta0);
  static LrSchedule from_list(std::vector<double> etas);

  // Rate for 1-based step i. FromList throws InvalidParameter past its end.
  double at(std::int64_t i) const;
  Kind kind() const { return kind_; }
  // FromList only: number of listed rates.
  std::int64_t list_size() const { return static_cast<std::int64_t>(etas_.size()); }
  std::string describe() const;

 private:
  LrSchedule() = default;
  Kind kind_ = Kind::Constant;
  double eta_ = 0.0;
  std::vector<double> etas_;
};

// A finite list of per-sample gradients in R^d.
class GradientStream {
 public:
  enum class Source { Quadratic, IllConditioned, FromFile };

  // Seeded PSD least-squares model: A = G^T G / d + 0.1 I with normal G, b,
  // w0. Sample i contributes (A_i, b_i) = (rho_i A, rho_i b + r_i - rbar)
  // with seeded positive shares rho summing to 1 and centered noise r, so
  // g_i = A_i w0 - b_i and the g_i sum back to the full-batch gradient
  // A w0 - b up to roundoff.
  static GradientStream quadratic(int d, std::int64_t n, std::uint64_t seed);
  // Cancellation stress: coordinates are signed powers 10^u with u uniform
  // in [-5, 5], spanning ten orders of magnitude.
  static GradientStream ill_conditioned(int d, std::int64_t n, std::uint64_t seed);
  // Header line "d N", then N lines of d whitespace-separated coordinates.
  static GradientStream from_file(const std::filesystem::path& path);

  int dim() const { return d_; }
  std::int64_t size() const { return static_cast<std::int64_t>(gradients_.size()); }
  // 1-based sample index.
  const std::vector<double>& gradient(std::int64_t i) const;
  // A w0 - b for the quadratic source; recomputed sum of gradients otherwise.
  std::vector<double> full_batch_gradient() const;
  Source source() const { return source_; }
  std::uint64_t recorded_seed() const { return seed_; }
  std::string describe() const;

 private:
  GradientStream() = default;
  Source source_ = Source::FromFile;
  int d_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<double>> gradients_;
  std::vector<double> full_batch_;  // empty unless Quadratic
};

// Which index the schedule follows under a permuted order:
//   ByPosition  step i applies eta_i to g_{sigma(i)} (the displayed sum)
//   BySample    step i applies eta_{sigma(i)} to g_{sigma(i)} (the rate
//               travels with its sample; exposed for comparison only)
enum class SchedulePairing { ByPosition, BySample };

// Delta-w = -sum_{i=1..N} eta g_{sigma(i)} under the given strategy.
// pre: order complete to the stream length; FromList schedules must cover N
// errors: InvalidPermutation on stream/order length mismatch
std::vector<double> accumulate(const GradientStream& stream, const LrSchedule& sched,
                               const Permutation& order, Strategy strategy,
                               SchedulePairing pairing = SchedulePairing::ByPosition);

// Exact-rational accumulation (doubles lifted exactly); the reference the
// floating strategies are measured against. Invariant under every complete
// permutation because rational addition is commutative.
std::vector<Rational> accumulate_exact(const GradientStream& stream, const LrSchedule& sched,
                                       const Permutation& order,
                                       SchedulePairing pairing = SchedulePairing::ByPosition);

// Delta-w = -sum_i lambda_i eta_i g_{sigma(i)} for a declared-bounded
// multiplier sequence (adaptive rates, clipping masks).
// pre: lambdas covers the stream; |lambda_i| <= declared_bound, finite
std::vector<double> multiplier_variant(const GradientStream& stream, const LrSchedule& sched,
                                       const std::vector<double>& lambdas, double declared_bound,
                                       const Permutation& order, Strategy strategy);

struct StrategyDeviation {
  double max_pairwise_deviation = 0.0;  // l-inf over all permutation pairs
  double reference_deviation = 0.0;     // l-inf worst case against the exact reference
  double relative_to_naive = 0.0;       // max_pairwise / Naive's (0 when no Naive baseline)
};

struct SensitivityReport {
  std::map<std::string, StrategyDeviation> per_strategy;  // keyed by strategy name
  std::int64_t num_perms = 0;
  std::uint64_t seed = 0;
  // Deviation-ordering violations (Naive should dominate Pairwise and
  // Compensated); a flagged stream is reported for inspection, never thrown.
  std::vector<std::string> flagged;
};

// Runs accumulate under `num_perms` seeded permutations per strategy and
// reduces deviations by max.
// pre: num_perms >= 2
SensitivityReport permutation_sensitivity(const GradientStream& stream, const LrSchedule& sched,
                                          std::int64_t num_perms, std::uint64_t seed,
                                          const std::vector<Strategy>& strategies);

}  // namespace unconv
