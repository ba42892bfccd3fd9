#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "unconv/growth.hpp"
#include "unconv/series.hpp"

namespace unconv {

// Finite-truncation probes, one per convergence characterization, plus the
// norm-sum and squared-norm-sum checks, combined into an explicitly heuristic
// classifier. Verdicts describe evidence, never proof.

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

// F ranges over finite subsets of (N, N+K].
struct TailWindow {
  std::int64_t N = 0;  // exclusive lower bound, N >= 0
  std::int64_t K = 1;  // window width, K >= 1
};

// --- accumulation growth checks ---------------------------------------------

// Partial sums of term norms at log-spaced checkpoints with a fitted growth
// class. Bounded growth here is the absolute-convergence evidence.
// pre: N >= 1
GrowthRecord check_absolute(const SeriesSpec& spec, std::int64_t N);

// Same over squared norms: square-summability evidence. In Hilbert space an
// unconditionally convergent series must pass this, but passing alone proves
// nothing (the scalar harmonic series passes too).
// pre: N >= 1
GrowthRecord check_orlicz(const SeriesSpec& spec, std::int64_t N);

// --- bounded multipliers ------------------------------------------------------

class Multiplier {
 public:
  enum class Kind { Constant, ThresholdMask, AlternatingLog, RandomBounded };

  static Multiplier constant(double c);
  // lambda_n = 1 for n in keep, else 0
  static Multiplier threshold_mask(std::vector<std::int64_t> keep);
  // lambda_n = (-1)^n / ln(n+1): vanishing, yet able to break conditional limits
  static Multiplier alternating_log();
  // lambda_n uniform in [-C, C], reproducible from the seed
  static Multiplier random_bounded(double C, std::uint64_t seed);

  double at(std::int64_t n) const;  // pre: n >= 1
  double bound() const { return bound_; }
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  Multiplier() = default;
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  double bound_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<std::int64_t> keep_;  // sorted
};

// Checkpoint record of ||sum_{n<=N_j} lambda_n x_n|| with a growth fit.
// pre: N >= 1
GrowthRecord multiplier_stress(const SeriesSpec& spec, const Multiplier& multiplier,
                               std::int64_t N);

// --- tail-window suprema ------------------------------------------------------

enum class NetSupMethod {
  Exhaustive,            // all 2^K - 1 subsets, K <= 24
  GreedySignAlign,       // exact for scalar (max of one-sided masses) and
                         // disjoint-coordinate (everything adds in norm) shapes
  ClosedFormCoordinate,  // disjoint-coordinate only: sqrt of the tail energy
};

// sup over finite F in (N, N+K] of ||sum_{n in F} x_n||.
// errors: UnsupportedMethod on method/shape mismatch, InvalidParameter on a
// bad window or Exhaustive with K > 24
double net_cauchy_sup(const SeriesSpec& spec, TailWindow w, NetSupMethod method);

enum class SignStressMode { Exhaustive, Sampled };

struct SignStressResult {
  double statistic = 0.0;      // max over sign patterns of ||sum e_n x_n||
  double min_statistic = 0.0;  // min over the same patterns
  std::vector<int> argmax_signs;
  std::int64_t patterns_tried = 0;
};

// Max (and min) of ||sum_{n<=N} e_n x_n|| over sign patterns e in {-1,+1}^N.
// Exhaustive requires N <= 24; Sampled draws `count` seeded patterns.
SignStressResult sign_stress(const SeriesSpec& spec, std::int64_t N, SignStressMode mode,
                             std::int64_t count = 0, std::uint64_t seed = 0);

enum class WeakTailMethod {
  ClosedFormCoordinate,  // disjoint-coordinate only: Cauchy-Schwarz equality
  SphereSearch,          // any shape; projected ascent, reports a lower bound
};

struct WeakTailResult {
  double statistic = 0.0;  // sup over unit functionals of sum |<x_n, u>|
  bool lower_bound_estimate = false;
  int iterations = 0;
};

// sup over unit-norm u of sum_{n in (N, N+K]} |<x_n, u>|. SphereSearch runs
// `iterations` random restarts of alternating sign/direction ascent inside
// the window's finite-dimensional span; its result is a certified lower
// bound only.
WeakTailResult weak_uniform_tail(const SeriesSpec& spec, TailWindow w, WeakTailMethod method,
                                 int iterations = 200, std::uint64_t seed = 0);

// --- subseries sampling -------------------------------------------------------

struct SubseriesPattern {
  std::string name;        // "even", "odd", or "random-k"
  double oscillation = 0.0;  // checkpoint diameter of subseries partial sums
                             // over (N/2, N]
};

struct SubseriesSampleResult {
  double worst_oscillation = 0.0;
  std::vector<SubseriesPattern> patterns;
  std::uint64_t seed = 0;
};

// Partial sums along included-index subsequences: the two parity patterns
// plus `count` random inclusion patterns (each index kept with probability
// 1/2). A subseries whose tail still swings is direct evidence against
// unconditional convergence; pure random patterns can miss one-sided
// divergence (positive and negative halves cancel in distribution), which is
// why the parity probes are always included.
// pre: N >= 1, count >= 1
SubseriesSampleResult subseries_sample(const SeriesSpec& spec, std::int64_t N, int count,
                                       std::uint64_t seed);

// --- aggregation --------------------------------------------------------------

struct ConditionEvidence {
  double statistic = 0.0;
  std::string method;
  std::int64_t samples = 0;
  Verdict verdict = Verdict::Inconclusive;
};

struct DiagnosticReport {
  std::map<std::string, ConditionEvidence> per_condition;
  std::map<std::string, GrowthRecord> growth_fits;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  std::string series;
  std::string verdict;  // absolute | unconditional-evidence |
                        // conditional-evidence | inconclusive
};

inline constexpr std::uint64_t kDefaultDiagnosticSeed = 0xD1A60001ull;

// Runs every probe under one term budget and aggregates:
//   absolute               norm sums bounded, and the unconditional-evidence
//                          checks concur (the hierarchy is never violated)
//   unconditional-evidence identity sums settle, net-sup ladder decays,
//                          squared norms bounded
//   conditional-evidence   identity sums settle but signs, subseries, or the
//                          vanishing multiplier break
//   inconclusive           anything else
// pre: budget >= 100 (fewer terms cannot feed the checkpoint fits)
DiagnosticReport classify(const SeriesSpec& spec, std::int64_t budget,
                          std::uint64_t seed = kDefaultDiagnosticSeed);

}  // namespace unconv
