#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unconv/series.hpp"

namespace unconv {

enum class RearrangeStatus {
  Success,          // |running sum - target| <= tol at a completed sign block
  PrecheckFailed,   // no evidence of conditional convergence, nothing appended
  BudgetExceeded,   // trace so far, target not yet reached
};

std::string to_string(RearrangeStatus status);

// Cheap falsifiable screen run before greedy steering. The scan walks the
// first `scanned` terms (early exit once both mass conditions hold, but at
// least 1000 terms when available so the vanishing check sees a real tail).
struct PrecheckReport {
  bool scalar_shape = false;        // steering needs a scalar series
  std::int64_t scanned = 0;
  double positive_mass = 0.0;       // sum of positive terms over the scan
  double negative_mass = 0.0;       // -(sum of negative terms) over the scan
  double required_mass = 0.0;       // |target| + 2, each side must exceed this
  double tail_max_term = 0.0;       // max |x_n| over the second half of the scan
  bool positive_part_diverges = false;  // positive_mass > required_mass
  bool negative_part_diverges = false;  // negative_mass > required_mass
  bool terms_vanish = false;            // tail_max_term <= 0.01
  bool passed = false;
};

// Greedy steering record. partial_sums[k] is the compensated running sum of
// the prefix through position k+1; in exact-rational mode the same prefix
// resummed exactly reproduces each entry to float rounding.
struct RearrangementTrace {
  RearrangeStatus status = RearrangeStatus::PrecheckFailed;
  PrecheckReport precheck;
  std::vector<std::int64_t> permutation_prefix;  // pairwise distinct indices
  std::vector<double> partial_sums;
  std::vector<std::pair<std::int64_t, double>> targets_hit;  // (step, sum) inside tol
  std::int64_t budget_used = 0;
  double final_sum = 0.0;
};

// Steers the series toward `target` by appending unused positive-sign terms
// while the running sum is <= target and unused negative-sign terms while it
// is above, the classical constructive rearrangement. Zero terms are appended
// the moment the generator produces them. Success requires landing within
// `tol` at a completed block; `budget` caps appended terms.
// pre: tol > 0, budget >= 1, target finite
RearrangementTrace riemann_rearrange(const SeriesSpec& spec, double target, double tol,
                                     std::int64_t budget);

// A bijection of {1..fill_universe} placing each block on consecutive
// positions in the given block order: indices in no block are emitted, in
// increasing order, before the first block whose minimum exceeds them; any
// leftovers follow the last block. Partial-sum jumps across a block's
// positions then equal that block's sum.
// pre: blocks pairwise disjoint, indices in [1, fill_universe]
Permutation non_cauchy_block_permutation(const std::vector<std::vector<std::int64_t>>& blocks,
                                         std::int64_t fill_universe);

// Sorted union of the blocks: the index sequence of the induced subseries.
// pre: blocks pairwise disjoint, indices >= 1
std::vector<std::int64_t> subseries_from_blocks(
    const std::vector<std::vector<std::int64_t>>& blocks);

}  // namespace unconv
