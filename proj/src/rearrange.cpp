#include "unconv/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace unconv {

std::string to_string(RearrangeStatus status) {
  switch (status) {
    case RearrangeStatus::Success: return "success";
    case RearrangeStatus::PrecheckFailed: return "not-conditionally-convergent-evidence";
    case RearrangeStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

namespace {

// Pulls scalar terms 1,2,3,... treating stream exhaustion as a permanent end.
class TermStream {
 public:
  explicit TermStream(const SeriesSpec& spec) : spec_(spec) {}

  bool next(std::int64_t& index, double& value) {
    if (done_) return false;
    try {
      value = spec_.term_scalar(next_);
    } catch (const ExhaustedStream&) {
      done_ = true;
      return false;
    }
    index = next_++;
    return true;
  }

  std::int64_t generated() const { return next_ - 1; }

 private:
  const SeriesSpec& spec_;
  std::int64_t next_ = 1;
  bool done_ = false;
};

PrecheckReport run_precheck(const SeriesSpec& spec, double target, std::int64_t budget) {
  PrecheckReport report;
  report.required_mass = std::abs(target) + 2.0;
  report.scalar_shape = spec.scalar_shape();
  if (!report.scalar_shape) return report;

  // Scan until both signed masses clear the bar, but at least 1000 terms so
  // the vanishing check sees a genuine tail, never past the budget. A second
  // pass over the scan's second half finds the largest tail magnitude; the
  // generators are pure, so re-walking is cheaper than storing.
  constexpr std::int64_t kMinScan = 1000;
  CompensatedSum pos, neg;
  TermStream stream(spec);
  std::int64_t index = 0;
  std::int64_t scanned = 0;
  double value = 0.0;
  while (scanned < budget) {
    if (!stream.next(index, value)) break;
    ++scanned;
    if (value > 0.0) pos.add(value);
    if (value < 0.0) neg.add(-value);
    if (scanned >= kMinScan && pos.value() > report.required_mass &&
        neg.value() > report.required_mass)
      break;
  }

  report.scanned = scanned;
  report.positive_mass = pos.value();
  report.negative_mass = neg.value();
  report.positive_part_diverges = report.positive_mass > report.required_mass;
  report.negative_part_diverges = report.negative_mass > report.required_mass;
  if (scanned > 0) {
    for (std::int64_t n = scanned / 2 + 1; n <= scanned; ++n)
      report.tail_max_term = std::max(report.tail_max_term, std::abs(spec.term_scalar(n)));
    report.terms_vanish = report.tail_max_term <= 0.01;
  }
  report.passed =
      report.positive_part_diverges && report.negative_part_diverges && report.terms_vanish;
  return report;
}

}  // namespace

RearrangementTrace riemann_rearrange(const SeriesSpec& spec, double target, double tol,
                                     std::int64_t budget) {
  if (!std::isfinite(target)) throw InvalidParameter("riemann_rearrange: target must be finite");
  if (!(tol > 0.0)) throw InvalidParameter("riemann_rearrange: tol must be positive");
  if (budget < 1) throw InvalidParameter("riemann_rearrange: budget must be positive");

  RearrangementTrace trace;
  trace.precheck = run_precheck(spec, target, budget);
  if (!trace.precheck.passed) {
    trace.status = RearrangeStatus::PrecheckFailed;
    return trace;
  }

  trace.permutation_prefix.reserve(static_cast<std::size_t>(std::min<std::int64_t>(budget, 1 << 20)));
  trace.partial_sums.reserve(trace.permutation_prefix.capacity());

  // Unused generated terms, queued by sign. Zero terms never queue: they are
  // appended the moment the generator hands them out.
  std::deque<std::pair<std::int64_t, double>> positives, negatives;
  TermStream stream(spec);
  CompensatedSum sum;

  const auto append = [&](std::int64_t index, double value) {
    sum.add(value);
    trace.permutation_prefix.push_back(index);
    trace.partial_sums.push_back(sum.value());
  };

  // Generation is capped so a stream whose needed sign dries up cannot spin
  // forever; anything this cap forecloses was unreachable within budget anyway.
  const std::int64_t generation_cap =
      std::max(budget > (1LL << 61) ? budget : 4 * budget, 2 * trace.precheck.scanned);

  const auto take = [&](bool positive, std::int64_t& index, double& value) -> bool {
    auto& queue = positive ? positives : negatives;
    while (queue.empty()) {
      if (stream.generated() >= generation_cap) return false;
      std::int64_t i = 0;
      double v = 0.0;
      if (!stream.next(i, v)) return false;
      if (v == 0.0) {
        if (static_cast<std::int64_t>(trace.permutation_prefix.size()) < budget) append(i, v);
        continue;
      }
      (v > 0.0 ? positives : negatives).emplace_back(i, v);
    }
    std::tie(index, value) = queue.front();
    queue.pop_front();
    return true;
  };

  bool current_positive = sum.value() <= target;
  bool ran_dry = false;
  while (true) {
    if (static_cast<std::int64_t>(trace.permutation_prefix.size()) >= budget) break;
    const bool side = sum.value() <= target;
    if (side != current_positive && !trace.permutation_prefix.empty()) {
      // A sign block just completed.
      if (std::abs(sum.value() - target) <= tol) {
        trace.targets_hit.emplace_back(
            static_cast<std::int64_t>(trace.permutation_prefix.size()), sum.value());
        break;
      }
      current_positive = side;
    }
    std::int64_t index = 0;
    double value = 0.0;
    if (!take(side, index, value)) {
      ran_dry = true;
      break;
    }
    append(index, value);
  }

  trace.budget_used = static_cast<std::int64_t>(trace.permutation_prefix.size());
  trace.final_sum = sum.value();
  trace.status = trace.targets_hit.empty() || ran_dry ? RearrangeStatus::BudgetExceeded
                                                      : RearrangeStatus::Success;
  return trace;
}

namespace {

void validate_blocks(const std::vector<std::vector<std::int64_t>>& blocks,
                     std::int64_t max_index) {
  std::set<std::int64_t> seen;
  for (const auto& block : blocks) {
    for (const std::int64_t n : block) {
      if (n < 1) throw InvalidBlocks("block indices start at 1");
      if (max_index > 0 && n > max_index)
        throw InvalidBlocks("block index " + std::to_string(n) + " beyond universe " +
                            std::to_string(max_index));
      if (!seen.insert(n).second)
        throw InvalidBlocks("blocks overlap at index " + std::to_string(n));
    }
  }
}

}  // namespace

Permutation non_cauchy_block_permutation(const std::vector<std::vector<std::int64_t>>& blocks,
                                         std::int64_t fill_universe) {
  if (fill_universe < 1) throw InvalidBlocks("fill_universe must be positive");
  validate_blocks(blocks, fill_universe);

  std::vector<bool> in_block(static_cast<std::size_t>(fill_universe) + 1, false);
  for (const auto& block : blocks)
    for (const std::int64_t n : block) in_block[static_cast<std::size_t>(n)] = true;

  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(fill_universe));
  std::int64_t filler = 1;  // next non-block index not yet emitted
  const auto emit_gap_below = [&](std::int64_t bound) {
    for (; filler < bound; ++filler)
      if (!in_block[static_cast<std::size_t>(filler)]) out.push_back(filler);
  };

  for (const auto& block : blocks) {
    auto sorted = block;
    std::sort(sorted.begin(), sorted.end());
    emit_gap_below(sorted.front());
    out.insert(out.end(), sorted.begin(), sorted.end());
  }
  emit_gap_below(fill_universe + 1);
  return Permutation::from_prefix(std::move(out));
}

std::vector<std::int64_t> subseries_from_blocks(
    const std::vector<std::vector<std::int64_t>>& blocks) {
  validate_blocks(blocks, 0);
  std::vector<std::int64_t> out;
  for (const auto& block : blocks) out.insert(out.end(), block.begin(), block.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace unconv
