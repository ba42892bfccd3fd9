#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "unconv/errors.hpp"

namespace unconv {

// How a finite family of floating-point terms is reduced to a sum.
//   Naive:         left-to-right accumulation.
//   Compensated:   Neumaier's running-error compensation.
//   Pairwise:      balanced-tree association.
//   ExactRational: exact rational arithmetic, rounded once at the end.
enum class Strategy { Naive, Compensated, Pairwise, ExactRational };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::Compensated: return "compensated";
    case Strategy::Pairwise: return "pairwise";
    case Strategy::ExactRational: return "exact-rational";
  }
  return "?";
}

// Neumaier's variant of compensated accumulation: unlike plain Kahan, the
// correction survives steps where the incoming term dominates the running
// sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Balanced-tree reduction of term(i) for i in [lo, hi); base blocks
// accumulate left to right.
template <class F>
double pairwise_sum(std::int64_t lo, std::int64_t hi, F&& term) {
  const std::int64_t n = hi - lo;
  if (n <= 0) return 0.0;
  if (n <= 32) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::int64_t mid = lo + n / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

// Scalar reduction of term(i), i in [lo, hi), under a floating-point
// strategy. ExactRational is handled by the callers that know how to
// produce exact terms.
template <class F>
double strategy_sum(Strategy strategy, std::int64_t lo, std::int64_t hi, F&& term) {
  switch (strategy) {
    case Strategy::Naive: {
      double s = 0.0;
      for (std::int64_t i = lo; i < hi; ++i) s += term(i);
      return s;
    }
    case Strategy::Compensated: {
      CompensatedSum s;
      for (std::int64_t i = lo; i < hi; ++i) s.add(term(i));
      return s.value();
    }
    case Strategy::Pairwise:
      return pairwise_sum(lo, hi, term);
    case Strategy::ExactRational:
      throw InvalidParameter("strategy_sum: exact accumulation needs exact terms");
  }
  return 0.0;
}

}  // namespace unconv
