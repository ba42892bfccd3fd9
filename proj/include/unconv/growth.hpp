#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unconv/errors.hpp"

namespace unconv {

// Shape classes for accumulated checkpoint data y_j observed at term counts
// N_j. "Bounded" means the data tracks a constant, the growth templates are
//   Logarithmic   y = a + b ln N   (b > 0)
//   Polynomial    y = a + c N^beta (c > 0, beta from a fixed grid)
// and "Other" is the honest fallback when nothing tracks the data closely.
enum class GrowthClass { Bounded, Logarithmic, Polynomial, Other };

std::string to_string(GrowthClass cls);

struct Checkpoint {
  std::int64_t n = 0;   // term count
  double value = 0.0;   // accumulated quantity after n terms

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Least-squares template selection. The constant template is the incumbent; a
// growth template displaces it only when it shrinks the residual tenfold and
// the incumbent was not already exact at double precision. The winner must
// track the data to 5% relative RMS residual, otherwise the class degrades to
// Other (the winning template's parameters are still reported). Fewer than 4
// checkpoints cannot support a two-parameter fit, so only the constant
// template competes.
struct GrowthFit {
  GrowthClass cls = GrowthClass::Other;
  double a = 0.0;     // offset of the winning template
  double b = 0.0;     // ln N coefficient, Logarithmic winner only
  double c = 0.0;     // N^beta coefficient, Polynomial winner only
  double beta = 0.0;  // exponent, Polynomial winner only
  double rms_residual = 0.0;       // sqrt(RSS / #checkpoints)
  double relative_residual = 0.0;  // rms_residual / mean |y|
};

// pre: at least one checkpoint, n strictly increasing, all n >= 1
GrowthFit fit_growth(const std::vector<Checkpoint>& points);

// Roughly `count` log-spaced term counts from min(10, n_max) to n_max,
// strictly increasing, always ending at n_max. The head below 10 is skipped
// so pre-asymptotic noise does not drown the fit.
// pre: n_max >= 1, count >= 2
std::vector<std::int64_t> log_checkpoints(std::int64_t n_max, int count = 20);

struct GrowthRecord {
  std::vector<Checkpoint> checkpoints;
  GrowthFit fit;
};

}  // namespace unconv
