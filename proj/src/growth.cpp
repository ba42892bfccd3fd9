#include "unconv/growth.hpp"

#include <algorithm>
#include <cmath>

namespace unconv {

std::string to_string(GrowthClass cls) {
  switch (cls) {
    case GrowthClass::Bounded: return "bounded";
    case GrowthClass::Logarithmic: return "logarithmic";
    case GrowthClass::Polynomial: return "polynomial";
    case GrowthClass::Other: return "other";
  }
  return "?";
}

std::vector<std::int64_t> log_checkpoints(std::int64_t n_max, int count) {
  if (n_max < 1) throw InvalidParameter("log_checkpoints: n_max must be positive");
  if (count < 2) throw InvalidParameter("log_checkpoints: need at least 2 checkpoints");
  const std::int64_t lo = std::min<std::int64_t>(10, n_max);
  if (n_max <= lo) return {n_max};

  std::vector<std::int64_t> out;
  const double ratio = static_cast<double>(n_max) / static_cast<double>(lo);
  for (int j = 0; j < count; ++j) {
    const double x = lo * std::pow(ratio, static_cast<double>(j) / (count - 1));
    const auto n = std::clamp<std::int64_t>(std::llround(x), lo, n_max);
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
  bool valid = false;
};

// Least squares for y = intercept + slope * g(N), centered for stability.
template <class G>
LineFit fit_line(const std::vector<Checkpoint>& pts, G&& g) {
  const auto n = static_cast<double>(pts.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : pts) {
    mean_x += g(p.n);
    mean_y += p.value;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = g(p.n) - mean_x;
    sxx += dx * dx;
    sxy += dx * (p.value - mean_y);
  }
  if (sxx == 0.0) return {};

  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = mean_y - f.slope * mean_x;
  for (const auto& p : pts) {
    const double r = p.value - (f.intercept + f.slope * g(p.n));
    f.rss += r * r;
  }
  f.valid = true;
  return f;
}

constexpr double kBetaGrid[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.75, 1.0, 1.25, 1.5, 2.0};

}  // namespace

GrowthFit fit_growth(const std::vector<Checkpoint>& points) {
  if (points.empty()) throw InvalidParameter("fit_growth: no checkpoints");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].n < 1) throw InvalidParameter("fit_growth: term counts start at 1");
    if (i > 0 && points[i].n <= points[i - 1].n)
      throw InvalidParameter("fit_growth: term counts must be strictly increasing");
  }

  const auto n = static_cast<double>(points.size());
  double scale = 0.0, mean_abs = 0.0, mean_y = 0.0;
  for (const auto& p : points) {
    scale = std::max(scale, std::abs(p.value));
    mean_abs += std::abs(p.value);
    mean_y += p.value;
  }
  mean_abs /= n;
  mean_y /= n;

  GrowthFit fit;
  if (scale == 0.0) {
    fit.cls = GrowthClass::Bounded;
    return fit;
  }

  double rss_const = 0.0;
  for (const auto& p : points) rss_const += (p.value - mean_y) * (p.value - mean_y);

  fit.cls = GrowthClass::Bounded;
  fit.a = mean_y;
  double winner_rss = rss_const;

  // A challenger displaces the incumbent only with a tenfold residual drop,
  // and never displaces a fit that is already exact at double precision.
  const double tiny = n * (1e-12 * scale) * (1e-12 * scale);
  const auto displaces = [&](double rss) { return winner_rss > tiny && rss <= winner_rss / 10.0; };

  if (points.size() >= 4) {
    const auto log_fit =
        fit_line(points, [](std::int64_t N) { return std::log(static_cast<double>(N)); });
    if (log_fit.valid && log_fit.slope > 0.0 && displaces(log_fit.rss)) {
      fit.cls = GrowthClass::Logarithmic;
      fit.a = log_fit.intercept;
      fit.b = log_fit.slope;
      winner_rss = log_fit.rss;
    }

    LineFit best_pow;
    double best_beta = 0.0;
    for (const double beta : kBetaGrid) {
      const auto f =
          fit_line(points, [beta](std::int64_t N) { return std::pow(static_cast<double>(N), beta); });
      if (f.valid && f.slope > 0.0 && (!best_pow.valid || f.rss < best_pow.rss)) {
        best_pow = f;
        best_beta = beta;
      }
    }
    if (best_pow.valid && displaces(best_pow.rss)) {
      fit.cls = GrowthClass::Polynomial;
      fit.a = best_pow.intercept;
      fit.b = 0.0;
      fit.c = best_pow.slope;
      fit.beta = best_beta;
      winner_rss = best_pow.rss;
    }
  }

  fit.rms_residual = std::sqrt(winner_rss / n);
  fit.relative_residual = mean_abs > 0.0 ? fit.rms_residual / mean_abs : 0.0;
  if (fit.relative_residual > 0.05) fit.cls = GrowthClass::Other;
  return fit;
}

}  // namespace unconv
