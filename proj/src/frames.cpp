#include "unconv/frames.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "unconv/errors.hpp"
#include "unconv/rng.hpp"
#include "unconv/summation.hpp"

namespace unconv {

namespace {

// Shared validation plus the frame operator; every public entry point that
// touches a raw vector family goes through here.
struct OperatorDecomposition {
  Eigen::MatrixXd phi;  // d x M, columns are the frame vectors
  Eigen::MatrixXd s;    // frame operator, d x d
  double lower = 0.0;
  double upper = 0.0;
};

OperatorDecomposition decompose(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw NotAFrame("a frame needs at least one vector");
  const std::size_t d = vectors.front().size();
  if (d == 0) throw ShapeError("frame vectors must have dimension >= 1");
  for (const auto& v : vectors) {
    if (v.size() != d) throw ShapeError("frame vectors must share one dimension");
    for (const double x : v)
      if (!std::isfinite(x)) throw InvalidParameter("frame vectors must be finite");
  }
  if (vectors.size() < d)
    throw NotAFrame("fewer vectors than the dimension, the family cannot span");

  OperatorDecomposition out;
  out.phi.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t n = 0; n < vectors.size(); ++n)
    for (std::size_t i = 0; i < d; ++i)
      out.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = vectors[n][i];
  out.s = out.phi * out.phi.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.s);
  if (solver.info() != Eigen::Success)
    throw NotAFrame("eigensolve failed on the frame operator");
  out.lower = solver.eigenvalues()(0);
  out.upper = solver.eigenvalues()(static_cast<Eigen::Index>(d) - 1);
  if (!(out.lower > 1e-12 * std::max(out.upper, 1.0)))
    throw NotAFrame("the family does not span: frame operator is numerically rank-deficient");
  return out;
}

double l2_norm(const std::vector<double>& v) {
  CompensatedSum s;
  for (const double x : v) s.add(x * x);
  return std::sqrt(std::max(s.value(), 0.0));
}

// sum_n weight_n * table_n accumulated per coordinate.
template <class TableFn>
std::vector<double> weighted_synthesis(std::size_t d, std::size_t m, TableFn&& table,
                                       const std::vector<double>& weights) {
  std::vector<CompensatedSum> acc(d);
  for (std::size_t n = 0; n < m; ++n) {
    const double w = weights[n];
    if (w == 0.0) continue;
    const std::vector<double>& v = table(n);
    for (std::size_t i = 0; i < d; ++i) acc[i].add(w * v[i]);
  }
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = acc[i].value();
  return out;
}

}  // namespace

Frame Frame::from_vectors(std::vector<std::vector<double>> vectors, std::string label) {
  auto dec = decompose(vectors);
  const auto d = dec.s.rows();

  Eigen::LLT<Eigen::MatrixXd> llt(dec.s);
  if (llt.info() != Eigen::Success)
    throw NotAFrame("frame operator is not positive definite");
  const Eigen::MatrixXd duals = llt.solve(dec.phi);

  Frame frame;
  frame.d_ = static_cast<int>(d);
  frame.lower_ = dec.lower;
  frame.upper_ = dec.upper;
  frame.label_ = std::move(label);
  frame.vectors_ = std::move(vectors);
  frame.duals_.resize(frame.vectors_.size());
  for (std::size_t n = 0; n < frame.duals_.size(); ++n) {
    frame.duals_[n].resize(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i)
      frame.duals_[n][static_cast<std::size_t>(i)] = duals(i, static_cast<Eigen::Index>(n));
  }
  return frame;
}

Frame Frame::orthonormal(int d) {
  if (d < 1) throw InvalidParameter("Frame::orthonormal: dimension must be >= 1");
  std::vector<std::vector<double>> vectors(static_cast<std::size_t>(d),
                                           std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (std::size_t i = 0; i < vectors.size(); ++i) vectors[i][i] = 1.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "orthonormal(d=%d)", d);
  return from_vectors(std::move(vectors), buf);
}

Frame Frame::mercedes_benz() {
  const double s = std::sqrt(3.0) / 2.0;
  return from_vectors({{0.0, 1.0}, {-s, -0.5}, {s, -0.5}}, "mercedes-benz");
}

Frame Frame::rotated_union(double angle) {
  if (!std::isfinite(angle)) throw InvalidParameter("Frame::rotated_union: angle must be finite");
  const double c = std::cos(angle), s = std::sin(angle);
  char buf[48];
  std::snprintf(buf, sizeof buf, "rotated-union(angle=%g)", angle);
  return from_vectors({{1.0, 0.0}, {0.0, 1.0}, {c, s}, {-s, c}}, buf);
}

Frame Frame::random_unit(int d, std::int64_t m, std::uint64_t seed) {
  if (d < 1) throw InvalidParameter("Frame::random_unit: dimension must be >= 1");
  if (m < 1) throw InvalidParameter("Frame::random_unit: need at least one vector");
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> vectors(static_cast<std::size_t>(m));
  for (auto& v : vectors) {
    v.resize(static_cast<std::size_t>(d));
    double norm = 0.0;
    do {
      for (auto& x : v) x = rng.normal();
      norm = l2_norm(v);
    } while (norm < 1e-9);
    for (auto& x : v) x /= norm;
  }
  char buf[72];
  std::snprintf(buf, sizeof buf, "random-unit(d=%d, M=%lld, seed=%llu)", d,
                static_cast<long long>(m), static_cast<unsigned long long>(seed));
  return from_vectors(std::move(vectors), buf);
}

Frame Frame::haar(int levels) {
  if (levels < 1 || levels > 10)
    throw InvalidParameter("Frame::haar: levels must be between 1 and 10");
  const std::size_t n = std::size_t{1} << levels;
  std::vector<std::vector<double>> vectors;
  vectors.reserve(n);

  std::vector<double> scaling(n, 1.0 / std::sqrt(static_cast<double>(n)));
  vectors.push_back(std::move(scaling));
  for (int j = 0; j < levels; ++j) {
    const std::size_t block = n >> j;  // support length at scale j
    const double a = 1.0 / std::sqrt(static_cast<double>(block));
    for (std::size_t i = 0; i < (std::size_t{1} << j); ++i) {
      std::vector<double> w(n, 0.0);
      const std::size_t start = i * block;
      for (std::size_t t = 0; t < block / 2; ++t) {
        w[start + t] = a;
        w[start + block / 2 + t] = -a;
      }
      vectors.push_back(std::move(w));
    }
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "haar(levels=%d, d=%zu)", levels, n);
  return from_vectors(std::move(vectors), buf);
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_coordinate(std::string_view token, const std::filesystem::path& path) {
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw ParseError("frame file " + path.string() + ": bad coordinate '" + std::string(token) +
                     "'");
  return value;
}

}  // namespace

Frame Frame::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("frame file " + path.string() + ": cannot open");

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("frame file " + path.string() + ": missing 'd M' header");
  const auto header = split_tokens(line);
  std::int64_t d = 0, m = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), d).ec !=
          std::errc{} ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), m).ec != std::errc{})
    throw ParseError("frame file " + path.string() + ": header must be 'd M'");
  if (d < 1 || m < 1)
    throw ParseError("frame file " + path.string() + ": header must declare d >= 1, M >= 1");

  std::vector<std::vector<double>> vectors;
  vectors.reserve(static_cast<std::size_t>(m));
  while (static_cast<std::int64_t>(vectors.size()) < m) {
    if (!std::getline(in, line))
      throw ParseError("frame file " + path.string() + ": fewer vectors than declared");
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;  // blank lines are tolerated
    if (static_cast<std::int64_t>(tokens.size()) != d)
      throw ParseError("frame file " + path.string() + ": expected " + std::to_string(d) +
                       " coordinates per row");
    std::vector<double> v;
    v.reserve(tokens.size());
    for (const auto token : tokens) v.push_back(parse_coordinate(token, path));
    vectors.push_back(std::move(v));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "file(d=%lld, M=%lld)", static_cast<long long>(d),
                static_cast<long long>(m));
  return from_vectors(std::move(vectors), buf);
}

const std::vector<double>& Frame::vector(std::int64_t n) const {
  if (n < 1 || n > size()) throw InvalidParameter("Frame::vector: index out of range");
  return vectors_[static_cast<std::size_t>(n - 1)];
}

const std::vector<double>& Frame::dual_vector(std::int64_t n) const {
  if (n < 1 || n > size()) throw InvalidParameter("Frame::dual_vector: index out of range");
  return duals_[static_cast<std::size_t>(n - 1)];
}

std::pair<double, double> frame_bounds(const std::vector<std::vector<double>>& vectors) {
  const auto dec = decompose(vectors);
  return {dec.lower, dec.upper};
}

std::vector<double> analyze(const Frame& frame, const std::vector<double>& f) {
  if (f.size() != static_cast<std::size_t>(frame.dim()))
    throw ShapeError("analyze: signal dimension does not match the frame");
  std::vector<double> c(static_cast<std::size_t>(frame.size()));
  for (std::int64_t n = 1; n <= frame.size(); ++n) {
    const auto& v = frame.vector(n);
    CompensatedSum dot;
    for (std::size_t i = 0; i < f.size(); ++i) dot.add(f[i] * v[i]);
    c[static_cast<std::size_t>(n - 1)] = dot.value();
  }
  return c;
}

namespace {

std::vector<double> synthesize_table(const Frame& frame, const std::vector<double>& coefficients,
                                     bool dual) {
  if (coefficients.size() != static_cast<std::size_t>(frame.size()))
    throw ShapeError("synthesize: coefficient count does not match the frame");
  return weighted_synthesis(
      static_cast<std::size_t>(frame.dim()), coefficients.size(),
      [&](std::size_t n) -> const std::vector<double>& {
        const auto idx = static_cast<std::int64_t>(n) + 1;
        return dual ? frame.dual_vector(idx) : frame.vector(idx);
      },
      coefficients);
}

}  // namespace

std::vector<double> synthesize(const Frame& frame, const std::vector<double>& coefficients) {
  return synthesize_table(frame, coefficients, false);
}

std::vector<double> synthesize_dual(const Frame& frame, const std::vector<double>& coefficients) {
  return synthesize_table(frame, coefficients, true);
}

ThresholdRule ThresholdRule::hard(double tau) {
  if (!std::isfinite(tau) || tau < 0.0)
    throw InvalidRule("hard threshold needs a finite tau >= 0");
  ThresholdRule rule;
  rule.kind_ = Kind::Hard;
  rule.tau_ = tau;
  return rule;
}

ThresholdRule ThresholdRule::soft(double tau) {
  if (!std::isfinite(tau) || tau < 0.0)
    throw InvalidRule("soft threshold needs a finite tau >= 0");
  ThresholdRule rule;
  rule.kind_ = Kind::Soft;
  rule.tau_ = tau;
  return rule;
}

ThresholdRule ThresholdRule::mask(std::vector<double> lambdas) {
  for (const double x : lambdas)
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidRule("mask weights must lie in [0, 1]");
  ThresholdRule rule;
  rule.kind_ = Kind::Mask;
  rule.lambdas_ = std::move(lambdas);
  return rule;
}

std::vector<double> ThresholdRule::mask_for(const std::vector<double>& coefficients) const {
  switch (kind_) {
    case Kind::Hard: {
      std::vector<double> out(coefficients.size());
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::abs(coefficients[i]) > tau_ ? 1.0 : 0.0;
      return out;
    }
    case Kind::Soft: {
      std::vector<double> out(coefficients.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = std::abs(coefficients[i]);
        out[i] = a > tau_ ? 1.0 - tau_ / a : 0.0;
      }
      return out;
    }
    case Kind::Mask:
      if (lambdas_.size() != coefficients.size())
        throw InvalidRule("mask length does not match the coefficient count");
      return lambdas_;
  }
  return {};
}

std::string ThresholdRule::describe() const {
  char buf[48];
  switch (kind_) {
    case Kind::Hard:
      std::snprintf(buf, sizeof buf, "hard(tau=%g)", tau_);
      return buf;
    case Kind::Soft:
      std::snprintf(buf, sizeof buf, "soft(tau=%g)", tau_);
      return buf;
    case Kind::Mask:
      std::snprintf(buf, sizeof buf, "mask(%zu weights)", lambdas_.size());
      return buf;
  }
  return {};
}

Reconstruction reconstruct(const Frame& frame, const std::vector<double>& coefficients,
                           const ThresholdRule& rule,
                           const std::optional<std::vector<double>>& original) {
  if (coefficients.size() != static_cast<std::size_t>(frame.size()))
    throw ShapeError("reconstruct: coefficient count does not match the frame");
  if (original && original->size() != static_cast<std::size_t>(frame.dim()))
    throw ShapeError("reconstruct: original signal dimension does not match the frame");

  Reconstruction rec;
  rec.mask = rule.mask_for(coefficients);

  const auto m = coefficients.size();
  std::vector<double> kept(m), dropped(m);
  for (std::size_t n = 0; n < m; ++n) {
    kept[n] = rec.mask[n] * coefficients[n];
    dropped[n] = (1.0 - rec.mask[n]) * coefficients[n];
  }
  rec.reconstructed = synthesize_dual(frame, kept);

  if (original) {
    std::vector<double> diff(original->size());
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = (*original)[i] - rec.reconstructed[i];
    rec.error_norm = l2_norm(diff);
  } else {
    rec.error_norm = l2_norm(synthesize_dual(frame, dropped));
  }
  rec.computable_bound = l2_norm(synthesize(frame, dropped)) / frame.lower_bound();
  rec.loose_bound =
      std::sqrt(frame.upper_bound()) / frame.lower_bound() * l2_norm(dropped);
  return rec;
}

std::vector<Rational> reconstruct_exact(const Frame& frame,
                                        const std::vector<double>& coefficients,
                                        const std::vector<double>& mask) {
  if (coefficients.size() != static_cast<std::size_t>(frame.size()))
    throw ShapeError("reconstruct_exact: coefficient count does not match the frame");
  if (mask.size() != coefficients.size())
    throw InvalidRule("mask length does not match the coefficient count");
  for (const double x : mask)
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidRule("mask weights must lie in [0, 1]");

  std::vector<Rational> out(static_cast<std::size_t>(frame.dim()), Rational(0));
  for (std::size_t n = 0; n < coefficients.size(); ++n) {
    const Rational w = rational_from_double(mask[n]) * rational_from_double(coefficients[n]);
    const auto& dual = frame.dual_vector(static_cast<std::int64_t>(n) + 1);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += w * rational_from_double(dual[i]);
  }
  return out;
}

std::vector<HaarRefinement> haar_refinement_report(const std::function<double(double)>& signal,
                                                   int max_level) {
  if (max_level < 1 || max_level > 10)
    throw InvalidParameter("haar_refinement_report: max_level must be between 1 and 10");

  std::vector<HaarRefinement> report;
  report.reserve(static_cast<std::size_t>(max_level));
  for (int level = 1; level <= max_level; ++level) {
    const auto frame = Frame::haar(level);
    const auto n = static_cast<std::size_t>(frame.size());

    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
      samples[i] = signal((static_cast<double>(i) + 0.5) / static_cast<double>(n));
      if (!std::isfinite(samples[i]))
        throw InvalidParameter("haar_refinement_report: signal produced a non-finite sample");
    }

    const auto c = analyze(frame, samples);
    HaarRefinement row;
    row.level = level;
    row.points = frame.size();
    row.coefficient_norm = l2_norm(c);
    // Finest wavelet band: the last 2^(level-1) vectors of the coarse-to-fine
    // layout.
    CompensatedSum band;
    for (std::size_t i = n / 2; i < n; ++i) band.add(c[i] * c[i]);
    row.finest_band_norm = std::sqrt(std::max(band.value(), 0.0));
    const double total = row.coefficient_norm * row.coefficient_norm;
    row.finest_band_fraction =
        total > 0.0 ? row.finest_band_norm * row.finest_band_norm / total : 0.0;
    row.reconstruction_error =
        reconstruct(frame, c, ThresholdRule::mask(std::vector<double>(n, 1.0)), samples)
            .error_norm;
    report.push_back(row);
  }
  return report;
}

}  // namespace unconv
