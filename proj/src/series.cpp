#include "unconv/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace unconv {

// --- sign sources -----------------------------------------------------------

SignSpec SignSpec::seeded(std::uint64_t seed) {
  SignSpec s;
  s.kind = Kind::Seeded;
  s.seed = seed;
  return s;
}

SignSpec SignSpec::explicit_list(std::vector<int> signs) {
  for (int v : signs)
    if (v != 1 && v != -1) throw InvalidParameter("SignSpec: explicit signs must be +1 or -1");
  SignSpec s;
  s.kind = Kind::Explicit;
  s.list = std::move(signs);
  return s;
}

int SignSpec::at(std::int64_t n) const {
  if (n < 1) throw InvalidParameter("SignSpec: term indices start at 1");
  switch (kind) {
    case Kind::Alternating:
      return (n % 2 == 0) ? 1 : -1;
    case Kind::Seeded:
      return hashed_sign(seed, n);
    case Kind::Explicit:
      if (n > static_cast<std::int64_t>(list.size()))
        throw ExhaustedStream("SignSpec: sign list has no entry " + std::to_string(n));
      return list[static_cast<std::size_t>(n - 1)];
  }
  return 1;
}

// --- file-backed terms ------------------------------------------------------

struct SeriesSpec::FileData {
  std::vector<std::vector<VecF::Entry>> terms;        // canonical per line
  std::vector<std::vector<VecQ::Entry>> exact_terms;  // filled in exact mode
  std::vector<double> norms_squared;
  bool scalar = false;
  bool disjoint = false;
  std::string origin;
};

namespace {

double parse_double(std::string_view text, const std::string& where) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(where + ": bad numeric literal '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_index(std::string_view text, const std::string& where) {
  std::int64_t value = 0;
  const auto* begin = text.data();
  const auto* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(where + ": bad index '" + std::string(text) + "'");
  return value;
}

std::shared_ptr<const SeriesSpec::FileData> load_series_file(
    const std::filesystem::path& path, ScalarMode mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open series file " + path.string());

  auto data = std::make_shared<SeriesSpec::FileData>();
  data->origin = path.string();

  std::string line;
  std::int64_t line_no = 0;
  std::int64_t expected = 1;
  bool scalar = true;
  bool disjoint = true;
  std::unordered_set<std::int64_t> used_coords;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;  // blank line
    const std::string where = path.string() + ":" + std::to_string(line_no);

    if (parse_index(token, where) != expected)
      throw ParseError(where + ": term indices must run 1..L in order");
    ++expected;

    std::vector<VecF::Entry> entries;
    std::vector<VecQ::Entry> exact_entries;
    std::unordered_set<std::int64_t> line_coords;
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
        throw ParseError(where + ": expected coordinate:value, got '" + token + "'");
      const std::int64_t coord = parse_index(token.substr(0, colon), where);
      if (coord < 1) throw ParseError(where + ": coordinates start at 1");
      if (!line_coords.insert(coord).second)
        throw ParseError(where + ": duplicate coordinate in term");
      const std::string literal = token.substr(colon + 1);
      const double value = parse_double(literal, where);
      if (value != 0.0) entries.emplace_back(coord, value);
      if (mode == ScalarMode::ExactRational) {
        Rational exact = rational_from_decimal(literal);
        if (exact != 0) exact_entries.emplace_back(coord, std::move(exact));
      }
    }

    std::sort(entries.begin(), entries.end());
    std::sort(exact_entries.begin(), exact_entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double norm2 = 0.0;
    for (const auto& [coord, value] : entries) {
      norm2 += value * value;
      if (coord != 1) scalar = false;
      if (!used_coords.insert(coord).second) disjoint = false;
    }
    if (entries.size() > 1) disjoint = false;

    data->norms_squared.push_back(norm2);
    data->terms.push_back(std::move(entries));
    if (mode == ScalarMode::ExactRational) data->exact_terms.push_back(std::move(exact_entries));
  }

  data->scalar = scalar;
  data->disjoint = disjoint && !scalar;
  return data;
}

}  // namespace

// --- series spec ------------------------------------------------------------

SeriesSpec SeriesSpec::alternating_harmonic(ScalarMode mode) {
  SeriesSpec s;
  s.family_ = Family::AlternatingHarmonic;
  s.mode_ = mode;
  return s;
}

SeriesSpec SeriesSpec::harmonic(ScalarMode mode) {
  SeriesSpec s;
  s.family_ = Family::Harmonic;
  s.mode_ = mode;
  return s;
}

namespace {

void validate_alpha(double alpha, ScalarMode mode) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw InvalidParameter("coordinate families need alpha > 0");
  if (mode == ScalarMode::ExactRational && std::floor(alpha) != alpha)
    throw InvalidParameter("exact mode needs an integer alpha (n^-alpha must be rational)");
}

}  // namespace

SeriesSpec SeriesSpec::coordinate_decay(double alpha, ScalarMode mode) {
  validate_alpha(alpha, mode);
  SeriesSpec s;
  s.family_ = Family::CoordinateDecay;
  s.mode_ = mode;
  s.alpha_ = alpha;
  return s;
}

SeriesSpec SeriesSpec::signed_coordinate(double alpha, SignSpec signs, ScalarMode mode) {
  validate_alpha(alpha, mode);
  SeriesSpec s;
  s.family_ = Family::SignedCoordinate;
  s.mode_ = mode;
  s.alpha_ = alpha;
  s.signs_ = std::move(signs);
  s.has_signs_ = true;
  return s;
}

SeriesSpec SeriesSpec::from_file(const std::filesystem::path& path, ScalarMode mode) {
  SeriesSpec s;
  s.family_ = Family::FromFile;
  s.mode_ = mode;
  s.file_ = load_series_file(path, mode);
  return s;
}

const SignSpec* SeriesSpec::signs() const { return has_signs_ ? &signs_ : nullptr; }

std::uint64_t SeriesSpec::recorded_seed() const {
  return (has_signs_ && signs_.kind == SignSpec::Kind::Seeded) ? signs_.seed : 0;
}

std::optional<std::int64_t> SeriesSpec::length() const {
  if (family_ == Family::FromFile) return static_cast<std::int64_t>(file_->terms.size());
  return std::nullopt;
}

bool SeriesSpec::scalar_shape() const {
  switch (family_) {
    case Family::AlternatingHarmonic:
    case Family::Harmonic:
      return true;
    case Family::CoordinateDecay:
    case Family::SignedCoordinate:
      return false;
    case Family::FromFile:
      return file_->scalar;
  }
  return false;
}

bool SeriesSpec::disjoint_coordinate_shape() const {
  switch (family_) {
    case Family::CoordinateDecay:
    case Family::SignedCoordinate:
      return true;
    case Family::FromFile:
      return file_->disjoint;
    default:
      return false;
  }
}

namespace {

void check_term_index(std::int64_t n) {
  if (n < 1) throw InvalidParameter("term indices start at 1");
}

}  // namespace

double SeriesSpec::term_scalar(std::int64_t n) const {
  check_term_index(n);
  switch (family_) {
    case Family::AlternatingHarmonic:
      return (n % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(n);
    case Family::Harmonic:
      return 1.0 / static_cast<double>(n);
    case Family::FromFile: {
      if (!file_->scalar) throw InvalidParameter("term_scalar: series is not scalar-shaped");
      if (n > static_cast<std::int64_t>(file_->terms.size()))
        throw ExhaustedStream("series file " + file_->origin + " has no term " + std::to_string(n));
      const auto& entries = file_->terms[static_cast<std::size_t>(n - 1)];
      return entries.empty() ? 0.0 : entries.front().second;
    }
    default:
      throw InvalidParameter("term_scalar: series is not scalar-shaped");
  }
}

double SeriesSpec::coordinate_value(std::int64_t n) const {
  check_term_index(n);
  switch (family_) {
    case Family::CoordinateDecay:
      return std::pow(static_cast<double>(n), -alpha_);
    case Family::SignedCoordinate:
      return signs_.at(n) * std::pow(static_cast<double>(n), -alpha_);
    case Family::FromFile: {
      if (!file_->disjoint)
        throw InvalidParameter("coordinate_value: series is not coordinate-shaped");
      if (n > static_cast<std::int64_t>(file_->terms.size()))
        throw ExhaustedStream("series file " + file_->origin + " has no term " + std::to_string(n));
      const auto& entries = file_->terms[static_cast<std::size_t>(n - 1)];
      return entries.empty() ? 0.0 : entries.front().second;
    }
    default:
      throw InvalidParameter("coordinate_value: series is not coordinate-shaped");
  }
}

double SeriesSpec::term_norm_squared(std::int64_t n) const {
  check_term_index(n);
  switch (family_) {
    case Family::AlternatingHarmonic:
    case Family::Harmonic: {
      const double v = 1.0 / static_cast<double>(n);
      return v * v;
    }
    case Family::CoordinateDecay:
    case Family::SignedCoordinate: {
      const double v = std::pow(static_cast<double>(n), -alpha_);
      return v * v;
    }
    case Family::FromFile:
      if (n > static_cast<std::int64_t>(file_->terms.size()))
        throw ExhaustedStream("series file " + file_->origin + " has no term " + std::to_string(n));
      return file_->norms_squared[static_cast<std::size_t>(n - 1)];
  }
  return 0.0;
}

double SeriesSpec::term_norm(std::int64_t n) const { return std::sqrt(term_norm_squared(n)); }

Vec<double> SeriesSpec::term(std::int64_t n) const {
  check_term_index(n);
  switch (family_) {
    case Family::AlternatingHarmonic:
    case Family::Harmonic:
      return VecF::scalar(term_scalar(n));
    case Family::CoordinateDecay:
    case Family::SignedCoordinate:
      return VecF::unit(n, coordinate_value(n));
    case Family::FromFile: {
      if (n > static_cast<std::int64_t>(file_->terms.size()))
        throw ExhaustedStream("series file " + file_->origin + " has no term " + std::to_string(n));
      if (file_->scalar) return VecF::scalar(term_scalar(n));
      return VecF::sparse(file_->terms[static_cast<std::size_t>(n - 1)]);
    }
  }
  return {};
}

Vec<Rational> SeriesSpec::term_exact(std::int64_t n) const {
  check_term_index(n);
  if (mode_ != ScalarMode::ExactRational)
    throw InvalidParameter("term_exact: series is not in exact-rational mode");
  switch (family_) {
    case Family::AlternatingHarmonic:
      return VecQ::scalar(Rational(n % 2 == 0 ? 1 : -1, n));
    case Family::Harmonic:
      return VecQ::scalar(Rational(1, n));
    case Family::CoordinateDecay:
    case Family::SignedCoordinate: {
      BigInt den = 1;
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(alpha_); ++k) den *= n;
      const int sign = family_ == Family::SignedCoordinate ? signs_.at(n) : 1;
      return VecQ::unit(n, Rational(BigInt(sign), den));
    }
    case Family::FromFile: {
      if (n > static_cast<std::int64_t>(file_->exact_terms.size()))
        throw ExhaustedStream("series file " + file_->origin + " has no term " + std::to_string(n));
      const auto& entries = file_->exact_terms[static_cast<std::size_t>(n - 1)];
      if (file_->scalar)
        return VecQ::scalar(entries.empty() ? Rational(0) : entries.front().second);
      return VecQ::sparse(entries);
    }
  }
  return {};
}

std::string SeriesSpec::describe() const {
  switch (family_) {
    case Family::AlternatingHarmonic:
      return "alternating-harmonic";
    case Family::Harmonic:
      return "harmonic";
    case Family::CoordinateDecay:
      return "coordinate-decay(alpha=" + std::to_string(alpha_) + ")";
    case Family::SignedCoordinate: {
      std::string s = "signed-coordinate(alpha=" + std::to_string(alpha_) + ",signs=";
      switch (signs_.kind) {
        case SignSpec::Kind::Alternating: s += "alternating"; break;
        case SignSpec::Kind::Seeded: s += "seeded:" + std::to_string(signs_.seed); break;
        case SignSpec::Kind::Explicit: s += "explicit"; break;
      }
      return s + ")";
    }
    case Family::FromFile:
      return "file(" + file_->origin + ")";
  }
  return "?";
}

// --- permutations -----------------------------------------------------------

Permutation Permutation::from_prefix(std::vector<std::int64_t> prefix) {
  std::unordered_set<std::int64_t> seen;
  seen.reserve(prefix.size());
  for (const std::int64_t v : prefix) {
    if (v < 1) throw InvalidPermutation("permutation entries start at 1");
    if (!seen.insert(v).second)
      throw InvalidPermutation("duplicate permutation entry " + std::to_string(v));
  }
  Permutation p;
  p.identity_ = false;
  p.prefix_ = std::move(prefix);
  return p;
}

std::int64_t Permutation::at(std::int64_t position) const {
  if (position < 1) throw InvalidPermutation("positions start at 1");
  if (identity_) return position;
  if (position > prefix_size())
    throw InvalidPermutation("position " + std::to_string(position) + " beyond prefix");
  return prefix_[static_cast<std::size_t>(position - 1)];
}

bool Permutation::complete_to(std::int64_t n) const {
  if (n < 0) return false;
  if (identity_) return true;
  if (prefix_size() < n) return false;
  for (std::int64_t k = 0; k < n; ++k)
    if (prefix_[static_cast<std::size_t>(k)] > n) return false;
  return true;
}

// --- sums -------------------------------------------------------------------

namespace {

void validate_order(const Permutation& order, std::int64_t n_terms) {
  if (n_terms < 0) throw InvalidParameter("partial_sum: negative term count");
  if (!order.is_identity() && order.prefix_size() < n_terms)
    throw InvalidPermutation("ordering covers " + std::to_string(order.prefix_size()) +
                             " positions, " + std::to_string(n_terms) + " requested");
}

// Per-coordinate accumulation in visit order.
template <class Accumulate>
void accumulate_vector_terms(const SeriesSpec& spec, const Permutation& order,
                             std::int64_t n_terms, Accumulate&& accumulate) {
  for (std::int64_t k = 1; k <= n_terms; ++k) {
    const std::int64_t idx = order.is_identity() ? k : order.at(k);
    for (const auto& [coord, value] : spec.term(idx).as_entries()) accumulate(coord, value);
  }
}

VecF pairwise_vector_sum(const SeriesSpec& spec, const Permutation& order, std::int64_t lo,
                         std::int64_t hi) {
  const std::int64_t n = hi - lo;
  if (n <= 0) return {};
  if (n <= 8) {
    VecF acc;
    for (std::int64_t k = lo; k < hi; ++k)
      acc = acc + spec.term(order.is_identity() ? k : order.at(k));
    return acc;
  }
  const std::int64_t mid = lo + n / 2;
  return pairwise_vector_sum(spec, order, lo, mid) + pairwise_vector_sum(spec, order, mid, hi);
}

VecF entries_from_map(const std::map<std::int64_t, double>& acc) {
  std::vector<VecF::Entry> entries;
  entries.reserve(acc.size());
  for (const auto& [coord, value] : acc)
    if (value != 0.0) entries.emplace_back(coord, value);
  return VecF::sparse(std::move(entries));
}

}  // namespace

Vec<double> partial_sum(const SeriesSpec& spec, const Permutation& order, std::int64_t n_terms,
                        Strategy strategy) {
  validate_order(order, n_terms);

  if (strategy == Strategy::ExactRational)
    return to_float(partial_sum_exact(spec, order, n_terms));

  if (spec.scalar_shape()) {
    const auto term = [&](std::int64_t k) {
      return spec.term_scalar(order.is_identity() ? k : order.at(k));
    };
    return VecF::scalar(strategy_sum(strategy, 1, n_terms + 1, term));
  }

  switch (strategy) {
    case Strategy::Naive: {
      std::map<std::int64_t, double> acc;
      accumulate_vector_terms(spec, order, n_terms,
                              [&](std::int64_t c, double v) { acc[c] += v; });
      return entries_from_map(acc);
    }
    case Strategy::Compensated: {
      std::map<std::int64_t, CompensatedSum> acc;
      accumulate_vector_terms(spec, order, n_terms,
                              [&](std::int64_t c, double v) { acc[c].add(v); });
      std::map<std::int64_t, double> values;
      for (const auto& [c, s] : acc) values[c] = s.value();
      return entries_from_map(values);
    }
    case Strategy::Pairwise:
      return pairwise_vector_sum(spec, order, 1, n_terms + 1);
    case Strategy::ExactRational:
      break;  // handled above
  }
  return {};
}

Vec<Rational> partial_sum_exact(const SeriesSpec& spec, const Permutation& order,
                                std::int64_t n_terms, std::int64_t term_cap) {
  validate_order(order, n_terms);
  if (spec.scalar_mode() != ScalarMode::ExactRational)
    throw InvalidParameter("partial_sum_exact: series is not in exact-rational mode");
  if (n_terms > term_cap)
    throw InvalidParameter("partial_sum_exact: " + std::to_string(n_terms) +
                           " terms exceeds the cap of " + std::to_string(term_cap));

  if (spec.scalar_shape()) {
    Rational acc(0);
    for (std::int64_t k = 1; k <= n_terms; ++k) {
      const auto t = spec.term_exact(order.is_identity() ? k : order.at(k));
      acc += t.coeff(1);
    }
    return VecQ::scalar(std::move(acc));
  }

  std::map<std::int64_t, Rational> acc;
  for (std::int64_t k = 1; k <= n_terms; ++k) {
    const auto t = spec.term_exact(order.is_identity() ? k : order.at(k));
    for (const auto& [coord, value] : t.as_entries()) acc[coord] += value;
  }
  std::vector<VecQ::Entry> entries;
  entries.reserve(acc.size());
  for (auto& [coord, value] : acc)
    if (value != 0) entries.emplace_back(coord, std::move(value));
  return VecQ::sparse(std::move(entries));
}

namespace {

std::vector<std::int64_t> canonical_index_set(std::vector<std::int64_t> indices) {
  for (const std::int64_t i : indices)
    if (i < 1) throw InvalidParameter("sum_over_set: indices start at 1");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw InvalidParameter("sum_over_set: duplicate index");
  return indices;
}

}  // namespace

Vec<double> sum_over_set(const SeriesSpec& spec, std::vector<std::int64_t> indices,
                         Strategy strategy) {
  const auto sorted = canonical_index_set(std::move(indices));
  if (strategy == Strategy::ExactRational) return to_float(sum_over_set_exact(spec, sorted));

  const auto n = static_cast<std::int64_t>(sorted.size());
  if (spec.scalar_shape()) {
    const auto term = [&](std::int64_t k) {
      return spec.term_scalar(sorted[static_cast<std::size_t>(k)]);
    };
    return VecF::scalar(strategy_sum(strategy, 0, n, term));
  }

  // Visit in increasing index order under every floating strategy; pairwise
  // repeats the balanced association over the sorted list.
  if (strategy == Strategy::Pairwise) {
    const auto prefix = Permutation::from_prefix(sorted);
    return pairwise_vector_sum(spec, prefix, 1, n + 1);
  }
  std::map<std::int64_t, CompensatedSum> comp;
  std::map<std::int64_t, double> naive;
  for (const std::int64_t idx : sorted) {
    for (const auto& [coord, value] : spec.term(idx).as_entries()) {
      if (strategy == Strategy::Compensated) {
        comp[coord].add(value);
      } else {
        naive[coord] += value;
      }
    }
  }
  if (strategy == Strategy::Compensated) {
    std::map<std::int64_t, double> values;
    for (const auto& [c, s] : comp) values[c] = s.value();
    return entries_from_map(values);
  }
  return entries_from_map(naive);
}

Vec<Rational> sum_over_set_exact(const SeriesSpec& spec, std::vector<std::int64_t> indices,
                                 std::int64_t term_cap) {
  const auto sorted = canonical_index_set(std::move(indices));
  if (static_cast<std::int64_t>(sorted.size()) > term_cap)
    throw InvalidParameter("sum_over_set_exact: index set exceeds the term cap");
  if (spec.scalar_mode() != ScalarMode::ExactRational)
    throw InvalidParameter("sum_over_set_exact: series is not in exact-rational mode");

  if (spec.scalar_shape()) {
    Rational acc(0);
    for (const std::int64_t idx : sorted) acc += spec.term_exact(idx).coeff(1);
    return VecQ::scalar(std::move(acc));
  }
  std::map<std::int64_t, Rational> acc;
  for (const std::int64_t idx : sorted)
    for (const auto& [coord, value] : spec.term_exact(idx).as_entries()) acc[coord] += value;
  std::vector<VecQ::Entry> entries;
  for (auto& [coord, value] : acc)
    if (value != 0) entries.emplace_back(coord, std::move(value));
  return VecQ::sparse(std::move(entries));
}

}  // namespace unconv
