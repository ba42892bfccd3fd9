#include "unconv/sgd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "unconv/errors.hpp"
#include "unconv/rng.hpp"

namespace unconv {

// --- schedules -----------------------------------------------------------------

namespace {

void validate_rate(double eta, const char* who) {
  if (!std::isfinite(eta) || eta <= 0.0)
    throw InvalidParameter(std::string(who) + ": rate must be positive and finite");
}

}  // namespace

LrSchedule LrSchedule::constant(double eta) {
  validate_rate(eta, "LrSchedule::constant");
  LrSchedule s;
  s.kind_ = Kind::Constant;
  s.eta_ = eta;
  return s;
}

LrSchedule LrSchedule::inverse_sqrt(double eta0) {
  validate_rate(eta0, "LrSchedule::inverse_sqrt");
  LrSchedule s;
  s.kind_ = Kind::InverseSqrt;
  s.eta_ = eta0;
  return s;
}

LrSchedule LrSchedule::from_list(std::vector<double> etas) {
  if (etas.empty()) throw InvalidParameter("LrSchedule::from_list: rate list is empty");
  for (const double eta : etas) validate_rate(eta, "LrSchedule::from_list");
  LrSchedule s;
  s.kind_ = Kind::FromList;
  s.etas_ = std::move(etas);
  return s;
}

double LrSchedule::at(std::int64_t i) const {
  if (i < 1) throw InvalidParameter("LrSchedule::at: steps are 1-based");
  switch (kind_) {
    case Kind::Constant:
      return eta_;
    case Kind::InverseSqrt:
      return eta_ / std::sqrt(static_cast<double>(i));
    case Kind::FromList:
      if (i > list_size())
        throw InvalidParameter("LrSchedule::at: step runs past the listed rates");
      return etas_[static_cast<std::size_t>(i - 1)];
  }
  return eta_;
}

std::string LrSchedule::describe() const {
  char buf[64];
  switch (kind_) {
    case Kind::Constant:
      std::snprintf(buf, sizeof buf, "constant(%g)", eta_);
      return buf;
    case Kind::InverseSqrt:
      std::snprintf(buf, sizeof buf, "inverse-sqrt(%g)", eta_);
      return buf;
    case Kind::FromList:
      std::snprintf(buf, sizeof buf, "list(%zu rates)", etas_.size());
      return buf;
  }
  return {};
}

// --- streams -------------------------------------------------------------------

GradientStream GradientStream::quadratic(int d, std::int64_t n, std::uint64_t seed) {
  if (d < 1) throw InvalidParameter("GradientStream::quadratic: dimension must be >= 1");
  if (n < 1) throw InvalidParameter("GradientStream::quadratic: sample count must be >= 1");
  const auto dd = static_cast<std::size_t>(d);
  SplitMix64 rng(seed);

  std::vector<std::vector<double>> G(dd, std::vector<double>(dd));
  for (auto& row : G)
    for (auto& x : row) x = rng.normal();

  // A = G^T G / d + 0.1 I: PSD with a safe diagonal floor.
  std::vector<std::vector<double>> A(dd, std::vector<double>(dd, 0.0));
  for (std::size_t i = 0; i < dd; ++i)
    for (std::size_t j = 0; j < dd; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dd; ++k) s += G[k][i] * G[k][j];
      A[i][j] = s / static_cast<double>(d);
    }
  for (std::size_t i = 0; i < dd; ++i) A[i][i] += 0.1;

  std::vector<double> b(dd), w0(dd);
  for (auto& x : b) x = rng.normal();
  for (auto& x : w0) x = rng.normal();

  // full-batch gradient c = A w0 - b
  std::vector<double> c(dd, 0.0);
  for (std::size_t i = 0; i < dd; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dd; ++j) s += A[i][j] * w0[j];
    c[i] = s - b[i];
  }

  std::vector<double> rho(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : rho) {
    x = rng.uniform01() + 0.05;
    total += x;
  }
  for (auto& x : rho) x /= total;

  std::vector<std::vector<double>> noise(static_cast<std::size_t>(n), std::vector<double>(dd));
  std::vector<double> noise_mean(dd, 0.0);
  for (auto& row : noise)
    for (std::size_t j = 0; j < dd; ++j) {
      row[j] = 0.1 * rng.normal();
      noise_mean[j] += row[j];
    }
  for (auto& x : noise_mean) x /= static_cast<double>(n);

  GradientStream s;
  s.source_ = Source::Quadratic;
  s.d_ = d;
  s.seed_ = seed;
  s.full_batch_ = c;
  s.gradients_.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < s.gradients_.size(); ++i) {
    auto& g = s.gradients_[i];
    g.resize(dd);
    // g_i = A_i w0 - b_i with A_i = rho_i A, b_i = rho_i b + noise_i - mean
    for (std::size_t j = 0; j < dd; ++j) g[j] = rho[i] * c[j] - noise[i][j] + noise_mean[j];
  }
  return s;
}

GradientStream GradientStream::ill_conditioned(int d, std::int64_t n, std::uint64_t seed) {
  if (d < 1) throw InvalidParameter("GradientStream::ill_conditioned: dimension must be >= 1");
  if (n < 1) throw InvalidParameter("GradientStream::ill_conditioned: sample count must be >= 1");
  SplitMix64 rng(seed);
  GradientStream s;
  s.source_ = Source::IllConditioned;
  s.d_ = d;
  s.seed_ = seed;
  s.gradients_.resize(static_cast<std::size_t>(n));
  for (auto& g : s.gradients_) {
    g.resize(static_cast<std::size_t>(d));
    for (auto& x : g) {
      const double u = rng.uniform(-5.0, 5.0);
      x = rng.sign() * std::pow(10.0, u);
    }
  }
  return s;
}

namespace {

double parse_coordinate(std::string_view token, const std::filesystem::path& path) {
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw ParseError("gradient file " + path.string() + ": bad coordinate '" +
                     std::string(token) + "'");
  return value;
}

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

}  // namespace

GradientStream GradientStream::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("gradient file " + path.string() + ": cannot open");

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("gradient file " + path.string() + ": missing 'd N' header");
  const auto header = split_tokens(line);
  std::int64_t d = 0, n = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), d).ec !=
          std::errc{} ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), n).ec != std::errc{})
    throw ParseError("gradient file " + path.string() + ": header must be 'd N'");
  if (d < 1 || n < 1)
    throw ParseError("gradient file " + path.string() + ": header must declare d >= 1, N >= 1");

  GradientStream s;
  s.source_ = Source::FromFile;
  s.d_ = static_cast<int>(d);
  s.gradients_.reserve(static_cast<std::size_t>(n));
  while (static_cast<std::int64_t>(s.gradients_.size()) < n) {
    if (!std::getline(in, line))
      throw ParseError("gradient file " + path.string() + ": fewer gradients than declared");
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;  // blank lines are tolerated
    if (static_cast<std::int64_t>(tokens.size()) != d)
      throw ParseError("gradient file " + path.string() + ": expected " + std::to_string(d) +
                       " coordinates per line");
    std::vector<double> g;
    g.reserve(tokens.size());
    for (const auto token : tokens) g.push_back(parse_coordinate(token, path));
    s.gradients_.push_back(std::move(g));
  }
  return s;
}

const std::vector<double>& GradientStream::gradient(std::int64_t i) const {
  if (i < 1 || i > size())
    throw InvalidParameter("GradientStream::gradient: sample index out of range");
  return gradients_[static_cast<std::size_t>(i - 1)];
}

std::vector<double> GradientStream::full_batch_gradient() const {
  if (!full_batch_.empty()) return full_batch_;
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(d_));
  for (const auto& g : gradients_)
    for (std::size_t j = 0; j < g.size(); ++j) acc[j].add(g[j]);
  std::vector<double> out(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] = acc[j].value();
  return out;
}

std::string GradientStream::describe() const {
  char buf[96];
  switch (source_) {
    case Source::Quadratic:
      std::snprintf(buf, sizeof buf, "quadratic stream (d=%d, N=%lld, seed=%llu)", d_,
                    static_cast<long long>(size()), static_cast<unsigned long long>(seed_));
      return buf;
    case Source::IllConditioned:
      std::snprintf(buf, sizeof buf, "ill-conditioned stream (d=%d, N=%lld, seed=%llu)", d_,
                    static_cast<long long>(size()), static_cast<unsigned long long>(seed_));
      return buf;
    case Source::FromFile:
      std::snprintf(buf, sizeof buf, "gradient file (d=%d, N=%lld)", d_,
                    static_cast<long long>(size()));
      return buf;
  }
  return {};
}

// --- accumulation ----------------------------------------------------------------

namespace {

void check_order(const GradientStream& stream, const Permutation& order) {
  if (!order.complete_to(stream.size()))
    throw InvalidPermutation("accumulate: order is not complete to the stream length");
}

void check_schedule(const LrSchedule& sched, std::int64_t n) {
  if (sched.kind() == LrSchedule::Kind::FromList && sched.list_size() < n)
    throw InvalidParameter("accumulate: schedule list shorter than the stream");
}

std::int64_t rate_step(SchedulePairing pairing, std::int64_t position, std::int64_t sample) {
  return pairing == SchedulePairing::ByPosition ? position : sample;
}

// Floating reduction of factor(i) * g_{sigma(i)} per coordinate; factor maps
// (position, sample) to the signed scalar weight.
template <class FactorFn>
std::vector<double> accumulate_float(const GradientStream& stream, const Permutation& order,
                                     Strategy strategy, FactorFn&& factor) {
  const std::int64_t n = stream.size();
  const auto d = static_cast<std::size_t>(stream.dim());
  std::vector<double> out(d, 0.0);
  switch (strategy) {
    case Strategy::Naive: {
      for (std::int64_t i = 1; i <= n; ++i) {
        const std::int64_t s = order.at(i);
        const double f = factor(i, s);
        const auto& g = stream.gradient(s);
        for (std::size_t j = 0; j < d; ++j) out[j] += f * g[j];
      }
      return out;
    }
    case Strategy::Compensated: {
      std::vector<CompensatedSum> acc(d);
      for (std::int64_t i = 1; i <= n; ++i) {
        const std::int64_t s = order.at(i);
        const double f = factor(i, s);
        const auto& g = stream.gradient(s);
        for (std::size_t j = 0; j < d; ++j) acc[j].add(f * g[j]);
      }
      for (std::size_t j = 0; j < d; ++j) out[j] = acc[j].value();
      return out;
    }
    case Strategy::Pairwise: {
      for (std::size_t j = 0; j < d; ++j)
        out[j] = pairwise_sum(1, n + 1, [&](std::int64_t i) {
          const std::int64_t s = order.at(i);
          return factor(i, s) * stream.gradient(s)[j];
        });
      return out;
    }
    case Strategy::ExactRational:
      break;  // handled by the callers via the rational path
  }
  throw InvalidParameter("accumulate: unknown strategy");
}

template <class FactorFn>
std::vector<Rational> accumulate_rational(const GradientStream& stream, const Permutation& order,
                                          FactorFn&& factor) {
  const std::int64_t n = stream.size();
  const auto d = static_cast<std::size_t>(stream.dim());
  std::vector<Rational> acc(d, Rational(0));
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t s = order.at(i);
    const Rational f = factor(i, s);
    const auto& g = stream.gradient(s);
    for (std::size_t j = 0; j < d; ++j) acc[j] += f * rational_from_double(g[j]);
  }
  return acc;
}

std::vector<double> round_each(const std::vector<Rational>& exact) {
  std::vector<double> out(exact.size());
  for (std::size_t j = 0; j < exact.size(); ++j) out[j] = to_double(exact[j]);
  return out;
}

}  // namespace

std::vector<double> accumulate(const GradientStream& stream, const LrSchedule& sched,
                               const Permutation& order, Strategy strategy,
                               SchedulePairing pairing) {
  check_order(stream, order);
  check_schedule(sched, stream.size());
  if (strategy == Strategy::ExactRational)
    return round_each(accumulate_exact(stream, sched, order, pairing));
  return accumulate_float(stream, order, strategy, [&](std::int64_t i, std::int64_t s) {
    return -sched.at(rate_step(pairing, i, s));
  });
}

std::vector<Rational> accumulate_exact(const GradientStream& stream, const LrSchedule& sched,
                                       const Permutation& order, SchedulePairing pairing) {
  check_order(stream, order);
  check_schedule(sched, stream.size());
  return accumulate_rational(stream, order, [&](std::int64_t i, std::int64_t s) {
    return -rational_from_double(sched.at(rate_step(pairing, i, s)));
  });
}

std::vector<double> multiplier_variant(const GradientStream& stream, const LrSchedule& sched,
                                       const std::vector<double>& lambdas, double declared_bound,
                                       const Permutation& order, Strategy strategy) {
  if (!std::isfinite(declared_bound) || declared_bound < 0.0)
    throw InvalidParameter("multiplier_variant: declared bound must be finite and >= 0");
  const std::int64_t n = stream.size();
  if (static_cast<std::int64_t>(lambdas.size()) < n)
    throw InvalidParameter("multiplier_variant: multiplier sequence shorter than the stream");
  for (std::int64_t i = 0; i < n; ++i)
    if (!(std::abs(lambdas[static_cast<std::size_t>(i)]) <= declared_bound))
      throw InvalidParameter("multiplier_variant: |lambda| exceeds the declared bound");
  check_order(stream, order);
  check_schedule(sched, n);

  if (strategy == Strategy::ExactRational)
    return round_each(
        accumulate_rational(stream, order, [&](std::int64_t i, std::int64_t s) {
          return -rational_from_double(lambdas[static_cast<std::size_t>(i - 1)]) *
                 rational_from_double(sched.at(rate_step(SchedulePairing::ByPosition, i, s)));
        }));
  return accumulate_float(stream, order, strategy, [&](std::int64_t i, std::int64_t s) {
    return -(lambdas[static_cast<std::size_t>(i - 1)] *
             sched.at(rate_step(SchedulePairing::ByPosition, i, s)));
  });
}

SensitivityReport permutation_sensitivity(const GradientStream& stream, const LrSchedule& sched,
                                          std::int64_t num_perms, std::uint64_t seed,
                                          const std::vector<Strategy>& strategies) {
  if (num_perms < 2)
    throw InvalidParameter("permutation_sensitivity: need at least two permutations");
  check_schedule(sched, stream.size());

  SensitivityReport report;
  report.num_perms = num_perms;
  report.seed = seed;

  SplitMix64 rng(seed);
  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(num_perms));
  for (std::int64_t k = 0; k < num_perms; ++k)
    perms.push_back(Permutation::from_prefix(random_permutation(stream.size(), rng)));

  // The exact accumulation is permutation-invariant, so any one order serves
  // as the shared reference.
  const auto reference = accumulate_exact(stream, sched, perms.front());

  for (const Strategy strategy : strategies) {
    std::vector<std::vector<double>> results;
    results.reserve(perms.size());
    for (const auto& perm : perms)
      results.push_back(accumulate(stream, sched, perm, strategy));

    StrategyDeviation dev;
    for (std::size_t a = 0; a < results.size(); ++a)
      for (std::size_t b = a + 1; b < results.size(); ++b)
        for (std::size_t j = 0; j < results[a].size(); ++j)
          dev.max_pairwise_deviation =
              std::max(dev.max_pairwise_deviation, std::abs(results[a][j] - results[b][j]));

    for (const auto& result : results)
      for (std::size_t j = 0; j < result.size(); ++j) {
        const Rational diff = rational_from_double(result[j]) - reference[j];
        dev.reference_deviation =
            std::max(dev.reference_deviation, std::abs(to_double(diff)));
      }

    report.per_strategy[to_string(strategy)] = dev;
  }

  const auto naive = report.per_strategy.find(to_string(Strategy::Naive));
  if (naive != report.per_strategy.end() && naive->second.max_pairwise_deviation > 0.0)
    for (auto& [name, dev] : report.per_strategy)
      dev.relative_to_naive = dev.max_pairwise_deviation / naive->second.max_pairwise_deviation;

  if (naive != report.per_strategy.end()) {
    const double bar = naive->second.max_pairwise_deviation;
    const auto pairwise = report.per_strategy.find(to_string(Strategy::Pairwise));
    if (pairwise != report.per_strategy.end() && pairwise->second.max_pairwise_deviation > bar)
      report.flagged.push_back("pairwise-deviation-exceeds-naive");
    const auto comp = report.per_strategy.find(to_string(Strategy::Compensated));
    if (comp != report.per_strategy.end() && comp->second.max_pairwise_deviation > bar)
      report.flagged.push_back("compensated-deviation-exceeds-naive");
  }
  return report;
}

}  // namespace unconv
