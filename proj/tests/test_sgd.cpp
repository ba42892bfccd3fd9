#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "unconv/sgd.hpp"

using namespace unconv;

namespace {

std::filesystem::path write_stream_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

// Dyadic coordinates: every product with a dyadic rate is exact, so all four
// strategies must agree bitwise on these fixtures.
GradientStream small_stream() {
  static const auto path = write_stream_file(
      "sgd_small.txt", "2 3\n1.5 -2.0\n0.25 0.125\n-1.0 3.0\n");
  return GradientStream::from_file(path);
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double linf_scale(const std::vector<double>& a) {
  double m = 0.0;
  for (const double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// --- schedules -----------------------------------------------------------------

TEST_CASE("schedule rates and validation") {
  const auto c = LrSchedule::constant(0.01);
  CHECK(c.at(1) == 0.01);
  CHECK(c.at(1000000) == 0.01);
  CHECK(c.kind() == LrSchedule::Kind::Constant);

  const auto inv = LrSchedule::inverse_sqrt(0.1);
  CHECK(inv.at(1) == 0.1);
  CHECK(inv.at(4) == 0.05);  // sqrt(4) is exact
  CHECK(inv.at(2) == 0.1 / std::sqrt(2.0));

  const auto list = LrSchedule::from_list({0.5, 0.25, 0.125});
  CHECK(list.at(2) == 0.25);
  CHECK(list.list_size() == 3);
  CHECK_THROWS_AS(list.at(4), InvalidParameter);
  CHECK_THROWS_AS(list.at(0), InvalidParameter);

  CHECK_THROWS_AS(LrSchedule::constant(0.0), InvalidParameter);
  CHECK_THROWS_AS(LrSchedule::constant(-0.1), InvalidParameter);
  CHECK_THROWS_AS(LrSchedule::constant(std::nan("")), InvalidParameter);
  CHECK_THROWS_AS(LrSchedule::inverse_sqrt(0.0), InvalidParameter);
  CHECK_THROWS_AS(LrSchedule::from_list({}), InvalidParameter);
  CHECK_THROWS_AS(LrSchedule::from_list({0.5, 0.0}), InvalidParameter);
}

// --- streams -------------------------------------------------------------------

TEST_CASE("quadratic stream is seeded, shaped, and sums to the full batch") {
  const auto s = GradientStream::quadratic(10, 1000, 123);
  CHECK(s.dim() == 10);
  CHECK(s.size() == 1000);
  CHECK(s.recorded_seed() == 123);
  REQUIRE(s.gradient(1).size() == 10);
  REQUIRE(s.gradient(1000).size() == 10);

  const auto again = GradientStream::quadratic(10, 1000, 123);
  CHECK(again.gradient(7) == s.gradient(7));
  CHECK(again.gradient(613) == s.gradient(613));
  const auto other = GradientStream::quadratic(10, 1000, 124);
  CHECK(other.gradient(7) != s.gradient(7));

  // sum of per-sample gradients returns the full-batch gradient up to roundoff
  const auto full = s.full_batch_gradient();
  REQUIRE(full.size() == 10);
  std::vector<double> acc(10, 0.0);
  for (std::int64_t i = 1; i <= s.size(); ++i) {
    const auto& g = s.gradient(i);
    for (std::size_t j = 0; j < 10; ++j) acc[j] += g[j];
  }
  const double scale = std::max(1.0, linf_scale(full));
  CHECK(linf(acc, full) <= 1e-9 * scale);

  CHECK_THROWS_AS(GradientStream::quadratic(0, 10, 1), InvalidParameter);
  CHECK_THROWS_AS(GradientStream::quadratic(3, 0, 1), InvalidParameter);
  CHECK_THROWS_AS(s.gradient(0), InvalidParameter);
  CHECK_THROWS_AS(s.gradient(1001), InvalidParameter);
}

TEST_CASE("ill-conditioned stream spans ten orders of magnitude") {
  const auto s = GradientStream::ill_conditioned(10, 500, 77);
  CHECK(s.size() == 500);
  double lo = kInfinity, hi = 0.0;
  for (std::int64_t i = 1; i <= s.size(); ++i)
    for (const double x : s.gradient(i)) {
      const double m = std::abs(x);
      CHECK(m >= 1e-5);
      CHECK(m <= 1e5);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  CHECK(hi / lo >= 1e8);

  const auto again = GradientStream::ill_conditioned(10, 500, 77);
  CHECK(again.gradient(250) == s.gradient(250));
}

TEST_CASE("stream files parse exactly and reject malformed input") {
  const auto s = small_stream();
  CHECK(s.dim() == 2);
  CHECK(s.size() == 3);
  CHECK(s.gradient(1) == std::vector<double>{1.5, -2.0});
  CHECK(s.gradient(3) == std::vector<double>{-1.0, 3.0});
  CHECK(s.full_batch_gradient() == std::vector<double>{0.75, 1.125});

  CHECK_THROWS_AS(GradientStream::from_file(write_stream_file("sgd_bad1.txt", "x 3\n1 2\n")),
                  ParseError);
  CHECK_THROWS_AS(GradientStream::from_file(write_stream_file("sgd_bad2.txt", "2 2\n1.0\n1.0 2.0\n")),
                  ParseError);
  CHECK_THROWS_AS(GradientStream::from_file(write_stream_file("sgd_bad3.txt", "2 2\n1.0 2.0\n")),
                  ParseError);
  CHECK_THROWS_AS(
      GradientStream::from_file(write_stream_file("sgd_bad4.txt", "2 1\n1.0 2.0 3.0\n")),
      ParseError);
  CHECK_THROWS_AS(GradientStream::from_file(write_stream_file("sgd_bad5.txt", "2 1\nnan 2.0\n")),
                  ParseError);
  CHECK_THROWS_AS(GradientStream::from_file("/nonexistent/sgd_stream.txt"), ParseError);
}

// --- accumulate ------------------------------------------------------------------

TEST_CASE("single-sample update is minus eta times the gradient") {
  const auto s = GradientStream::from_file(write_stream_file("sgd_one.txt", "2 1\n1.5 -2.0\n"));
  for (const auto strategy :
       {Strategy::Naive, Strategy::Compensated, Strategy::Pairwise, Strategy::ExactRational}) {
    const auto dw = accumulate(s, LrSchedule::constant(0.5), Permutation::identity(), strategy);
    CHECK(dw == std::vector<double>{-0.75, 1.0});
  }
}

TEST_CASE("dyadic fixtures make every strategy agree exactly") {
  const auto s = small_stream();
  // -0.5 * (1.5 + 0.25 - 1.0) and -0.5 * (-2.0 + 0.125 + 3.0), all dyadic
  const std::vector<double> want{-0.375, -0.5625};
  for (const auto strategy :
       {Strategy::Naive, Strategy::Compensated, Strategy::Pairwise, Strategy::ExactRational}) {
    CHECK(accumulate(s, LrSchedule::constant(0.5), Permutation::identity(), strategy) == want);
    CHECK(accumulate(s, LrSchedule::constant(0.5), Permutation::from_prefix({3, 1, 2}), strategy) ==
          want);
  }
}

TEST_CASE("exact accumulation is permutation invariant, bitwise") {
  const auto s = GradientStream::quadratic(4, 60, 9);
  const auto sched = LrSchedule::constant(0.01);
  SplitMix64 rng(2024);
  const auto base = accumulate(s, sched, Permutation::identity(), Strategy::ExactRational);
  const auto base_exact = accumulate_exact(s, sched, Permutation::identity());
  for (int k = 0; k < 8; ++k) {
    const auto perm = Permutation::from_prefix(random_permutation(60, rng));
    CHECK(accumulate(s, sched, perm, Strategy::ExactRational) == base);
    CHECK(accumulate_exact(s, sched, perm) == base_exact);
  }
}

TEST_CASE("accumulate validates order and schedule coverage") {
  const auto s = small_stream();
  CHECK_THROWS_AS(
      accumulate(s, LrSchedule::constant(0.5), Permutation::from_prefix({2, 1}), Strategy::Naive),
      InvalidPermutation);
  CHECK_THROWS_AS(accumulate(s, LrSchedule::from_list({0.5, 0.25}), Permutation::identity(),
                             Strategy::Naive),
                  InvalidParameter);
}

TEST_CASE("schedule pairing: rates stay by position or travel with samples") {
  const auto s = GradientStream::from_file(write_stream_file("sgd_pair.txt", "1 2\n1.0\n0.0\n"));
  const auto sched = LrSchedule::inverse_sqrt(1.0);
  const auto order = Permutation::from_prefix({2, 1});
  const auto by_pos =
      accumulate(s, sched, order, Strategy::Naive, SchedulePairing::ByPosition);
  const auto by_sample =
      accumulate(s, sched, order, Strategy::Naive, SchedulePairing::BySample);
  // position pairing: -(eta_1 g_2 + eta_2 g_1) = -1/sqrt(2)
  CHECK(by_pos == std::vector<double>{-1.0 / std::sqrt(2.0)});
  // sample pairing: -(eta_2 g_2 + eta_1 g_1) = -1
  CHECK(by_sample == std::vector<double>{-1.0});
}

TEST_CASE("compensated accumulation tracks the exact reference tightly") {
  const auto s = GradientStream::quadratic(10, 200, 41);
  const auto sched = LrSchedule::constant(0.01);
  const auto reference = accumulate_exact(s, sched, Permutation::identity());
  std::vector<double> ref(reference.size());
  for (std::size_t j = 0; j < ref.size(); ++j) ref[j] = to_double(reference[j]);
  const double scale = std::max(1.0, linf_scale(ref));

  SplitMix64 rng(6);
  for (int k = 0; k < 6; ++k) {
    const auto perm = Permutation::from_prefix(random_permutation(200, rng));
    const auto dw = accumulate(s, sched, perm, Strategy::Compensated);
    CHECK(linf(dw, ref) <= 1e-13 * scale);
  }
}

// --- multiplier variant ------------------------------------------------------------

TEST_CASE("unit multipliers reproduce accumulate and zero multipliers kill it") {
  const auto s = small_stream();
  const auto sched = LrSchedule::constant(0.5);
  const std::vector<double> ones(3, 1.0), zeros(3, 0.0);
  for (const auto strategy :
       {Strategy::Naive, Strategy::Compensated, Strategy::Pairwise, Strategy::ExactRational}) {
    CHECK(multiplier_variant(s, sched, ones, 1.0, Permutation::identity(), strategy) ==
          accumulate(s, sched, Permutation::identity(), strategy));
    CHECK(multiplier_variant(s, sched, zeros, 1.0, Permutation::identity(), strategy) ==
          std::vector<double>{0.0, 0.0});
  }
}

TEST_CASE("clipping masks obey the crude update bound") {
  const auto s = GradientStream::ill_conditioned(4, 50, 5);
  const auto sched = LrSchedule::constant(0.01);
  const double clip = 1.0;
  std::vector<double> lambdas;
  for (std::int64_t i = 1; i <= s.size(); ++i) {
    double norm2 = 0.0;
    for (const double x : s.gradient(i)) norm2 += x * x;
    lambdas.push_back(std::min(1.0, clip / std::sqrt(norm2)));
  }
  const auto dw =
      multiplier_variant(s, sched, lambdas, 1.0, Permutation::identity(), Strategy::Compensated);
  // |dw| <= sum_i eta_i * clip = 50 * 0.01 * 1
  CHECK(linf_scale(dw) <= 0.5 + 1e-9);
}

TEST_CASE("multiplier validation rejects undeclared and oversized bounds") {
  const auto s = small_stream();
  const auto sched = LrSchedule::constant(0.5);
  const std::vector<double> ones(3, 1.0);
  CHECK_THROWS_AS(multiplier_variant(s, sched, ones, std::nan(""), Permutation::identity(),
                                     Strategy::Naive),
                  InvalidParameter);
  CHECK_THROWS_AS(
      multiplier_variant(s, sched, ones, kInfinity, Permutation::identity(), Strategy::Naive),
      InvalidParameter);
  CHECK_THROWS_AS(multiplier_variant(s, sched, {2.0, 0.5, 0.5}, 1.0, Permutation::identity(),
                                     Strategy::Naive),
                  InvalidParameter);
  CHECK_THROWS_AS(
      multiplier_variant(s, sched, {0.5, 0.5}, 1.0, Permutation::identity(), Strategy::Naive),
      InvalidParameter);
}

// --- linearity over concatenated streams --------------------------------------------

TEST_CASE("exact accumulation is additive across a stream seam") {
  const std::string head = "0.5 0.5\n-0.75 2.0\n4.0 -0.125\n0.0625 1.0\n";
  const auto s1 = small_stream();
  const auto s2 = GradientStream::from_file(write_stream_file("sgd_cat2.txt", "2 4\n" + head));
  const auto cat = GradientStream::from_file(write_stream_file(
      "sgd_cat.txt", "2 7\n1.5 -2.0\n0.25 0.125\n-1.0 3.0\n" + head));

  const auto sched = LrSchedule::constant(0.25);
  const auto whole = accumulate_exact(cat, sched, Permutation::identity());
  const auto left = accumulate_exact(s1, sched, Permutation::identity());
  const auto right = accumulate_exact(s2, sched, Permutation::identity());
  REQUIRE(whole.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) CHECK(whole[j] == left[j] + right[j]);

  // a listed schedule split at the seam keeps the same rates per sample
  const std::vector<double> rates{0.5, 0.25, 0.125, 1.0, 2.0, 0.75, 0.0625};
  const auto whole_l = accumulate_exact(cat, LrSchedule::from_list(rates), Permutation::identity());
  const auto left_l = accumulate_exact(
      s1, LrSchedule::from_list({rates[0], rates[1], rates[2]}), Permutation::identity());
  const auto right_l = accumulate_exact(
      s2, LrSchedule::from_list({rates[3], rates[4], rates[5], rates[6]}), Permutation::identity());
  for (std::size_t j = 0; j < 2; ++j) CHECK(whole_l[j] == left_l[j] + right_l[j]);
}

// --- permutation sensitivity ----------------------------------------------------------

TEST_CASE("sensitivity report orders the strategies and is deterministic") {
  const auto s = GradientStream::quadratic(10, 300, 123);
  const auto sched = LrSchedule::constant(0.01);
  const std::vector<Strategy> all = {Strategy::Naive, Strategy::Compensated, Strategy::Pairwise,
                                     Strategy::ExactRational};
  const auto rep = permutation_sensitivity(s, sched, 12, 99, all);
  CHECK(rep.num_perms == 12);
  CHECK(rep.seed == 99);
  REQUIRE(rep.per_strategy.size() == 4);

  const auto& naive = rep.per_strategy.at("naive");
  const auto& comp = rep.per_strategy.at("compensated");
  const auto& pair = rep.per_strategy.at("pairwise");
  const auto& exact = rep.per_strategy.at("exact-rational");

  CHECK(exact.max_pairwise_deviation == 0.0);
  CHECK(naive.max_pairwise_deviation > 0.0);
  CHECK(comp.max_pairwise_deviation <= naive.max_pairwise_deviation);
  CHECK(pair.max_pairwise_deviation <= naive.max_pairwise_deviation);
  CHECK(rep.flagged.empty());

  CHECK(naive.relative_to_naive == 1.0);
  CHECK(comp.relative_to_naive <= 1.0);
  CHECK(exact.relative_to_naive == 0.0);

  CHECK(comp.reference_deviation <= 1e-12);
  CHECK(exact.reference_deviation <= 1e-12);
  CHECK(naive.reference_deviation >= comp.reference_deviation);

  const auto rep2 = permutation_sensitivity(s, sched, 12, 99, all);
  for (const auto& [name, dev] : rep.per_strategy) {
    CHECK(rep2.per_strategy.at(name).max_pairwise_deviation == dev.max_pairwise_deviation);
    CHECK(rep2.per_strategy.at(name).reference_deviation == dev.reference_deviation);
  }
}

TEST_CASE("compensation wins big on the ill-conditioned stream") {
  const auto s = GradientStream::ill_conditioned(10, 500, 77);
  const auto rep = permutation_sensitivity(s, LrSchedule::constant(0.01), 10, 7,
                                           {Strategy::Naive, Strategy::Compensated});
  const double naive = rep.per_strategy.at("naive").max_pairwise_deviation;
  const double comp = rep.per_strategy.at("compensated").max_pairwise_deviation;
  CHECK(naive > 0.0);
  CHECK(comp < naive);
  CHECK(comp * 100.0 <= naive);
  CHECK(rep.flagged.empty());
}

TEST_CASE("sensitivity validation") {
  const auto s = small_stream();
  CHECK_THROWS_AS(
      permutation_sensitivity(s, LrSchedule::constant(0.5), 1, 1, {Strategy::Naive}),
      InvalidParameter);
}
