#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "unconv/rng.hpp"
#include "unconv/summation.hpp"
#include "unconv/vec.hpp"

namespace unconv {

// Scalar arithmetic backing a series: IEEE doubles, or exact rationals
// (arbitrary-precision integer pairs). Exact mode is only available for
// families whose terms are rational numbers.
enum class ScalarMode { Float64, ExactRational };

// Sign source for the signed coordinate family. Seeded signs have O(1)
// random access (hashed), so the stream never needs to be materialized;
// the seed travels with the series object and is echoed into every report.
struct SignSpec {
  enum class Kind { Alternating, Seeded, Explicit };

  Kind kind = Kind::Alternating;
  std::uint64_t seed = 0;
  std::vector<int> list;  // Explicit: entry k is the sign of term k+1

  static SignSpec alternating() { return {}; }
  static SignSpec seeded(std::uint64_t seed);
  static SignSpec explicit_list(std::vector<int> signs);

  // ±1 for term n (1-based). Explicit lists throw ExhaustedStream past
  // their end.
  int at(std::int64_t n) const;
};

// A formal series sum_n x_n given by one of five term generators:
//   AlternatingHarmonic  x_n = (-1)^n / n            (scalar)
//   Harmonic             x_n = 1 / n                 (scalar)
//   CoordinateDecay      x_n = n^-alpha e_n          (alpha > 0)
//   SignedCoordinate     x_n = s_n n^-alpha e_n      (signs from SignSpec)
//   FromFile             finite list loaded from disk
// Scalar terms are dense 1-dim vectors; coordinate terms are sparse.
class SeriesSpec {
 public:
  enum class Family { AlternatingHarmonic, Harmonic, CoordinateDecay, SignedCoordinate, FromFile };

  static SeriesSpec alternating_harmonic(ScalarMode mode = ScalarMode::Float64);
  static SeriesSpec harmonic(ScalarMode mode = ScalarMode::Float64);
  static SeriesSpec coordinate_decay(double alpha, ScalarMode mode = ScalarMode::Float64);
  static SeriesSpec signed_coordinate(double alpha, SignSpec signs,
                                      ScalarMode mode = ScalarMode::Float64);
  // File format, one term per line: index, then whitespace-separated
  // coordinate:value pairs (a bare index is the zero term). Indices must
  // run 1..L in order. In exact mode the decimal literals are parsed to
  // rationals without rounding.
  static SeriesSpec from_file(const std::filesystem::path& path,
                              ScalarMode mode = ScalarMode::Float64);

  Family family() const { return family_; }
  ScalarMode scalar_mode() const { return mode_; }
  double alpha() const { return alpha_; }
  const SignSpec* signs() const;
  std::uint64_t recorded_seed() const;

  // Number of terms for finite (file-backed) series.
  std::optional<std::int64_t> length() const;

  // True when every term is a dense 1-dim vector.
  bool scalar_shape() const;
  // True when terms are c_n e_{j_n} with pairwise-distinct coordinates
  // (zero terms allowed).
  bool disjoint_coordinate_shape() const;

  Vec<double> term(std::int64_t n) const;
  // Exact term; requires ExactRational mode.
  Vec<Rational> term_exact(std::int64_t n) const;
  // Fast paths used by the large-N diagnostics.
  double term_scalar(std::int64_t n) const;      // pre: scalar_shape()
  double coordinate_value(std::int64_t n) const;  // pre: disjoint_coordinate_shape()
  double term_norm(std::int64_t n) const;         // l2 norm of term n
  double term_norm_squared(std::int64_t n) const;

  std::string describe() const;

  struct FileData;  // opaque storage for file-backed terms

 private:
  SeriesSpec() = default;

  Family family_ = Family::Harmonic;
  ScalarMode mode_ = ScalarMode::Float64;
  double alpha_ = 0.0;
  SignSpec signs_{};
  bool has_signs_ = false;
  std::shared_ptr<const FileData> file_;
};

// An ordering of term indices: the identity on 1.. or an explicit prefix
// of pairwise-distinct positive indices.
class Permutation {
 public:
  Permutation() = default;  // identity

  static Permutation identity() { return Permutation(); }
  static Permutation from_prefix(std::vector<std::int64_t> prefix);

  bool is_identity() const { return identity_; }
  std::int64_t prefix_size() const { return static_cast<std::int64_t>(prefix_.size()); }
  const std::vector<std::int64_t>& prefix() const { return prefix_; }

  // Term index at a 1-based position. Identity maps every position to
  // itself; an explicit prefix throws InvalidPermutation past its end.
  std::int64_t at(std::int64_t position) const;

  // True iff the ordering restricted to positions 1..n is a bijection of
  // {1..n}.
  bool complete_to(std::int64_t n) const;

 private:
  bool identity_ = true;
  std::vector<std::int64_t> prefix_;
};

// Cap on exact-rational term counts: bit length of the running sum grows
// roughly linearly in N for the harmonic-type families.
inline constexpr std::int64_t kDefaultRationalTermCap = 100000;

// Sum of the first n_terms terms of the series visited in the given order.
// Floating strategies accumulate per coordinate in visit order;
// ExactRational computes the exact value and rounds once (requires a spec
// in ExactRational mode).
Vec<double> partial_sum(const SeriesSpec& spec, const Permutation& order, std::int64_t n_terms,
                        Strategy strategy);

Vec<Rational> partial_sum_exact(const SeriesSpec& spec, const Permutation& order,
                                std::int64_t n_terms,
                                std::int64_t term_cap = kDefaultRationalTermCap);

// Sum over a finite index set (set semantics: duplicates rejected).
// Floating modes visit indices in increasing order.
Vec<double> sum_over_set(const SeriesSpec& spec, std::vector<std::int64_t> indices,
                         Strategy strategy);

Vec<Rational> sum_over_set_exact(const SeriesSpec& spec, std::vector<std::int64_t> indices,
                                 std::int64_t term_cap = kDefaultRationalTermCap);

}  // namespace unconv
