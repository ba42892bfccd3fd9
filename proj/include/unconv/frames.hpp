#pragma once
// Finite frames in R^d: frame bounds, canonical duals, analysis/synthesis,
// and thresholded reconstruction.
//
// A family {phi_n} of M >= d vectors is a frame when the frame operator
// S = sum_n phi_n phi_n^T is positive definite. The frame bounds (A, B) are
// the extreme eigenvalues of S and the canonical dual is phi~_n = S^{-1}phi_n.
// Thresholding scales analysis coefficients by a mask 0 <= lambda_n <= 1
// before dual synthesis. In this finite setting every bounded mask yields a
// bounded reconstruction; that is the finite-M shadow of the bounded
// multiplier property of unconditionally convergent expansions, where the
// same manipulation is only safe because the expansion converges regardless
// of order.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unconv/rational.hpp"

namespace unconv {

// Immutable frame with precomputed bounds and canonical dual. Factories
// validate that the family spans R^d and throw NotAFrame otherwise.
class Frame {
 public:
  static Frame from_vectors(std::vector<std::vector<double>> vectors,
                            std::string label = "custom");
  static Frame orthonormal(int d);
  // Three unit vectors in R^2 at 120 degree spacing; tight with A = B = 3/2.
  static Frame mercedes_benz();
  // Standard basis of R^2 plus its copy rotated by angle radians. A union of
  // two orthonormal bases is tight with A = B = 2 for every angle.
  static Frame rotated_union(double angle);
  // m seeded unit vectors in R^d; generically a non-tight frame.
  static Frame random_unit(int d, std::int64_t m, std::uint64_t seed);
  // Orthonormal discrete Haar system on 2^levels points (1 <= levels <= 10):
  // one scaling vector, then wavelet bands ordered coarse to fine.
  static Frame haar(int levels);
  // Header "d M", then M rows of d whitespace-separated coordinates.
  static Frame from_file(const std::filesystem::path& path);

  int dim() const { return d_; }
  std::int64_t size() const { return static_cast<std::int64_t>(vectors_.size()); }
  const std::vector<double>& vector(std::int64_t n) const;       // 1-based
  const std::vector<double>& dual_vector(std::int64_t n) const;  // 1-based
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  bool is_tight() const { return upper_ - lower_ <= 1e-10; }
  std::string describe() const { return label_; }

 private:
  Frame() = default;
  std::vector<std::vector<double>> vectors_;
  std::vector<std::vector<double>> duals_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  int d_ = 0;
  std::string label_;
};

// Extreme eigenvalues (A, B) of the frame operator S = sum_n phi_n phi_n^T,
// by symmetric eigensolve. Throws NotAFrame when M < d or the family fails
// to span R^d (smallest eigenvalue at numerical rank tolerance).
std::pair<double, double> frame_bounds(const std::vector<std::vector<double>>& vectors);

// Analysis coefficients c_n = <f, phi_n>.
std::vector<double> analyze(const Frame& frame, const std::vector<double>& f);
// sum_n c_n phi_n.
std::vector<double> synthesize(const Frame& frame, const std::vector<double>& coefficients);
// sum_n c_n phi~_n; applied to analyze(frame, f) this recovers f up to
// solver tolerance.
std::vector<double> synthesize_dual(const Frame& frame, const std::vector<double>& coefficients);

// Coefficient attenuation rule. Hard and Soft reduce to coefficient-dependent
// masks: hard keeps lambda_n = 1 iff |c_n| > tau, soft uses max(0, 1 - tau/|c_n|).
class ThresholdRule {
 public:
  enum class Kind { Hard, Soft, Mask };

  static ThresholdRule hard(double tau);                 // tau >= 0
  static ThresholdRule soft(double tau);                 // tau >= 0
  static ThresholdRule mask(std::vector<double> lambdas);  // entries in [0, 1]

  Kind kind() const { return kind_; }
  double tau() const { return tau_; }
  // Mask weights for the given coefficients, each in [0, 1]. A stored mask
  // must match the coefficient count.
  std::vector<double> mask_for(const std::vector<double>& coefficients) const;
  std::string describe() const;

 private:
  ThresholdRule() = default;
  Kind kind_ = Kind::Hard;
  double tau_ = 0.0;
  std::vector<double> lambdas_;
};

struct Reconstruction {
  std::vector<double> reconstructed;  // sum_n lambda_n c_n phi~_n
  std::vector<double> mask;           // the weights actually applied
  // ||original - reconstructed|| when the original signal is supplied, else
  // the norm of the dual synthesis of the dropped part sum (1-lambda_n) c_n phi~_n.
  double error_norm = 0.0;
  // (1/A) ||sum_n (1-lambda_n) c_n phi_n||: dominates error_norm whenever the
  // coefficients are the analysis of the original signal.
  double computable_bound = 0.0;
  // sqrt(B)/A times the l2 norm of ((1-lambda_n) c_n): the coarser a-priori
  // form, always >= the computable bound.
  double loose_bound = 0.0;
};

// Dual synthesis of masked coefficients plus the truncation-error bounds.
// The bounds are reported, not enforced: they are theorems only when the
// coefficients analyze the original signal, and the caller may pass any c.
Reconstruction reconstruct(const Frame& frame, const std::vector<double>& coefficients,
                           const ThresholdRule& rule,
                           const std::optional<std::vector<double>>& original = std::nullopt);

// Exact-rational dual synthesis of masked coefficients. Every input double is
// lifted exactly, so mask identities hold bitwise; in particular a mask and
// its complement sum to the unthresholded synthesis whenever the complement
// 1 - lambda_n is itself exact in double (dyadic lambda).
std::vector<Rational> reconstruct_exact(const Frame& frame,
                                        const std::vector<double>& coefficients,
                                        const std::vector<double>& mask);

// One resolution level of the Haar proxy for an infinite expansion: the
// signal is sampled at the 2^level midpoints of [0, 1) and analyzed in the
// Haar frame of that resolution.
struct HaarRefinement {
  int level = 0;
  std::int64_t points = 0;
  double coefficient_norm = 0.0;       // l2 norm of all coefficients
  double finest_band_norm = 0.0;       // l2 norm of the finest wavelet band
  double finest_band_fraction = 0.0;   // finest band energy / total energy
  double reconstruction_error = 0.0;   // all-ones mask reconstruction residual
};

// Rows for levels 1..max_level (1 <= max_level <= 10). For smooth signals the
// finest-band energy fraction decays roughly four-fold per level; a heavy
// tail is the finite signature of an expansion that resists truncation.
std::vector<HaarRefinement> haar_refinement_report(const std::function<double(double)>& signal,
                                                   int max_level);

}  // namespace unconv
