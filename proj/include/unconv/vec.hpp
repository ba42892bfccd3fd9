#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "unconv/errors.hpp"
#include "unconv/rational.hpp"

namespace unconv {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

inline double as_double(double v) { return v; }
inline double as_double(const Rational& v) { return to_double(v); }

template <class S>
S abs_value(const S& v) {
  using std::abs;
  return abs(v);
}

}  // namespace detail

// A vector over the reals in one of two representations:
//   - dense: an element of R^d (basis indices 1..d), d >= 1;
//   - sparse: a finitely supported sequence over basis indices >= 1.
// Sparse storage is canonical (entries sorted by index, no explicit zeros),
// so two equal sparse values are structurally identical. The scalar type is
// either double or Rational; rational arithmetic is exact throughout.
template <class S>
class Vec {
 public:
  using Entry = std::pair<std::int64_t, S>;

  // The zero vector (empty sparse).
  Vec() = default;

  static Vec dense(std::vector<S> coords) {
    if (coords.empty()) throw InvalidParameter("Vec::dense: dimension must be >= 1");
    Vec v;
    v.dense_ = true;
    v.coords_ = std::move(coords);
    return v;
  }

  static Vec sparse(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> kept;
    kept.reserve(entries.size());
    for (auto& e : entries) {
      if (e.first < 1) throw InvalidParameter("Vec::sparse: basis indices start at 1");
      if (!kept.empty() && kept.back().first == e.first)
        throw InvalidParameter("Vec::sparse: duplicate basis index");
      if (!(e.second == S(0))) kept.push_back(std::move(e));
    }
    Vec v;
    v.entries_ = std::move(kept);
    return v;
  }

  // c * e_index.
  static Vec unit(std::int64_t index, S value) {
    std::vector<Entry> e;
    e.emplace_back(index, std::move(value));
    return sparse(std::move(e));
  }

  // A scalar embedded as a dense 1-dim vector.
  static Vec scalar(S value) { return dense(std::vector<S>{std::move(value)}); }

  bool dense_shape() const { return dense_; }

  // Dense dimension; 0 for sparse (countable ambient space).
  std::int64_t dim() const {
    return dense_ ? static_cast<std::int64_t>(coords_.size()) : 0;
  }

  // Coefficient at a 1-based basis index; indices outside dense range or
  // sparse support read as zero.
  S coeff(std::int64_t index) const {
    if (dense_) {
      if (index < 1 || index > dim()) return S(0);
      return coords_[static_cast<std::size_t>(index - 1)];
    }
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), index,
        [](const Entry& e, std::int64_t i) { return e.first < i; });
    if (it != entries_.end() && it->first == index) return it->second;
    return S(0);
  }

  const std::vector<S>& dense_coords() const { return coords_; }
  const std::vector<Entry>& sparse_entries() const { return entries_; }

  std::int64_t support_size() const {
    if (!dense_) return static_cast<std::int64_t>(entries_.size());
    std::int64_t count = 0;
    for (const auto& c : coords_)
      if (!(c == S(0))) ++count;
    return count;
  }

  // Largest basis index holding a nonzero coefficient; 0 for the zero vector.
  std::int64_t max_support_index() const {
    if (dense_) {
      for (std::int64_t i = dim(); i >= 1; --i)
        if (!(coords_[static_cast<std::size_t>(i - 1)] == S(0))) return i;
      return 0;
    }
    return entries_.empty() ? 0 : entries_.back().first;
  }

  bool is_zero() const { return support_size() == 0; }

  Vec scaled(const S& c) const {
    Vec v = *this;
    if (v.dense_) {
      for (auto& x : v.coords_) x = x * c;
    } else if (c == S(0)) {
      v.entries_.clear();
    } else {
      for (auto& e : v.entries_) e.second = e.second * c;
    }
    return v;
  }

  Vec operator-() const { return scaled(S(-1)); }

  // Value equality over the common ambient space. For two sparse vectors
  // this coincides with structural equality of the canonical entry lists.
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dense_ && b.dense_) return a.coords_ == b.coords_;
    if (!a.dense_ && !b.dense_) return a.entries_ == b.entries_;
    const Vec& d = a.dense_ ? a : b;
    const Vec& s = a.dense_ ? b : a;
    if (s.max_support_index() > d.dim()) return false;
    for (std::int64_t i = 1; i <= d.dim(); ++i)
      if (!(d.coeff(i) == s.coeff(i))) return false;
    return true;
  }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

  // Addition. Dense operands must share a dimension; any mix involving a
  // sparse operand lands in the sparse representation.
  friend Vec operator+(const Vec& a, const Vec& b) {
    if (a.dense_ && b.dense_) {
      if (a.dim() != b.dim())
        throw ShapeError("Vec: dense dimension mismatch in addition");
      Vec v = a;
      for (std::size_t i = 0; i < v.coords_.size(); ++i) v.coords_[i] = v.coords_[i] + b.coords_[i];
      return v;
    }
    std::vector<Entry> merged;
    auto ea = a.as_entries();
    auto eb = b.as_entries();
    merged.reserve(ea.size() + eb.size());
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
      if (j >= eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
        merged.push_back(ea[i++]);
      } else if (i >= ea.size() || eb[j].first < ea[i].first) {
        merged.push_back(eb[j++]);
      } else {
        S sum = ea[i].second + eb[j].second;
        if (!(sum == S(0))) merged.emplace_back(ea[i].first, std::move(sum));
        ++i;
        ++j;
      }
    }
    Vec v;
    v.entries_ = std::move(merged);
    return v;
  }

  friend Vec operator-(const Vec& a, const Vec& b) { return a + (-b); }

  // Entry view regardless of representation (dense zeros skipped).
  std::vector<Entry> as_entries() const {
    if (!dense_) return entries_;
    std::vector<Entry> out;
    out.reserve(coords_.size());
    for (std::int64_t i = 1; i <= dim(); ++i) {
      const S& c = coords_[static_cast<std::size_t>(i - 1)];
      if (!(c == S(0))) out.emplace_back(i, c);
    }
    return out;
  }

 private:
  bool dense_ = false;
  std::vector<S> coords_;
  std::vector<Entry> entries_;
};

using VecF = Vec<double>;
using VecQ = Vec<Rational>;

// --- norms and inner products ---------------------------------------------

// l1 norm, exact in the scalar type.
template <class S>
S l1_norm(const Vec<S>& v) {
  S acc(0);
  if (v.dense_shape()) {
    for (const auto& c : v.dense_coords()) acc = acc + detail::abs_value(c);
  } else {
    for (const auto& e : v.sparse_entries()) acc = acc + detail::abs_value(e.second);
  }
  return acc;
}

// sup norm, exact in the scalar type.
template <class S>
S sup_norm(const Vec<S>& v) {
  S best(0);
  const auto consider = [&](const S& c) {
    S a = detail::abs_value(c);
    if (best < a) best = a;
  };
  if (v.dense_shape()) {
    for (const auto& c : v.dense_coords()) consider(c);
  } else {
    for (const auto& e : v.sparse_entries()) consider(e.second);
  }
  return best;
}

// Squared l2 norm, exact in the scalar type.
template <class S>
S l2_norm_squared(const Vec<S>& v) {
  S acc(0);
  if (v.dense_shape()) {
    for (const auto& c : v.dense_coords()) acc = acc + c * c;
  } else {
    for (const auto& e : v.sparse_entries()) acc = acc + e.second * e.second;
  }
  return acc;
}

// lp norm as a double. p must be >= 1 or infinity; p = infinity is the sup
// norm. Rational coefficients are converted after the exact |.| is taken.
template <class S>
double lp_norm(const Vec<S>& v, double p) {
  if (std::isnan(p) || p < 1.0)
    throw InvalidParameter("lp_norm: p must be >= 1 or infinity");
  if (p == kInfinity) return detail::as_double(sup_norm(v));
  if (p == 1.0) return detail::as_double(l1_norm(v));
  if (p == 2.0) return std::sqrt(detail::as_double(l2_norm_squared(v)));
  double acc = 0.0;
  const auto consider = [&](const S& c) {
    acc += std::pow(std::fabs(detail::as_double(c)), p);
  };
  if (v.dense_shape()) {
    for (const auto& c : v.dense_coords()) consider(c);
  } else {
    for (const auto& e : v.sparse_entries()) consider(e.second);
  }
  return std::pow(acc, 1.0 / p);
}

// Inner product, exact in the scalar type. Dense operands must share a
// dimension; a dense operand pairs with a sparse one by index alignment
// (sparse support beyond the dense range pairs with zero).
template <class S>
S inner(const Vec<S>& a, const Vec<S>& b) {
  if (a.dense_shape() && b.dense_shape()) {
    if (a.dim() != b.dim())
      throw ShapeError("inner: dense dimension mismatch");
    S acc(0);
    for (std::int64_t i = 1; i <= a.dim(); ++i) acc = acc + a.coeff(i) * b.coeff(i);
    return acc;
  }
  const Vec<S>& sparse_side = a.dense_shape() ? b : a;
  const Vec<S>& other = a.dense_shape() ? a : b;
  S acc(0);
  for (const auto& e : sparse_side.sparse_entries()) acc = acc + e.second * other.coeff(e.first);
  return acc;
}

// Linear combination sum_i coeff_i * v_i. Exact when S is Rational.
template <class S>
Vec<S> combine(std::span<const std::pair<S, Vec<S>>> terms) {
  Vec<S> acc;
  bool first = true;
  for (const auto& [c, v] : terms) {
    if (first) {
      acc = v.scaled(c);
      first = false;
    } else {
      acc = acc + v.scaled(c);
    }
  }
  return acc;
}

template <class S>
Vec<S> combine(const std::vector<std::pair<S, Vec<S>>>& terms) {
  return combine(std::span<const std::pair<S, Vec<S>>>(terms));
}

// Exact double -> rational lift of a whole vector.
inline VecQ to_rational(const VecF& v) {
  if (v.dense_shape()) {
    std::vector<Rational> coords;
    coords.reserve(v.dense_coords().size());
    for (double c : v.dense_coords()) coords.push_back(rational_from_double(c));
    return VecQ::dense(std::move(coords));
  }
  std::vector<VecQ::Entry> entries;
  entries.reserve(v.sparse_entries().size());
  for (const auto& e : v.sparse_entries())
    entries.emplace_back(e.first, rational_from_double(e.second));
  return VecQ::sparse(std::move(entries));
}

inline VecF to_float(const VecQ& v) {
  if (v.dense_shape()) {
    std::vector<double> coords;
    coords.reserve(v.dense_coords().size());
    for (const auto& c : v.dense_coords()) coords.push_back(to_double(c));
    return VecF::dense(std::move(coords));
  }
  std::vector<VecF::Entry> entries;
  entries.reserve(v.sparse_entries().size());
  for (const auto& e : v.sparse_entries()) {
    const double c = to_double(e.second);
    if (c != 0.0) entries.emplace_back(e.first, c);
  }
  return VecF::sparse(std::move(entries));
}

}  // namespace unconv
