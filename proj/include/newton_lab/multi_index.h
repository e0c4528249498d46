#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

#include "newton_lab/errors.h"

namespace newton_lab {

/// Integer exponent vector. The unsigned flavour (MultiIndex) holds
/// polynomial exponents beta/alpha; the signed flavour (Frequency) holds
/// trigonometric frequencies theta.
///
/// Ordering is graded-lexicographic: first by |v| (sum of absolute entries),
/// then entry by entry with the larger leading entry first, so that in two
/// variables the degree-one indices come out as (1,0), (0,1).
template <bool Signed>
class IndexVector {
 public:
  IndexVector() = default;

  explicit IndexVector(std::vector<int> entries) : entries_(std::move(entries)) { validate(); }

  IndexVector(std::initializer_list<int> entries) : entries_(entries) { validate(); }

  static IndexVector zero(int m) { return IndexVector(std::vector<int>(static_cast<std::size_t>(m), 0)); }

  int dim() const noexcept { return static_cast<int>(entries_.size()); }

  int operator[](std::size_t j) const { return entries_[j]; }

  std::span<const int> entries() const noexcept { return entries_; }

  /// Sum of absolute entries.
  int degree() const noexcept {
    int s = 0;
    for (int e : entries_) s += e < 0 ? -e : e;
    return s;
  }

  bool is_zero() const noexcept {
    for (int e : entries_)
      if (e != 0) return false;
    return true;
  }

  friend bool operator==(const IndexVector&, const IndexVector&) = default;

  friend std::strong_ordering operator<=>(const IndexVector& a, const IndexVector& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    if (auto c = a.dim() <=> b.dim(); c != 0) return c;
    for (std::size_t j = 0; j < a.entries_.size(); ++j) {
      if (a.entries_[j] != b.entries_[j]) return b.entries_[j] <=> a.entries_[j];
    }
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const IndexVector& v) {
    os << '(';
    for (std::size_t j = 0; j < v.entries_.size(); ++j) os << (j ? "," : "") << v.entries_[j];
    return os << ')';
  }

 private:
  void validate() const {
    if constexpr (!Signed) {
      for (int e : entries_)
        if (e < 0) throw DomainError("multi-index entries must be nonnegative");
    }
  }

  std::vector<int> entries_;
};

using MultiIndex = IndexVector<false>;
using Frequency = IndexVector<true>;

/// beta! = prod_j beta_j!
double factorial_product(const MultiIndex& beta);

}  // namespace newton_lab
