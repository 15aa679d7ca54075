#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullsql/value.hpp"

namespace nullsql {

/// An arity-indexed finite multiset of tuples with natural multiplicities,
/// kept as a canonically sorted row list. Because the representation is
/// canonical, two relations are equal as data exactly when they are equal as
/// multisets, so structural equality is extensional equality.
class Relation {
 public:
  /// Canonicalizing constructor: sorts the rows. Rejects any row whose
  /// length differs from the arity, naming the offending row index.
  static Relation from_rows(std::size_t arity, std::vector<Tuple> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != arity) {
        throw std::invalid_argument("relation row " + std::to_string(i) +
                                    " has length " + std::to_string(rows[i].size()) +
                                    ", expected arity " + std::to_string(arity));
      }
    }
    std::sort(rows.begin(), rows.end());
    return Relation(arity, std::move(rows));
  }

  static Relation empty(std::size_t arity) { return Relation(arity, {}); }

  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Tuple>& rows() const noexcept { return rows_; }

  /// Multiplicity of t. Purely syntactic: NULL matches NULL as data.
  std::size_t memb(const Tuple& t) const {
    require_arity(t);
    auto [lo, hi] = std::equal_range(rows_.begin(), rows_.end(), t);
    return static_cast<std::size_t>(hi - lo);
  }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  Relation(std::size_t arity, std::vector<Tuple> sorted_rows)
      : arity_(arity), rows_(std::move(sorted_rows)) {
    assert(std::is_sorted(rows_.begin(), rows_.end()));
#ifndef NDEBUG
    for (const Tuple& r : rows_) assert(r.size() == arity_);
#endif
  }

  void require_arity(const Tuple& t) const {
    if (t.size() != arity_) {
      throw std::invalid_argument("tuple arity " + std::to_string(t.size()) +
                                  " does not match relation arity " +
                                  std::to_string(arity_));
    }
  }

  friend Relation plus(const Relation&, const Relation&);
  friend Relation minus(const Relation&, const Relation&);
  friend Relation inter(const Relation&, const Relation&);
  friend Relation times(const Relation&, const Relation&);
  friend Relation flat(const Relation&);

  std::size_t arity_;
  std::vector<Tuple> rows_;
};

/// The empty 0-ary relation.
inline Relation rnil() { return Relation::empty(0); }

/// The 0-ary singleton holding one copy of the empty tuple; the unit of the
/// cartesian product.
inline Relation rone() { return Relation::from_rows(0, {Tuple{}}); }

namespace detail {

inline void require_same_arity(const Relation& a, const Relation& b) {
  if (a.arity() != b.arity()) {
    throw std::invalid_argument("relation arity mismatch: " +
                                std::to_string(a.arity()) + " vs " +
                                std::to_string(b.arity()));
  }
}

}  // namespace detail

/// Disjoint (additive) union: multiplicities add.
inline Relation plus(const Relation& r1, const Relation& r2) {
  detail::require_same_arity(r1, r2);
  std::vector<Tuple> out;
  out.reserve(r1.rows().size() + r2.rows().size());
  std::merge(r1.rows().begin(), r1.rows().end(), r2.rows().begin(),
             r2.rows().end(), std::back_inserter(out));
  return Relation(r1.arity(), std::move(out));
}

/// Bag difference: multiplicities subtract, truncated at zero.
inline Relation minus(const Relation& r1, const Relation& r2) {
  detail::require_same_arity(r1, r2);
  std::vector<Tuple> out;
  auto it1 = r1.rows().begin();
  auto it2 = r2.rows().begin();
  const auto end1 = r1.rows().end();
  const auto end2 = r2.rows().end();
  while (it1 != end1) {
    auto run1 = std::upper_bound(it1, end1, *it1);
    it2 = std::lower_bound(it2, end2, *it1);
    auto run2 = std::upper_bound(it2, end2, *it1);
    auto n1 = static_cast<std::size_t>(run1 - it1);
    auto n2 = static_cast<std::size_t>(run2 - it2);
    for (std::size_t k = n2; k < n1; ++k) out.push_back(*it1);
    it1 = run1;
    it2 = run2;
  }
  return Relation(r1.arity(), std::move(out));
}

/// Bag intersection: pointwise minimum of multiplicities.
inline Relation inter(const Relation& r1, const Relation& r2) {
  detail::require_same_arity(r1, r2);
  std::vector<Tuple> out;
  auto it1 = r1.rows().begin();
  auto it2 = r2.rows().begin();
  const auto end1 = r1.rows().end();
  const auto end2 = r2.rows().end();
  while (it1 != end1 && it2 != end2) {
    if (*it1 < *it2) {
      it1 = std::lower_bound(it1, end1, *it2);
    } else if (*it2 < *it1) {
      it2 = std::lower_bound(it2, end2, *it1);
    } else {
      auto run1 = std::upper_bound(it1, end1, *it1);
      auto run2 = std::upper_bound(it2, end2, *it1);
      auto n = std::min(run1 - it1, run2 - it2);
      for (decltype(n) k = 0; k < n; ++k) out.push_back(*it1);
      it1 = run1;
      it2 = run2;
    }
  }
  return Relation(r1.arity(), std::move(out));
}

/// Cartesian product; the result pairs every row of r1 with every row of r2
/// by concatenation, so the arity is the sum of the input arities.
inline Relation times(const Relation& r1, const Relation& r2) {
  std::vector<Tuple> out;
  out.reserve(r1.rows().size() * r2.rows().size());
  for (const Tuple& a : r1.rows()) {
    for (const Tuple& b : r2.rows()) {
      Tuple t = a;
      t.insert(t.end(), b.begin(), b.end());
      out.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end());
  return Relation(r1.arity() + r2.arity(), std::move(out));
}

/// Bag comprehension: maps every row through f (a total map to out_arity
/// tuples), keeping multiplicities. Rows mapping to the same image add up.
template <class F>
Relation sum(const Relation& r, std::size_t out_arity, F&& f) {
  std::vector<Tuple> out;
  out.reserve(r.rows().size());
  for (const Tuple& t : r.rows()) {
    Tuple image = f(t);
    if (image.size() != out_arity) {
      throw std::invalid_argument("sum: map produced a tuple of length " +
                                  std::to_string(image.size()) + ", expected " +
                                  std::to_string(out_arity));
    }
    out.push_back(std::move(image));
  }
  return Relation::from_rows(out_arity, std::move(out));
}

/// Filter: keeps rows satisfying p with their multiplicities.
template <class P>
Relation sel(const Relation& r, P&& p) {
  std::vector<Tuple> out;
  for (const Tuple& t : r.rows()) {
    if (p(t)) out.push_back(t);
  }
  return Relation::from_rows(r.arity(), std::move(out));
}

/// Duplicate elimination: every present tuple keeps exactly one copy.
inline Relation flat(const Relation& r) {
  std::vector<Tuple> out;
  std::unique_copy(r.rows().begin(), r.rows().end(), std::back_inserter(out));
  return Relation(r.arity(), std::move(out));
}

/// The support: the duplicate-free list of present tuples, in canonical order.
inline std::vector<Tuple> supp(const Relation& r) {
  std::vector<Tuple> out;
  std::unique_copy(r.rows().begin(), r.rows().end(), std::back_inserter(out));
  return out;
}

/// Total row count with multiplicity. Agrees with collapsing every row to the
/// empty tuple and asking for its multiplicity.
inline std::size_t card(const Relation& r) { return r.rows().size(); }

}  // namespace nullsql
