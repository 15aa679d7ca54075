#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nullsql/ast.hpp"
#include "nullsql/database.hpp"

namespace nullsql {

/// n pairwise-distinct generated attribute names. The reserved '?' prefix
/// keeps them apart from anything the ordinary name lexeme can produce.
inline Schema fresh_schema(std::size_t n) {
  Schema out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(std::string(1, kFreshNamePrefix) + "a" + std::to_string(i));
  }
  return out;
}

QueryPtr ttquery(const Database& db, const Query& q);
Cond ttcond(const Database& db, const Cond& c);
Cond ffcond(const Database& db, const Cond& c);

inline TableRef tttable(const Database& db, const TableRef& t) {
  if (t.is_base()) return t;
  return TableRef::subquery(ttquery(db, *t.as_sub().query));
}

namespace detail {

/// NOT IN under certainty semantics: no row of the subquery may match the
/// probe tuple even up to NULLs. The subquery is re-aliased with a fresh
/// schema (its own output schema may repeat names), and the probe terms are
/// lifted across the new binder.
inline Cond not_in_expansion(const Database& db, const std::vector<Term>& terms,
                             const Query& q) {
  Schema aliases = fresh_schema(terms.size());
  Cond chain = Cond::truth();
  for (std::size_t i = terms.size(); i-- > 0;) {
    Term probe = tm_lift(terms[i], 1);
    Cond clause = Cond::disj(
        Cond::is_null(true, Term::var(0, aliases[i])),
        Cond::disj(Cond::is_null(true, probe), Cond::eq(probe, Term::var(0, aliases[i]))));
    chain = Cond::conj(std::move(clause), std::move(chain));
  }
  QueryPtr probe_query = Query::select_star(
      false, {FromItem{TableRef::subquery(ttquery(db, q)), std::move(aliases)}},
      std::move(chain));
  return Cond::negate(Cond::exists(std::move(probe_query)));
}

}  // namespace detail

/// Positive translation: the result is true in Boolean logic exactly when
/// the original condition is true under three-valued logic.
inline Cond ttcond(const Database& db, const Cond& c) {
  return std::visit(
      [&](const auto& x) -> Cond {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True> || std::is_same_v<T, Cond::False> ||
                      std::is_same_v<T, Cond::IsNull> || std::is_same_v<T, Cond::Pred>) {
          return c;
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          if (x.is_in) return Cond::memb(true, x.terms, ttquery(db, *x.query));
          return detail::not_in_expansion(db, x.terms, *x.query);
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          return Cond::exists(ttquery(db, *x.query));
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          return Cond::conj(ttcond(db, *x.lhs), ttcond(db, *x.rhs));
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          return Cond::disj(ttcond(db, *x.lhs), ttcond(db, *x.rhs));
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          return ffcond(db, *x.arg);
        }
      },
      c.node);
}

/// Negative translation: true in Boolean logic exactly when the original is
/// false under three-valued logic. Negation is pushed to the leaves; a
/// falsified predicate additionally asserts that all its arguments are
/// non-null.
inline Cond ffcond(const Database& db, const Cond& c) {
  return std::visit(
      [&](const auto& x) -> Cond {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True>) {
          return Cond::falsity();
        } else if constexpr (std::is_same_v<T, Cond::False>) {
          return Cond::truth();
        } else if constexpr (std::is_same_v<T, Cond::IsNull>) {
          return Cond::is_null(!x.is_null, x.term);
        } else if constexpr (std::is_same_v<T, Cond::Pred>) {
          Cond nonnull = Cond::truth();
          for (std::size_t i = x.args.size(); i-- > 0;) {
            nonnull = Cond::conj(Cond::is_null(false, x.args[i]), std::move(nonnull));
          }
          return Cond::conj(Cond::negate(c), std::move(nonnull));
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          if (x.is_in) return detail::not_in_expansion(db, x.terms, *x.query);
          return Cond::memb(true, x.terms, ttquery(db, *x.query));
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          return Cond::negate(Cond::exists(ttquery(db, *x.query)));
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          return Cond::disj(ffcond(db, *x.lhs), ffcond(db, *x.rhs));
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          return Cond::conj(ffcond(db, *x.lhs), ffcond(db, *x.rhs));
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          return ttcond(db, *x.arg);
        }
      },
      c.node);
}

/// Query translation: structurally recursive; FROM sources and WHERE are
/// translated, select lists and DISTINCT/ALL flags are untouched.
inline QueryPtr ttquery(const Database& db, const Query& q) {
  return std::visit(
      [&](const auto& x) -> QueryPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Query::Select>) {
          std::vector<FromItem> from;
          from.reserve(x.from.size());
          for (const FromItem& item : x.from) {
            from.push_back(FromItem{tttable(db, item.table), item.alias});
          }
          return Query::select(x.distinct, x.items, std::move(from),
                               ttcond(db, x.where));
        } else if constexpr (std::is_same_v<T, Query::SelectStar>) {
          std::vector<FromItem> from;
          from.reserve(x.from.size());
          for (const FromItem& item : x.from) {
            from.push_back(FromItem{tttable(db, item.table), item.alias});
          }
          return Query::select_star(x.distinct, std::move(from), ttcond(db, x.where));
        } else {
          static_assert(std::is_same_v<T, Query::SetOp>);
          return Query::set_op(x.kind, x.all, ttquery(db, *x.lhs), ttquery(db, *x.rhs));
        }
      },
      q.node);
}

}  // namespace nullsql
