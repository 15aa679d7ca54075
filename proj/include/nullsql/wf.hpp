#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

#include "nullsql/ast.hpp"
#include "nullsql/database.hpp"

namespace nullsql {

enum class WfErrorKind {
  UnboundIndex,
  UnknownAttr,
  AmbiguousAttr,
  DupAlias,
  SchemaLenMismatch,
  SetOpSchemaMismatch,
  InArityMismatch,
  PredArityMismatch,
  UnknownTable,
  AmbiguousStar,
};

inline const char* to_string(WfErrorKind k) {
  switch (k) {
    case WfErrorKind::UnboundIndex: return "UnboundIndex";
    case WfErrorKind::UnknownAttr: return "UnknownAttr";
    case WfErrorKind::AmbiguousAttr: return "AmbiguousAttr";
    case WfErrorKind::DupAlias: return "DupAlias";
    case WfErrorKind::SchemaLenMismatch: return "SchemaLenMismatch";
    case WfErrorKind::SetOpSchemaMismatch: return "SetOpSchemaMismatch";
    case WfErrorKind::InArityMismatch: return "InArityMismatch";
    case WfErrorKind::PredArityMismatch: return "PredArityMismatch";
    case WfErrorKind::UnknownTable: return "UnknownTable";
    case WfErrorKind::AmbiguousStar: return "AmbiguousStar";
  }
  return "UnknownError";
}

/// A well-formedness violation: what failed, where, and a readable message.
/// Checking stops at the first (innermost) failure.
struct WfError {
  WfErrorKind kind;
  SourceSpan span{};
  std::string message;
};

class WfException : public std::runtime_error {
 public:
  explicit WfException(WfError e)
      : std::runtime_error(std::string(to_string(e.kind)) + ": " + e.message),
        error_(std::move(e)) {}
  const WfError& error() const { return error_; }

 private:
  WfError error_;
};

/// Either a successfully computed schema/context or the first error.
template <class T>
class WfResult {
 public:
  WfResult(T value) : data_(std::move(value)) {}
  WfResult(WfError error) : data_(std::move(error)) {}

  bool ok() const { return data_.index() == 0; }
  const T& value() const { return std::get<0>(data_); }
  const WfError& error() const { return std::get<1>(data_); }

 private:
  std::variant<T, WfError> data_;
};

/// An attribute reference into one schema is legal only when the name occurs
/// exactly once there.
inline std::optional<WfError> wf_var(const Schema& sigma, const Name& x) {
  auto n = std::count(sigma.begin(), sigma.end(), x);
  if (n == 1) return std::nullopt;
  if (n == 0)
    return WfError{WfErrorKind::UnknownAttr, {}, "attribute " + x + " is not in scope"};
  return WfError{WfErrorKind::AmbiguousAttr, {}, "attribute " + x + " is ambiguous"};
}

/// Constants and NULL are well formed in every context; a reference n.x
/// needs schema n to exist and x to resolve uniquely inside it.
inline std::optional<WfError> wf_term(const Context& gamma, const Term& t) {
  if (!t.is_var()) return std::nullopt;
  const Term::Var& v = t.as_var();
  if (v.table >= gamma.size()) {
    return WfError{WfErrorKind::UnboundIndex, t.span,
                   "table index " + std::to_string(v.table) + " exceeds context depth " +
                       std::to_string(gamma.size())};
  }
  if (auto err = wf_var(gamma[v.table], v.attr)) {
    err->span = t.span;
    return err;
  }
  return std::nullopt;
}

WfResult<Schema> wf_query(const Context& gamma, const Database& db, const Query& q);

/// Checks a FROM clause: every source must expose a natural schema whose
/// length matches its alias, and every alias must be duplicate-free. Returns
/// the alias schemas in FROM order (the context the clause brings in scope).
/// Sources are checked against the enclosing context only; FROM items are
/// not in scope for each other.
inline WfResult<Context> wf_tables(const Context& gamma, const Database& db,
                                   const std::vector<FromItem>& from) {
  Context out;
  out.reserve(from.size());
  for (const FromItem& item : from) {
    std::size_t natural_width = 0;
    if (item.table.is_base()) {
      const Schema* s = db.schema_of(item.table.as_base().name);
      if (!s) {
        return WfError{WfErrorKind::UnknownTable, item.table.span,
                       "unknown table " + item.table.as_base().name};
      }
      natural_width = s->size();
    } else {
      WfResult<Schema> sub = wf_query(gamma, db, *item.table.as_sub().query);
      if (!sub.ok()) return sub.error();
      natural_width = sub.value().size();
    }
    if (natural_width != item.alias.size()) {
      return WfError{WfErrorKind::SchemaLenMismatch, item.table.span,
                     "alias lists " + std::to_string(item.alias.size()) +
                         " attributes but the source has " +
                         std::to_string(natural_width)};
    }
    std::set<Name> seen;
    for (const Name& a : item.alias) {
      if (!seen.insert(a).second) {
        return WfError{WfErrorKind::DupAlias, item.table.span,
                       "alias schema repeats attribute " + a};
      }
    }
    out.push_back(item.alias);
  }
  return out;
}

std::optional<WfError> wf_cond(const Context& gamma, const Database& db, const Cond& c);
std::optional<WfError> wf_inquery(const Context& gamma, const Database& db, const Query& q);

namespace detail {

/// Star expansion order: FROM order, then schema order within each table.
inline std::vector<Term> star_terms(const Context& from_ctx) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < from_ctx.size(); ++i) {
    for (const Name& a : from_ctx[i]) out.push_back(Term::var(i, a));
  }
  return out;
}

inline Schema concat_schemas(const Context& ctx) {
  Schema out;
  for (const Schema& s : ctx) out.insert(out.end(), s.begin(), s.end());
  return out;
}

inline Context extend(const Context& inner, const Context& outer) {
  Context out = inner;
  out.insert(out.end(), outer.begin(), outer.end());
  return out;
}

}  // namespace detail

/// Full query judgment: assigns an output schema. Output schemas may repeat
/// names; only *references* must be unambiguous. A top-level SELECT * must
/// be expandable, i.e. every in-scope attribute name resolves to exactly one
/// FROM table.
inline WfResult<Schema> wf_query(const Context& gamma, const Database& db,
                                 const Query& q) {
  if (const auto* sel = std::get_if<Query::Select>(&q.node)) {
    WfResult<Context> from_ctx = wf_tables(gamma, db, sel->from);
    if (!from_ctx.ok()) return from_ctx.error();
    Context inner = detail::extend(from_ctx.value(), gamma);
    Schema schema;
    for (const SelectItem& item : sel->items) {
      if (auto err = wf_term(inner, item.term)) return *err;
      schema.push_back(item.name);
    }
    if (auto err = wf_cond(inner, db, sel->where)) return *err;
    return schema;
  }
  if (const auto* star = std::get_if<Query::SelectStar>(&q.node)) {
    WfResult<Context> from_ctx = wf_tables(gamma, db, star->from);
    if (!from_ctx.ok()) return from_ctx.error();
    std::set<Name> seen;
    for (const Schema& s : from_ctx.value()) {
      for (const Name& a : s) {
        if (!seen.insert(a).second) {
          return WfError{WfErrorKind::AmbiguousStar, q.span,
                         "star expansion references " + a + " ambiguously"};
        }
      }
    }
    Context inner = detail::extend(from_ctx.value(), gamma);
    for (const Term& t : detail::star_terms(from_ctx.value())) {
      if (auto err = wf_term(inner, t)) return *err;
    }
    if (auto err = wf_cond(inner, db, star->where)) return *err;
    return detail::concat_schemas(from_ctx.value());
  }
  const auto& op = std::get<Query::SetOp>(q.node);
  WfResult<Schema> s1 = wf_query(gamma, db, *op.lhs);
  if (!s1.ok()) return s1.error();
  WfResult<Schema> s2 = wf_query(gamma, db, *op.rhs);
  if (!s2.ok()) return s2.error();
  if (s1.value() != s2.value()) {
    return WfError{WfErrorKind::SetOpSchemaMismatch, q.span,
                   "set operation sides have different schemas"};
  }
  return s1;
}

inline std::optional<WfError> wf_cond(const Context& gamma, const Database& db,
                                      const Cond& c) {
  return std::visit(
      [&](const auto& x) -> std::optional<WfError> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True> || std::is_same_v<T, Cond::False>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Cond::IsNull>) {
          return wf_term(gamma, x.term);
        } else if constexpr (std::is_same_v<T, Cond::Pred>) {
          if (x.args.size() != pred_arity(x.op)) {
            return WfError{WfErrorKind::PredArityMismatch, c.span,
                           "predicate expects " + std::to_string(pred_arity(x.op)) +
                               " arguments, got " + std::to_string(x.args.size())};
          }
          for (const Term& t : x.args) {
            if (auto err = wf_term(gamma, t)) return err;
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          for (const Term& t : x.terms) {
            if (auto err = wf_term(gamma, t)) return err;
          }
          WfResult<Schema> s = wf_query(gamma, db, *x.query);
          if (!s.ok()) return s.error();
          if (x.terms.size() != s.value().size()) {
            return WfError{WfErrorKind::InArityMismatch, c.span,
                           "membership tests " + std::to_string(x.terms.size()) +
                               " terms against a query of width " +
                               std::to_string(s.value().size())};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          return wf_inquery(gamma, db, *x.query);
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          if (auto err = wf_cond(gamma, db, *x.lhs)) return err;
          return wf_cond(gamma, db, *x.rhs);
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          if (auto err = wf_cond(gamma, db, *x.lhs)) return err;
          return wf_cond(gamma, db, *x.rhs);
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          return wf_cond(gamma, db, *x.arg);
        }
      },
      c.node);
}

/// Judgment for queries used only for an emptiness test (under EXISTS).
/// Identical to the full judgment except that SELECT * needs no unambiguous
/// expansion and no schema is produced.
inline std::optional<WfError> wf_inquery(const Context& gamma, const Database& db,
                                         const Query& q) {
  if (const auto* sel = std::get_if<Query::Select>(&q.node)) {
    WfResult<Context> from_ctx = wf_tables(gamma, db, sel->from);
    if (!from_ctx.ok()) return from_ctx.error();
    Context inner = detail::extend(from_ctx.value(), gamma);
    for (const SelectItem& item : sel->items) {
      if (auto err = wf_term(inner, item.term)) return err;
    }
    return wf_cond(inner, db, sel->where);
  }
  if (const auto* star = std::get_if<Query::SelectStar>(&q.node)) {
    WfResult<Context> from_ctx = wf_tables(gamma, db, star->from);
    if (!from_ctx.ok()) return from_ctx.error();
    Context inner = detail::extend(from_ctx.value(), gamma);
    return wf_cond(inner, db, star->where);
  }
  const auto& op = std::get<Query::SetOp>(q.node);
  WfResult<Schema> s1 = wf_query(gamma, db, *op.lhs);
  if (!s1.ok()) return s1.error();
  WfResult<Schema> s2 = wf_query(gamma, db, *op.rhs);
  if (!s2.ok()) return s2.error();
  if (s1.value() != s2.value()) {
    return WfError{WfErrorKind::SetOpSchemaMismatch, q.span,
                   "set operation sides have different schemas"};
  }
  return std::nullopt;
}

}  // namespace nullsql
