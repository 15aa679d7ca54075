#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nullsql/value.hpp"

namespace nullsql {

/// Attribute / table name. Ordinary names never start with the reserved
/// fresh-name prefix '?', which is used only by generated schemas.
using Name = std::string;

inline constexpr char kFreshNamePrefix = '?';

/// Attribute names of one table, in column order.
using Schema = std::vector<Name>;

/// The scoping stack: one schema per table in scope, index 0 innermost.
using Context = std::vector<Schema>;

/// Byte range into the source text a node was parsed from. Spans on
/// programmatically built nodes default to empty and are ignored by
/// structural equality.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Comparison predicates. All binary; they are total over constants, using
/// the global constant order for mixed-kind comparisons.
enum class PredOp { Eq, Neq, Lt, Le, Gt, Ge };

inline constexpr std::size_t pred_arity(PredOp) { return 2; }

inline const char* pred_symbol(PredOp op) {
  switch (op) {
    case PredOp::Eq: return "=";
    case PredOp::Neq: return "<>";
    case PredOp::Lt: return "<";
    case PredOp::Le: return "<=";
    case PredOp::Gt: return ">";
    case PredOp::Ge: return ">=";
  }
  return "?";
}

/// A term: a constant, NULL, or an attribute reference n.x where n is a
/// 0-based de Bruijn index into the context and x an attribute name.
struct Term {
  struct Null {};
  struct Var {
    std::size_t table;
    Name attr;
  };

  std::variant<Null, BaseConst, Var> node;
  SourceSpan span{};

  static Term null() { return Term{Null{}, {}}; }
  static Term constant(BaseConst c) { return Term{std::move(c), {}}; }
  static Term integer(std::int64_t v) { return constant(BaseConst(v)); }
  static Term string(std::string s) { return constant(BaseConst(std::move(s))); }
  static Term var(std::size_t table, Name attr) {
    return Term{Var{table, std::move(attr)}, {}};
  }

  bool is_null() const { return std::holds_alternative<Null>(node); }
  bool is_const() const { return std::holds_alternative<BaseConst>(node); }
  bool is_var() const { return std::holds_alternative<Var>(node); }
  const BaseConst& as_const() const { return std::get<BaseConst>(node); }
  const Var& as_var() const { return std::get<Var>(node); }
};

struct Query;
using QueryPtr = std::shared_ptr<Query>;

/// A FROM-clause source: a stored table referenced by name, or a subquery.
struct TableRef {
  struct Base {
    Name name;
  };
  struct Sub {
    QueryPtr query;
  };

  std::variant<Base, Sub> node;
  SourceSpan span{};

  static TableRef base(Name name) { return TableRef{Base{std::move(name)}, {}}; }
  static TableRef subquery(QueryPtr q) { return TableRef{Sub{std::move(q)}, {}}; }

  bool is_base() const { return std::holds_alternative<Base>(node); }
  const Base& as_base() const { return std::get<Base>(node); }
  const Sub& as_sub() const { return std::get<Sub>(node); }
};

struct Cond;
using CondPtr = std::shared_ptr<Cond>;

/// A WHERE condition.
struct Cond {
  struct True {};
  struct False {};
  struct IsNull {
    bool is_null;  // true: IS NULL, false: IS NOT NULL
    Term term;
  };
  struct Pred {
    PredOp op;
    std::vector<Term> args;
  };
  struct Memb {
    bool is_in;  // true: IN, false: NOT IN
    std::vector<Term> terms;
    QueryPtr query;
  };
  struct Exists {
    QueryPtr query;
  };
  struct And {
    CondPtr lhs, rhs;
  };
  struct Or {
    CondPtr lhs, rhs;
  };
  struct Not {
    CondPtr arg;
  };

  std::variant<True, False, IsNull, Pred, Memb, Exists, And, Or, Not> node;
  SourceSpan span{};

  static Cond truth() { return Cond{True{}, {}}; }
  static Cond falsity() { return Cond{False{}, {}}; }
  static Cond is_null(bool null, Term t) {
    return Cond{IsNull{null, std::move(t)}, {}};
  }
  static Cond pred(PredOp op, std::vector<Term> args) {
    return Cond{Pred{op, std::move(args)}, {}};
  }
  static Cond eq(Term a, Term b) {
    return pred(PredOp::Eq, {std::move(a), std::move(b)});
  }
  static Cond memb(bool is_in, std::vector<Term> terms, QueryPtr q) {
    return Cond{Memb{is_in, std::move(terms), std::move(q)}, {}};
  }
  static Cond exists(QueryPtr q) { return Cond{Exists{std::move(q)}, {}}; }
  static Cond conj(Cond a, Cond b) {
    return Cond{And{std::make_shared<Cond>(std::move(a)),
                    std::make_shared<Cond>(std::move(b))},
                {}};
  }
  static Cond disj(Cond a, Cond b) {
    return Cond{Or{std::make_shared<Cond>(std::move(a)),
                   std::make_shared<Cond>(std::move(b))},
                {}};
  }
  static Cond negate(Cond c) {
    return Cond{Not{std::make_shared<Cond>(std::move(c))}, {}};
  }
};

/// One SELECT-list entry: term plus its mandatory output name.
struct SelectItem {
  Term term;
  Name name;
};

/// One FROM-clause entry: source plus its mandatory alias schema.
struct FromItem {
  TableRef table;
  Schema alias;
};

enum class SetOpKind { Union, Intersect, Except };

/// A query. DISTINCT on selections and the absence of ALL on set operations
/// both collapse the result to a set.
struct Query {
  struct Select {
    bool distinct;
    std::vector<SelectItem> items;
    std::vector<FromItem> from;
    Cond where;
  };
  struct SelectStar {
    bool distinct;
    std::vector<FromItem> from;
    Cond where;
  };
  struct SetOp {
    SetOpKind kind;
    bool all;
    QueryPtr lhs, rhs;
  };

  std::variant<Select, SelectStar, SetOp> node;
  SourceSpan span{};

  static QueryPtr select(bool distinct, std::vector<SelectItem> items,
                         std::vector<FromItem> from, Cond where) {
    return std::make_shared<Query>(
        Query{Select{distinct, std::move(items), std::move(from), std::move(where)}, {}});
  }
  static QueryPtr select_star(bool distinct, std::vector<FromItem> from, Cond where) {
    return std::make_shared<Query>(
        Query{SelectStar{distinct, std::move(from), std::move(where)}, {}});
  }
  static QueryPtr set_op(SetOpKind kind, bool all, QueryPtr lhs, QueryPtr rhs) {
    return std::make_shared<Query>(
        Query{SetOp{kind, all, std::move(lhs), std::move(rhs)}, {}});
  }
};

// Structural (deep) equality, ignoring source spans.

bool ast_equal(const Query& a, const Query& b);

inline bool ast_equal(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  if (a.is_const()) return a.as_const() == b.as_const();
  if (a.is_var())
    return a.as_var().table == b.as_var().table && a.as_var().attr == b.as_var().attr;
  return true;
}

inline bool ast_equal(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ast_equal(a[i], b[i])) return false;
  return true;
}

inline bool ast_equal(const TableRef& a, const TableRef& b) {
  if (a.node.index() != b.node.index()) return false;
  if (a.is_base()) return a.as_base().name == b.as_base().name;
  return ast_equal(*a.as_sub().query, *b.as_sub().query);
}

inline bool ast_equal(const Cond& a, const Cond& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True> || std::is_same_v<T, Cond::False>) {
          return true;
        } else if constexpr (std::is_same_v<T, Cond::IsNull>) {
          const auto& y = std::get<Cond::IsNull>(b.node);
          return x.is_null == y.is_null && ast_equal(x.term, y.term);
        } else if constexpr (std::is_same_v<T, Cond::Pred>) {
          const auto& y = std::get<Cond::Pred>(b.node);
          return x.op == y.op && ast_equal(x.args, y.args);
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          const auto& y = std::get<Cond::Memb>(b.node);
          return x.is_in == y.is_in && ast_equal(x.terms, y.terms) &&
                 ast_equal(*x.query, *y.query);
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          return ast_equal(*x.query, *std::get<Cond::Exists>(b.node).query);
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          const auto& y = std::get<Cond::And>(b.node);
          return ast_equal(*x.lhs, *y.lhs) && ast_equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          const auto& y = std::get<Cond::Or>(b.node);
          return ast_equal(*x.lhs, *y.lhs) && ast_equal(*x.rhs, *y.rhs);
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          return ast_equal(*x.arg, *std::get<Cond::Not>(b.node).arg);
        }
      },
      a.node);
}

inline bool ast_equal(const std::vector<FromItem>& a, const std::vector<FromItem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].alias != b[i].alias || !ast_equal(a[i].table, b[i].table)) return false;
  }
  return true;
}

inline bool ast_equal(const Query& a, const Query& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Query::Select>) {
          const auto& y = std::get<Query::Select>(b.node);
          if (x.distinct != y.distinct || x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (x.items[i].name != y.items[i].name ||
                !ast_equal(x.items[i].term, y.items[i].term))
              return false;
          }
          return ast_equal(x.from, y.from) && ast_equal(x.where, y.where);
        } else if constexpr (std::is_same_v<T, Query::SelectStar>) {
          const auto& y = std::get<Query::SelectStar>(b.node);
          return x.distinct == y.distinct && ast_equal(x.from, y.from) &&
                 ast_equal(x.where, y.where);
        } else {
          static_assert(std::is_same_v<T, Query::SetOp>);
          const auto& y = std::get<Query::SetOp>(b.node);
          return x.kind == y.kind && x.all == y.all && ast_equal(*x.lhs, *y.lhs) &&
                 ast_equal(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

/// Shifts every de Bruijn table index up by k; constants and NULL unchanged.
inline Term tm_lift(const Term& t, std::size_t k) {
  if (!t.is_var()) return t;
  Term out = t;
  std::get<Term::Var>(out.node).table += k;
  return out;
}

/// Substitutes bound terms for index-0 attribute references in a select
/// list. The bindings pair each attribute name the enclosing alias schema
/// binds with the term it stands for; this is only meaningful for the
/// single-table unnesting rewrite, where the substituted terms already live
/// in the inner query's context. Variables at index >= 1 are untouched.
inline std::vector<SelectItem> subst_select_list(
    const std::vector<SelectItem>& selections,
    const std::vector<std::pair<Name, Term>>& bindings) {
  std::vector<SelectItem> out;
  out.reserve(selections.size());
  for (const SelectItem& item : selections) {
    if (item.term.is_var() && item.term.as_var().table == 0) {
      const Name& x = item.term.as_var().attr;
      const Term* found = nullptr;
      std::size_t hits = 0;
      for (const auto& [name, tm] : bindings) {
        if (name == x) {
          found = &tm;
          ++hits;
        }
      }
      if (hits != 1) {
        throw std::invalid_argument("substitution: attribute " + x +
                                    (hits == 0 ? " is unbound" : " is bound more than once"));
      }
      out.push_back(SelectItem{*found, item.name});
    } else {
      out.push_back(item);
    }
  }
  return out;
}

/// Extension point for additional named predicates beyond the built-in
/// comparisons. Ships empty; the concrete syntax does not surface it.
struct PredicateRegistry {
  struct Entry {
    std::size_t arity;
    std::function<bool(const std::vector<BaseConst>&)> fn;
  };
  std::map<Name, Entry> entries;
};

}  // namespace nullsql
