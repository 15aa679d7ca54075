#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "nullsql/ast.hpp"
#include "nullsql/database.hpp"
#include "nullsql/logic.hpp"
#include "nullsql/relation.hpp"
#include "nullsql/wf.hpp"

namespace nullsql {

/// Value assignment for a context: one row of values per schema in scope,
/// index 0 innermost, with matching lengths.
struct Environment {
  std::vector<std::vector<Value>> rows;

  static Environment empty() { return Environment{}; }
};

/// Splits a concatenated FROM tuple into per-table rows and prepends them to
/// an outer environment. This is how the row under consideration comes into
/// scope at index 0 while enclosing scopes shift outward.
inline Environment env_extend(const Context& from_ctx, const Tuple& row,
                              const Environment& outer) {
  Environment out;
  out.rows.reserve(from_ctx.size() + outer.rows.size());
  std::size_t offset = 0;
  for (const Schema& s : from_ctx) {
    out.rows.emplace_back(row.begin() + offset, row.begin() + offset + s.size());
    offset += s.size();
  }
  out.rows.insert(out.rows.end(), outer.rows.begin(), outer.rows.end());
  return out;
}

// Evaluation plans: the result of elaborating a well-formed expression, a
// pure closure from environments to the judgment's output. Elaboration
// re-checks well-formedness and refuses illegal input, so a plan can only be
// obtained for accepted syntax. Plans are immutable and safe to run
// concurrently against different environments.

struct TermPlan {
  std::function<Value(const Environment&)> run;
};

struct TermsPlan {
  std::size_t arity;
  std::function<Tuple(const Environment&)> run;
};

template <class Logic>
struct CondPlan {
  std::function<typename Logic::TruthValue(const Environment&)> run;
};

template <class Logic>
struct QueryPlan {
  Schema schema;
  std::function<Relation(const Environment&)> run;
};

template <class Logic>
struct TablesPlan {
  Context from_ctx;  // alias schemas, FROM order
  std::size_t arity; // total width of the cross product
  std::function<Relation(const Environment&)> run;
};

template <class Logic>
struct InQueryPlan {
  std::function<bool(const Environment&)> run;
};

inline TermPlan eval_term(const Context& gamma, const Term& t) {
  if (auto err = wf_term(gamma, t)) throw WfException(*err);
  if (t.is_null()) {
    return {[](const Environment&) { return Value::null(); }};
  }
  if (t.is_const()) {
    Value v(t.as_const());
    return {[v](const Environment&) { return v; }};
  }
  const Term::Var& var = t.as_var();
  std::size_t table = var.table;
  std::size_t pos = 0;
  const Schema& schema = gamma[table];
  while (schema[pos] != var.attr) ++pos;
  return {[table, pos](const Environment& env) { return env.rows[table][pos]; }};
}

inline TermsPlan eval_terms(const Context& gamma, const std::vector<Term>& terms) {
  std::vector<TermPlan> plans;
  plans.reserve(terms.size());
  for (const Term& t : terms) plans.push_back(eval_term(gamma, t));
  return {terms.size(), [plans](const Environment& env) {
            Tuple out;
            out.reserve(plans.size());
            for (const TermPlan& p : plans) out.push_back(p.run(env));
            return out;
          }};
}

template <class Logic>
QueryPlan<Logic> eval_query(const Context& gamma, const Database& db, const Query& q);

template <class Logic>
InQueryPlan<Logic> eval_inquery(const Context& gamma, const Database& db,
                                const Query& q);

/// Elaborates a FROM clause to the cartesian product of its sources, first
/// item's columns leftmost. An empty clause denotes the 0-ary singleton, the
/// product unit.
template <class Logic>
TablesPlan<Logic> eval_tables(const Context& gamma, const Database& db,
                              const std::vector<FromItem>& from) {
  WfResult<Context> checked = wf_tables(gamma, db, from);
  if (!checked.ok()) throw WfException(checked.error());
  const Context& from_ctx = checked.value();

  std::vector<std::function<Relation(const Environment&)>> sources;
  sources.reserve(from.size());
  for (const FromItem& item : from) {
    if (item.table.is_base()) {
      Relation rel = db.table(item.table.as_base().name).rel;
      sources.push_back([rel](const Environment&) { return rel; });
    } else {
      QueryPlan<Logic> sub = eval_query<Logic>(gamma, db, *item.table.as_sub().query);
      sources.push_back(sub.run);
    }
  }
  std::size_t arity = 0;
  for (const Schema& s : from_ctx) arity += s.size();
  return {from_ctx, arity, [sources](const Environment& env) {
            Relation acc = rone();
            for (const auto& src : sources) acc = times(acc, src(env));
            return acc;
          }};
}

template <class Logic>
CondPlan<Logic> eval_cond(const Context& gamma, const Database& db, const Cond& c) {
  using TV = typename Logic::TruthValue;
  if (auto err = wf_cond(gamma, db, c)) throw WfException(*err);
  return std::visit(
      [&](const auto& x) -> CondPlan<Logic> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True>) {
          return {[](const Environment&) { return Logic::btrue; }};
        } else if constexpr (std::is_same_v<T, Cond::False>) {
          return {[](const Environment&) { return Logic::bfalse; }};
        } else if constexpr (std::is_same_v<T, Cond::IsNull>) {
          TermPlan tp = eval_term(gamma, x.term);
          bool want_null = x.is_null;
          return {[tp, want_null](const Environment& env) {
            return Logic::of_bool(tp.run(env).is_null() == want_null);
          }};
        } else if constexpr (std::is_same_v<T, Cond::Pred>) {
          TermsPlan tsp = eval_terms(gamma, x.args);
          PredOp op = x.op;
          return {[tsp, op](const Environment& env) {
            return sem_bpred<Logic>(op, tsp.run(env));
          }};
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          TermsPlan tsp = eval_terms(gamma, x.terms);
          QueryPlan<Logic> qp = eval_query<Logic>(gamma, db, *x.query);
          bool is_in = x.is_in;
          return {[tsp, qp, is_in](const Environment& env) -> TV {
            Tuple probe = tsp.run(env);
            Relation result = qp.run(env);
            Relation certain = sel(result, [&](const Tuple& row) {
              for (std::size_t i = 0; i < row.size(); ++i) {
                if (!Logic::is_btrue(veq<Logic>(row[i], probe[i]))) return false;
              }
              return true;
            });
            Relation possible = sel(result, [&](const Tuple& row) {
              for (std::size_t i = 0; i < row.size(); ++i) {
                if (Logic::is_bfalse(veq<Logic>(row[i], probe[i]))) return false;
              }
              return true;
            });
            if (card(certain) > 0) return Logic::of_bool(is_in);
            if (card(possible) > 0) return Logic::bmaybe;
            return Logic::of_bool(!is_in);
          }};
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          InQueryPlan<Logic> ip = eval_inquery<Logic>(gamma, db, *x.query);
          return {[ip](const Environment& env) { return Logic::of_bool(ip.run(env)); }};
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          CondPlan<Logic> l = eval_cond<Logic>(gamma, db, *x.lhs);
          CondPlan<Logic> r = eval_cond<Logic>(gamma, db, *x.rhs);
          return {[l, r](const Environment& env) {
            return Logic::band(l.run(env), r.run(env));
          }};
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          CondPlan<Logic> l = eval_cond<Logic>(gamma, db, *x.lhs);
          CondPlan<Logic> r = eval_cond<Logic>(gamma, db, *x.rhs);
          return {[l, r](const Environment& env) {
            return Logic::bor(l.run(env), r.run(env));
          }};
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          CondPlan<Logic> a = eval_cond<Logic>(gamma, db, *x.arg);
          return {[a](const Environment& env) { return Logic::bneg(a.run(env)); }};
        }
      },
      c.node);
}

namespace detail {

template <class Logic>
QueryPlan<Logic> eval_selection(const Context& gamma, const Database& db,
                                bool distinct, const std::vector<Term>& terms,
                                Schema schema, const std::vector<FromItem>& from,
                                const Cond& where) {
  TablesPlan<Logic> tables = eval_tables<Logic>(gamma, db, from);
  Context inner = extend(tables.from_ctx, gamma);
  CondPlan<Logic> cond = eval_cond<Logic>(inner, db, where);
  TermsPlan prj = eval_terms(inner, terms);
  Context from_ctx = tables.from_ctx;
  std::size_t width = prj.arity;
  auto run = [tables, cond, prj, from_ctx, width, distinct](const Environment& env) {
    Relation source = tables.run(env);
    Relation filtered = sel(source, [&](const Tuple& row) {
      return Logic::is_btrue(cond.run(env_extend(from_ctx, row, env)));
    });
    Relation projected = sum(filtered, width, [&](const Tuple& row) {
      return prj.run(env_extend(from_ctx, row, env));
    });
    return distinct ? flat(projected) : projected;
  };
  return {std::move(schema), std::move(run)};
}

}  // namespace detail

template <class Logic>
QueryPlan<Logic> eval_query(const Context& gamma, const Database& db, const Query& q) {
  WfResult<Schema> checked = wf_query(gamma, db, q);
  if (!checked.ok()) throw WfException(checked.error());
  const Schema& schema = checked.value();

  if (const auto* s = std::get_if<Query::Select>(&q.node)) {
    std::vector<Term> terms;
    terms.reserve(s->items.size());
    for (const SelectItem& item : s->items) terms.push_back(item.term);
    return detail::eval_selection<Logic>(gamma, db, s->distinct, terms, schema,
                                         s->from, s->where);
  }
  if (const auto* s = std::get_if<Query::SelectStar>(&q.node)) {
    // The star stands for the full attribute list of the FROM clause.
    WfResult<Context> from_ctx = wf_tables(gamma, db, s->from);
    std::vector<Term> terms = detail::star_terms(from_ctx.value());
    return detail::eval_selection<Logic>(gamma, db, s->distinct, terms, schema,
                                         s->from, s->where);
  }
  const auto& op = std::get<Query::SetOp>(q.node);
  QueryPlan<Logic> lhs = eval_query<Logic>(gamma, db, *op.lhs);
  QueryPlan<Logic> rhs = eval_query<Logic>(gamma, db, *op.rhs);
  SetOpKind kind = op.kind;
  bool all = op.all;
  auto run = [lhs, rhs, kind, all](const Environment& env) {
    Relation a = lhs.run(env);
    Relation b = rhs.run(env);
    switch (kind) {
      case SetOpKind::Union: {
        Relation s = plus(a, b);
        return all ? s : flat(s);
      }
      case SetOpKind::Intersect: {
        Relation s = inter(a, b);
        return all ? s : flat(s);
      }
      default:
        return all ? minus(a, b) : minus(flat(a), b);
    }
  };
  return {schema, std::move(run)};
}

/// Elaborates a query for an emptiness test. SELECT * here only filters (no
/// projection is needed to decide emptiness), which is what permits the
/// relaxed star rule; the DISTINCT/ALL flags are still applied first.
template <class Logic>
InQueryPlan<Logic> eval_inquery(const Context& gamma, const Database& db,
                                const Query& q) {
  if (auto err = wf_inquery(gamma, db, q)) throw WfException(*err);

  if (const auto* s = std::get_if<Query::Select>(&q.node)) {
    std::vector<Term> terms;
    terms.reserve(s->items.size());
    for (const SelectItem& item : s->items) terms.push_back(item.term);
    QueryPlan<Logic> plan = detail::eval_selection<Logic>(
        gamma, db, s->distinct, terms, Schema{}, s->from, s->where);
    return {[plan](const Environment& env) { return card(plan.run(env)) > 0; }};
  }
  if (const auto* s = std::get_if<Query::SelectStar>(&q.node)) {
    TablesPlan<Logic> tables = eval_tables<Logic>(gamma, db, s->from);
    Context inner = detail::extend(tables.from_ctx, gamma);
    CondPlan<Logic> cond = eval_cond<Logic>(inner, db, s->where);
    Context from_ctx = tables.from_ctx;
    bool distinct = s->distinct;
    return {[tables, cond, from_ctx, distinct](const Environment& env) {
      Relation source = tables.run(env);
      Relation filtered = sel(source, [&](const Tuple& row) {
        return Logic::is_btrue(cond.run(env_extend(from_ctx, row, env)));
      });
      return card(distinct ? flat(filtered) : filtered) > 0;
    }};
  }
  const auto& op = std::get<Query::SetOp>(q.node);
  QueryPlan<Logic> lhs = eval_query<Logic>(gamma, db, *op.lhs);
  QueryPlan<Logic> rhs = eval_query<Logic>(gamma, db, *op.rhs);
  SetOpKind kind = op.kind;
  bool all = op.all;
  return {[lhs, rhs, kind, all](const Environment& env) {
    Relation a = lhs.run(env);
    Relation b = rhs.run(env);
    switch (kind) {
      case SetOpKind::Union: {
        Relation s = plus(a, b);
        return card(all ? s : flat(s)) > 0;
      }
      case SetOpKind::Intersect: {
        Relation s = inter(a, b);
        return card(all ? s : flat(s)) > 0;
      }
      default:
        return card(all ? minus(a, b) : minus(flat(a), b)) > 0;
    }
  }};
}

}  // namespace nullsql
