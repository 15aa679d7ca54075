#pragma once

// Reference evaluator used for differential testing: naive nested loops over
// unsorted row lists, multiplicities counted directly by linear scans. It
// shares the truth-value module and the AST with the main evaluator but none
// of the relation machinery, so the two compute the same semantics along
// disjoint paths.

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "nullsql/ast.hpp"
#include "nullsql/logic.hpp"
#include "nullsql/value.hpp"

namespace nullsql::oracle {

struct RawTable {
  Schema schema;
  std::vector<Tuple> rows;
};

using RawDatabase = std::map<Name, RawTable>;

/// Environments are plain rows; the matching context travels alongside.
using RawEnv = std::vector<std::vector<Value>>;

namespace detail {

inline std::size_t count_occ(const std::vector<Tuple>& rows, const Tuple& t) {
  return static_cast<std::size_t>(std::count(rows.begin(), rows.end(), t));
}

inline std::vector<Tuple> dedup(const std::vector<Tuple>& rows) {
  std::vector<Tuple> out;
  for (const Tuple& t : rows) {
    if (count_occ(out, t) == 0) out.push_back(t);
  }
  return out;
}

inline std::vector<Tuple> bag_minus(const std::vector<Tuple>& l1,
                                    const std::vector<Tuple>& l2) {
  std::vector<Tuple> out;
  for (const Tuple& t : dedup(l1)) {
    std::size_t n1 = count_occ(l1, t);
    std::size_t n2 = count_occ(l2, t);
    for (std::size_t k = n2; k < n1; ++k) out.push_back(t);
  }
  return out;
}

inline std::vector<Tuple> bag_inter(const std::vector<Tuple>& l1,
                                    const std::vector<Tuple>& l2) {
  std::vector<Tuple> out;
  for (const Tuple& t : dedup(l1)) {
    std::size_t n = std::min(count_occ(l1, t), count_occ(l2, t));
    for (std::size_t k = 0; k < n; ++k) out.push_back(t);
  }
  return out;
}

}  // namespace detail

inline Value eval_term(const Context& ctx, const RawEnv& env, const Term& t) {
  if (t.is_null()) return Value::null();
  if (t.is_const()) return Value(t.as_const());
  const Term::Var& v = t.as_var();
  const Schema& schema = ctx[v.table];
  std::size_t pos = 0;
  while (schema[pos] != v.attr) ++pos;
  return env[v.table][pos];
}

template <class Logic>
std::vector<Tuple> eval_query(const RawDatabase& db, const Context& ctx,
                              const RawEnv& env, const Query& q);

template <class Logic>
bool eval_inquery(const RawDatabase& db, const Context& ctx, const RawEnv& env,
                  const Query& q);

template <class Logic>
typename Logic::TruthValue eval_cond(const RawDatabase& db, const Context& ctx,
                                     const RawEnv& env, const Cond& c) {
  using TV = typename Logic::TruthValue;
  return std::visit(
      [&](const auto& x) -> TV {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True>) {
          return Logic::btrue;
        } else if constexpr (std::is_same_v<T, Cond::False>) {
          return Logic::bfalse;
        } else if constexpr (std::is_same_v<T, Cond::IsNull>) {
          return Logic::of_bool(eval_term(ctx, env, x.term).is_null() == x.is_null);
        } else if constexpr (std::is_same_v<T, Cond::Pred>) {
          std::vector<Value> args;
          for (const Term& t : x.args) args.push_back(eval_term(ctx, env, t));
          return sem_bpred<Logic>(x.op, args);
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          Tuple probe;
          for (const Term& t : x.terms) probe.push_back(eval_term(ctx, env, t));
          std::vector<Tuple> rows = eval_query<Logic>(db, ctx, env, *x.query);
          std::size_t certain = 0, possible = 0;
          for (const Tuple& row : rows) {
            bool all_true = true, none_false = true;
            for (std::size_t i = 0; i < row.size(); ++i) {
              auto v = veq<Logic>(row[i], probe[i]);
              if (!Logic::is_btrue(v)) all_true = false;
              if (Logic::is_bfalse(v)) none_false = false;
            }
            if (all_true) ++certain;
            if (none_false) ++possible;
          }
          if (certain > 0) return Logic::of_bool(x.is_in);
          if (possible > 0) return Logic::bmaybe;
          return Logic::of_bool(!x.is_in);
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          return Logic::of_bool(eval_inquery<Logic>(db, ctx, env, *x.query));
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          return Logic::band(eval_cond<Logic>(db, ctx, env, *x.lhs),
                             eval_cond<Logic>(db, ctx, env, *x.rhs));
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          return Logic::bor(eval_cond<Logic>(db, ctx, env, *x.lhs),
                            eval_cond<Logic>(db, ctx, env, *x.rhs));
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          return Logic::bneg(eval_cond<Logic>(db, ctx, env, *x.arg));
        }
      },
      c.node);
}

namespace detail {

template <class Logic>
struct FromExpansion {
  Context aliases;
  std::vector<std::vector<Tuple>> source_rows;
};

template <class Logic>
FromExpansion<Logic> expand_from(const RawDatabase& db, const Context& ctx,
                                 const RawEnv& env, const std::vector<FromItem>& from) {
  FromExpansion<Logic> out;
  for (const FromItem& item : from) {
    out.aliases.push_back(item.alias);
    if (item.table.is_base()) {
      out.source_rows.push_back(db.at(item.table.as_base().name).rows);
    } else {
      out.source_rows.push_back(eval_query<Logic>(db, ctx, env, *item.table.as_sub().query));
    }
  }
  return out;
}

/// Enumerates every combination of one row per source, leftmost source
/// outermost, calling fn with the per-source rows.
template <class Fn>
void for_each_combination(const std::vector<std::vector<Tuple>>& sources, Fn&& fn) {
  std::vector<const Tuple*> chosen(sources.size(), nullptr);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == sources.size()) {
      fn(chosen);
      return;
    }
    for (const Tuple& row : sources[i]) {
      chosen[i] = &row;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

inline RawEnv extend_env(const std::vector<const Tuple*>& chosen, const RawEnv& outer) {
  RawEnv out;
  out.reserve(chosen.size() + outer.size());
  for (const Tuple* row : chosen) out.push_back(*row);
  out.insert(out.end(), outer.begin(), outer.end());
  return out;
}

inline Context extend_ctx(const Context& aliases, const Context& outer) {
  Context out = aliases;
  out.insert(out.end(), outer.begin(), outer.end());
  return out;
}

}  // namespace detail

template <class Logic>
std::vector<Tuple> eval_query(const RawDatabase& db, const Context& ctx,
                              const RawEnv& env, const Query& q) {
  if (const auto* s = std::get_if<Query::Select>(&q.node)) {
    auto from = detail::expand_from<Logic>(db, ctx, env, s->from);
    Context inner_ctx = detail::extend_ctx(from.aliases, ctx);
    std::vector<Tuple> out;
    detail::for_each_combination(from.source_rows, [&](const auto& chosen) {
      RawEnv inner = detail::extend_env(chosen, env);
      if (!Logic::is_btrue(eval_cond<Logic>(db, inner_ctx, inner, s->where))) return;
      Tuple row;
      for (const SelectItem& item : s->items) {
        row.push_back(eval_term(inner_ctx, inner, item.term));
      }
      out.push_back(std::move(row));
    });
    return s->distinct ? detail::dedup(out) : out;
  }
  if (const auto* s = std::get_if<Query::SelectStar>(&q.node)) {
    auto from = detail::expand_from<Logic>(db, ctx, env, s->from);
    Context inner_ctx = detail::extend_ctx(from.aliases, ctx);
    std::vector<Tuple> out;
    detail::for_each_combination(from.source_rows, [&](const auto& chosen) {
      RawEnv inner = detail::extend_env(chosen, env);
      if (!Logic::is_btrue(eval_cond<Logic>(db, inner_ctx, inner, s->where))) return;
      Tuple row;
      for (const Tuple* part : chosen) row.insert(row.end(), part->begin(), part->end());
      out.push_back(std::move(row));
    });
    return s->distinct ? detail::dedup(out) : out;
  }
  const auto& op = std::get<Query::SetOp>(q.node);
  std::vector<Tuple> lhs = eval_query<Logic>(db, ctx, env, *op.lhs);
  std::vector<Tuple> rhs = eval_query<Logic>(db, ctx, env, *op.rhs);
  switch (op.kind) {
    case SetOpKind::Union: {
      lhs.insert(lhs.end(), rhs.begin(), rhs.end());
      return op.all ? lhs : detail::dedup(lhs);
    }
    case SetOpKind::Intersect: {
      std::vector<Tuple> s = detail::bag_inter(lhs, rhs);
      return op.all ? s : detail::dedup(s);
    }
    default:
      return op.all ? detail::bag_minus(lhs, rhs)
                    : detail::bag_minus(detail::dedup(lhs), rhs);
  }
}

template <class Logic>
bool eval_inquery(const RawDatabase& db, const Context& ctx, const RawEnv& env,
                  const Query& q) {
  if (const auto* s = std::get_if<Query::Select>(&q.node)) {
    auto from = detail::expand_from<Logic>(db, ctx, env, s->from);
    Context inner_ctx = detail::extend_ctx(from.aliases, ctx);
    bool nonempty = false;
    detail::for_each_combination(from.source_rows, [&](const auto& chosen) {
      RawEnv inner = detail::extend_env(chosen, env);
      if (Logic::is_btrue(eval_cond<Logic>(db, inner_ctx, inner, s->where))) {
        nonempty = true;
      }
    });
    return nonempty;
  }
  if (const auto* s = std::get_if<Query::SelectStar>(&q.node)) {
    auto from = detail::expand_from<Logic>(db, ctx, env, s->from);
    Context inner_ctx = detail::extend_ctx(from.aliases, ctx);
    bool nonempty = false;
    detail::for_each_combination(from.source_rows, [&](const auto& chosen) {
      RawEnv inner = detail::extend_env(chosen, env);
      if (Logic::is_btrue(eval_cond<Logic>(db, inner_ctx, inner, s->where))) {
        nonempty = true;
      }
    });
    return nonempty;
  }
  const auto& op = std::get<Query::SetOp>(q.node);
  std::vector<Tuple> lhs = eval_query<Logic>(db, ctx, env, *op.lhs);
  std::vector<Tuple> rhs = eval_query<Logic>(db, ctx, env, *op.rhs);
  switch (op.kind) {
    case SetOpKind::Union:
      return !lhs.empty() || !rhs.empty();
    case SetOpKind::Intersect:
      return !detail::bag_inter(lhs, rhs).empty();
    default:
      return op.all ? !detail::bag_minus(lhs, rhs).empty()
                    : !detail::bag_minus(detail::dedup(lhs), rhs).empty();
  }
}

}  // namespace nullsql::oracle
