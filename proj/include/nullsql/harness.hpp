#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullsql/ast.hpp"
#include "nullsql/database.hpp"
#include "nullsql/eval.hpp"
#include "nullsql/logic.hpp"
#include "nullsql/oracle.hpp"
#include "nullsql/relation.hpp"
#include "nullsql/wf.hpp"

namespace nullsql::harness {

/// Bounds for randomized instance generation. The same seed always produces
/// the same stream.
struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t max_rows = 4;
  std::vector<Value> value_domain = {Value::null(), Value::integer(0),
                                     Value::integer(1), Value::integer(2)};
  std::size_t max_query_depth = 3;
  std::size_t max_tables_per_from = 2;
  std::size_t max_select_width = 3;
  std::size_t trials = 100;
};

/// Deterministic per-index seed derivation (splitmix finalizer), so trials
/// can run independently while serial and parallel runs agree. Index 0 maps
/// to the seed itself: re-running with a reported trial seed reproduces that
/// trial as trial 0.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  if (index == 0) return seed;
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * index;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Random source. Bounded draws go through modulo so the stream depends only
/// on the engine, which the standard pins down exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(eng_() % n);
  }

  std::size_t between(std::size_t lo, std::size_t hi) {  // inclusive bounds
    return lo + below(hi - lo + 1);
  }

  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 eng_;
};

using TableSchemas = std::map<Name, Schema>;

/// A database whose tables exist with the right schemas but no rows; enough
/// for well-formedness checking during generation.
inline Database schema_only_db(const TableSchemas& tables) {
  Database db;
  for (const auto& [name, schema] : tables) {
    db.add_table(name, schema, Relation::empty(schema.size()));
  }
  return db;
}

/// Populates every table with 0..max_rows rows drawn uniformly from the
/// value domain. Deterministic in cfg.seed.
inline Database gen_database(const GenConfig& cfg, const TableSchemas& tables) {
  Rng rng(cfg.seed);
  Database db;
  for (const auto& [name, schema] : tables) {
    std::size_t nrows = rng.below(cfg.max_rows + 1);
    std::vector<Tuple> rows;
    rows.reserve(nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
      Tuple row;
      row.reserve(schema.size());
      for (std::size_t j = 0; j < schema.size(); ++j) {
        row.push_back(rng.pick(cfg.value_domain));
      }
      rows.push_back(std::move(row));
    }
    db.add_table(name, schema, Relation::from_rows(schema.size(), std::move(rows)));
  }
  return db;
}

namespace detail {

inline const std::vector<Name>& name_pool() {
  static const std::vector<Name> pool = {"A", "B", "C", "D", "E", "F",
                                         "G", "H", "I", "J", "K", "L"};
  return pool;
}

inline Schema distinct_names(Rng& rng, std::size_t n) {
  std::vector<Name> shuffled = name_pool();
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  }
  Schema out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < shuffled.size() ? shuffled[i] : "N" + std::to_string(i));
  }
  return out;
}

}  // namespace detail

/// Depth-bounded generator of well-formed queries and conditions over a
/// fixed table universe. Everything produced by query() passes the full
/// query judgment in the empty context; inquery() may additionally produce
/// SELECT * shapes that only the relaxed judgment accepts.
class QueryGen {
 public:
  QueryGen(GenConfig cfg, TableSchemas tables, Rng& rng)
      : cfg_(std::move(cfg)), tables_(std::move(tables)),
        db_(schema_only_db(tables_)), rng_(rng) {
    for (const auto& [name, schema] : tables_) {
      table_names_.push_back(name);
      (void)schema;
    }
    if (table_names_.empty()) throw std::invalid_argument("no tables to generate over");
  }

  QueryPtr query(std::size_t depth, const Context& gamma) {
    if (depth == 0) return select(0, gamma, std::nullopt);
    std::size_t roll = rng_.below(10);
    if (roll < 5) return select(depth, gamma, std::nullopt);
    if (roll < 7) return select_star(depth, gamma, /*allow_ambiguous=*/false);
    SetOpKind kind = static_cast<SetOpKind>(rng_.below(3));
    QueryPtr lhs = query(depth - 1, gamma);
    Schema schema = wf_query(gamma, db_, *lhs).value();
    QueryPtr rhs = query_with_schema(depth - 1, gamma, schema);
    return Query::set_op(kind, rng_.chance(1, 2), std::move(lhs), std::move(rhs));
  }

  QueryPtr query_with_schema(std::size_t depth, const Context& gamma,
                             const Schema& schema) {
    if (depth > 0 && rng_.chance(1, 4)) {
      SetOpKind kind = static_cast<SetOpKind>(rng_.below(3));
      return Query::set_op(kind, rng_.chance(1, 2),
                           query_with_schema(depth - 1, gamma, schema),
                           query_with_schema(depth - 1, gamma, schema));
    }
    return select(depth, gamma, schema);
  }

  /// A query destined for an EXISTS test; occasionally uses a star over
  /// clashing alias names, legal only in that position.
  QueryPtr inquery(std::size_t depth, const Context& gamma) {
    if (rng_.chance(1, 5)) return select_star(depth, gamma, /*allow_ambiguous=*/true);
    return query(depth, gamma);
  }

  Term term(const Context& gamma) {
    if (!gamma.empty() && rng_.chance(1, 2)) {
      std::size_t table = rng_.below(gamma.size());
      if (!gamma[table].empty()) {
        return Term::var(table, gamma[table][rng_.below(gamma[table].size())]);
      }
    }
    const Value& v = rng_.pick(cfg_.value_domain);
    return v.is_null() ? Term::null() : Term::constant(v.constant());
  }

  Cond cond(std::size_t depth, const Context& gamma) {
    std::size_t roll = depth == 0 ? rng_.below(4) : rng_.below(9);
    switch (roll) {
      case 0: return Cond::truth();
      case 1: return Cond::falsity();
      case 2: return Cond::is_null(rng_.chance(1, 2), term(gamma));
      case 3: {
        PredOp op = static_cast<PredOp>(rng_.below(6));
        return Cond::pred(op, {term(gamma), term(gamma)});
      }
      case 4: return Cond::conj(cond(depth - 1, gamma), cond(depth - 1, gamma));
      case 5: return Cond::disj(cond(depth - 1, gamma), cond(depth - 1, gamma));
      case 6: return Cond::negate(cond(depth - 1, gamma));
      case 7: {
        std::size_t width = rng_.between(1, 2);
        std::vector<Term> terms;
        for (std::size_t i = 0; i < width; ++i) terms.push_back(term(gamma));
        Schema target = detail::distinct_names(rng_, width);
        return Cond::memb(rng_.chance(1, 2), std::move(terms),
                          query_with_schema(depth - 1, gamma, target));
      }
      default:
        return Cond::exists(inquery(depth - 1, gamma));
    }
  }

 private:
  std::vector<FromItem> from_clause(std::size_t count, std::size_t depth,
                                    const Context& gamma) {
    std::vector<FromItem> items;
    for (std::size_t i = 0; i < count; ++i) {
      if (depth > 0 && rng_.chance(1, 4)) {
        QueryPtr sub = query(depth - 1, gamma);
        Schema sub_schema = wf_query(gamma, db_, *sub).value();
        Schema alias = detail::distinct_names(rng_, sub_schema.size());
        items.push_back(FromItem{TableRef::subquery(std::move(sub)), std::move(alias)});
      } else {
        const Name& base = rng_.pick(table_names_);
        Schema alias = detail::distinct_names(rng_, tables_.at(base).size());
        items.push_back(FromItem{TableRef::base(base), std::move(alias)});
      }
    }
    return items;
  }

  QueryPtr select(std::size_t depth, const Context& gamma,
                  std::optional<Schema> required) {
    std::size_t count = depth == 0 ? 1 : rng_.between(1, cfg_.max_tables_per_from);
    std::vector<FromItem> from = from_clause(count, depth, gamma);
    Context inner;
    for (const FromItem& item : from) inner.push_back(item.alias);
    inner.insert(inner.end(), gamma.begin(), gamma.end());
    Schema names = required ? *required
                            : random_output_names(rng_.between(1, cfg_.max_select_width));
    std::vector<SelectItem> items;
    for (const Name& n : names) items.push_back(SelectItem{term(inner), n});
    Cond where = cond(depth == 0 ? 0 : depth - 1, inner);
    return Query::select(rng_.chance(1, 3), std::move(items), std::move(from),
                         std::move(where));
  }

  QueryPtr select_star(std::size_t depth, const Context& gamma, bool allow_ambiguous) {
    std::size_t count =
        allow_ambiguous ? 2 : (depth == 0 ? 1 : rng_.between(1, cfg_.max_tables_per_from));
    std::vector<FromItem> from = from_clause(count, depth, gamma);
    if (allow_ambiguous) {
      // Share one attribute name across the first two items when that keeps
      // each alias internally duplicate-free.
      Schema alias = from[1].alias;
      alias[0] = from[0].alias[0];
      std::set<Name> seen(alias.begin(), alias.end());
      if (seen.size() == alias.size()) from[1].alias = alias;
    } else {
      // Rename clashing attributes so the star expansion is unambiguous.
      std::set<Name> seen;
      for (FromItem& item : from) {
        for (Name& a : item.alias) {
          while (seen.count(a)) a += "_";
          seen.insert(a);
        }
      }
    }
    Context inner;
    for (const FromItem& item : from) inner.push_back(item.alias);
    inner.insert(inner.end(), gamma.begin(), gamma.end());
    Cond where = cond(depth == 0 ? 0 : depth - 1, inner);
    return Query::select_star(rng_.chance(1, 3), std::move(from), std::move(where));
  }

  Schema random_output_names(std::size_t n) {
    Schema out;
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.empty() && rng_.chance(1, 8)) {
        out.push_back(out[rng_.below(out.size())]);  // duplicate output names are legal
      } else {
        out.push_back(rng_.pick(detail::name_pool()));
      }
    }
    return out;
  }

  GenConfig cfg_;
  TableSchemas tables_;
  Database db_;
  Rng& rng_;
  std::vector<Name> table_names_;
};

/// Generates one random query, well formed over the empty context.
inline QueryPtr gen_query(const GenConfig& cfg, const TableSchemas& tables) {
  Rng rng(cfg.seed);
  QueryGen gen(cfg, tables, rng);
  return gen.query(cfg.max_query_depth, {});
}

/// Evaluates a query over the empty environment with the main evaluator.
template <class Logic>
Relation run_query(const Database& db, const Query& q) {
  return eval_query<Logic>({}, db, q).run(Environment::empty());
}

/// Reference result computed by the naive evaluator; shares only the truth
/// value module with the main path.
template <class Logic>
Relation oracle_eval(const Database& db, const Query& q) {
  WfResult<Schema> schema = wf_query({}, db, q);
  if (!schema.ok()) throw WfException(schema.error());
  oracle::RawDatabase raw;
  for (const auto& [name, table] : db.tables()) {
    raw.emplace(name, oracle::RawTable{table.schema, table.rel.rows()});
  }
  std::vector<Tuple> rows = oracle::eval_query<Logic>(raw, {}, {}, q);
  return Relation::from_rows(schema.value().size(), std::move(rows));
}

/// A failed equivalence trial: the seed that grew the database, the (shrunk)
/// database itself, and the two differing results.
struct Counterexample {
  std::uint64_t seed;
  Database db;
  Relation lhs;
  Relation rhs;
};

struct EquivOutcome {
  std::size_t trials_run = 0;
  std::optional<Counterexample> counterexample;
  bool equivalent() const { return !counterexample.has_value(); }
};

namespace detail {

template <class Logic1, class Logic2>
bool results_differ(const Database& db, const Query& q1, const Query& q2,
                    Relation* r1 = nullptr, Relation* r2 = nullptr) {
  Relation a = run_query<Logic1>(db, q1);
  Relation b = run_query<Logic2>(db, q2);
  bool differ = !(a == b);
  if (r1) *r1 = std::move(a);
  if (r2) *r2 = std::move(b);
  return differ;
}

/// Greedy witness shrinking: drop rows while the disagreement persists, then
/// simplify surviving cells toward NULL and then 0. Deterministic.
template <class Logic1, class Logic2>
Database shrink_database(Database db, const Query& q1, const Query& q2) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, table] : db.tables()) {
      for (std::size_t drop = 0; drop < table.rel.rows().size(); ++drop) {
        std::vector<Tuple> rows = table.rel.rows();
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(drop));
        Database candidate = db;
        candidate.add_table(name, table.schema,
                            Relation::from_rows(table.schema.size(), std::move(rows)));
        if (results_differ<Logic1, Logic2>(candidate, q1, q2)) {
          db = std::move(candidate);
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  // Simplicity order so a cell only ever moves downward (no oscillation):
  // NULL < 0 < anything else.
  auto rank = [](const Value& v) {
    if (v.is_null()) return 0;
    if (v.constant().is_int() && v.constant().int_value() == 0) return 1;
    return 2;
  };
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, table] : db.tables()) {
      std::vector<Tuple> rows = table.rel.rows();
      for (std::size_t i = 0; i < rows.size() && !changed; ++i) {
        for (std::size_t j = 0; j < rows[i].size() && !changed; ++j) {
          for (const Value& simpler : {Value::null(), Value::integer(0)}) {
            if (rank(simpler) >= rank(rows[i][j])) continue;
            std::vector<Tuple> tweaked = rows;
            tweaked[i][j] = simpler;
            Database candidate = db;
            candidate.add_table(name, table.schema,
                                Relation::from_rows(table.schema.size(), tweaked));
            if (results_differ<Logic1, Logic2>(candidate, q1, q2)) {
              db = std::move(candidate);
              changed = true;
              break;
            }
          }
        }
      }
      if (changed) break;
    }
  }
  return db;
}

}  // namespace detail

/// Runs cfg.trials random databases against both queries, each evaluated
/// under its own logic, and reports the first disagreement (shrunk) or
/// success. Requires both queries well formed with identical schemas.
template <class Logic1, class Logic2>
EquivOutcome check_equiv(const Query& q1, const Query& q2, const GenConfig& cfg,
                         const TableSchemas& tables) {
  Database schema_db = schema_only_db(tables);
  WfResult<Schema> s1 = wf_query({}, schema_db, q1);
  if (!s1.ok()) throw WfException(s1.error());
  WfResult<Schema> s2 = wf_query({}, schema_db, q2);
  if (!s2.ok()) throw WfException(s2.error());
  if (s1.value() != s2.value()) {
    throw std::invalid_argument("queries have different schemas");
  }
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    std::uint64_t trial_seed = mix_seed(cfg.seed, trial);
    GenConfig trial_cfg = cfg;
    trial_cfg.seed = trial_seed;
    Database db = gen_database(trial_cfg, tables);
    Relation r1 = Relation::empty(0), r2 = Relation::empty(0);
    if (detail::results_differ<Logic1, Logic2>(db, q1, q2, &r1, &r2)) {
      Database shrunk = detail::shrink_database<Logic1, Logic2>(db, q1, q2);
      Relation a = run_query<Logic1>(shrunk, q1);
      Relation b = run_query<Logic2>(shrunk, q2);
      return EquivOutcome{trial + 1,
                          Counterexample{trial_seed, std::move(shrunk), std::move(a),
                                         std::move(b)}};
    }
  }
  return EquivOutcome{cfg.trials, std::nullopt};
}

}  // namespace nullsql::harness
