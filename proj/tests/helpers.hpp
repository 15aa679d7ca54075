#pragma once

// Shared literal builders and small generators for the test suites.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "nullsql/harness.hpp"
#include "nullsql/nullsql.hpp"

namespace testutil {

using nullsql::Relation;
using nullsql::Tuple;
using nullsql::Value;

inline Value iv(std::int64_t n) { return Value::integer(n); }
inline Value sv(std::string s) { return Value::string(std::move(s)); }
inline Value nv() { return Value::null(); }

inline Tuple row(std::initializer_list<Value> vs) { return Tuple(vs); }

inline Relation rel(std::size_t arity, std::initializer_list<Tuple> rows) {
  return Relation::from_rows(arity, std::vector<Tuple>(rows));
}

/// Single-column relation from a list of values.
inline Relation rel1(std::initializer_list<Value> vs) {
  std::vector<Tuple> rows;
  for (const Value& v : vs) rows.push_back(Tuple{v});
  return Relation::from_rows(1, std::move(rows));
}

inline Value random_value(nullsql::harness::Rng& rng) {
  switch (rng.below(6)) {
    case 0: return nv();
    case 1: return iv(0);
    case 2: return iv(1);
    case 3: return iv(2);
    case 4: return sv("x");
    default: return sv("y");
  }
}

inline Tuple random_tuple(nullsql::harness::Rng& rng, std::size_t arity) {
  Tuple t;
  t.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) t.push_back(random_value(rng));
  return t;
}

inline Relation random_relation(nullsql::harness::Rng& rng, std::size_t arity,
                                std::size_t max_rows) {
  std::vector<Tuple> rows;
  std::size_t n = rng.below(max_rows + 1);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(random_tuple(rng, arity));
  return Relation::from_rows(arity, std::move(rows));
}

/// The §-style default table universe used across randomized suites.
inline nullsql::harness::TableSchemas default_tables() {
  return {{"R", {"A", "B"}}, {"S", {"C"}}, {"T", {"D", "E", "F"}}};
}

}  // namespace testutil
