#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "nullsql/ast.hpp"
#include "nullsql/relation.hpp"

namespace nullsql {

/// A named collection of stored tables. Each table carries its natural
/// schema and its rows; the schema length always matches the relation arity.
class Database {
 public:
  struct Table {
    Schema schema;
    Relation rel;
  };

  Database() = default;

  void add_table(Name name, Schema schema, Relation rel) {
    if (schema.size() != rel.arity()) {
      throw std::invalid_argument("table " + name + ": schema has " +
                                  std::to_string(schema.size()) +
                                  " attributes but relation arity is " +
                                  std::to_string(rel.arity()));
    }
    tables_.insert_or_assign(std::move(name), Table{std::move(schema), std::move(rel)});
  }

  bool has_table(const Name& name) const { return tables_.count(name) > 0; }

  const Table& table(const Name& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw std::out_of_range("unknown table " + name);
    return it->second;
  }

  const Schema* schema_of(const Name& name) const {
    auto it = tables_.find(name);
    return it == tables_.end() ? nullptr : &it->second.schema;
  }

  const std::map<Name, Table>& tables() const { return tables_; }

 private:
  std::map<Name, Table> tables_;
};

}  // namespace nullsql
