#pragma once

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nullsql/database.hpp"

namespace nullsql {

/// Database files are JSON documents mapping table names to
/// {"schema": [names...], "rows": [[cells...]...]}, where a cell is an
/// integer, a string, or null. "rows" may be omitted for schema-only files
/// (as used to drive the equivalence checker). JSON is used rather than CSV
/// because it encodes null unambiguously.

class DbFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Value cell_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_null()) return Value::null();
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) return Value::string(j.get<std::string>());
  throw DbFileError(where + ": cell must be an integer, a string, or null");
}

}  // namespace detail

inline Database parse_database_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DbFileError(std::string("database file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DbFileError("database file must be a JSON object");
  Database db;
  for (const auto& [name, spec] : doc.items()) {
    if (!spec.is_object() || !spec.contains("schema") || !spec["schema"].is_array()) {
      throw DbFileError("table " + name + ": expected an object with a schema array");
    }
    Schema schema;
    std::set<Name> seen;
    for (const auto& a : spec["schema"]) {
      if (!a.is_string()) throw DbFileError("table " + name + ": schema entries must be strings");
      Name attr = a.get<std::string>();
      if (!seen.insert(attr).second) {
        throw DbFileError("table " + name + ": schema repeats attribute " + attr);
      }
      schema.push_back(std::move(attr));
    }
    std::vector<Tuple> rows;
    if (spec.contains("rows")) {
      if (!spec["rows"].is_array()) throw DbFileError("table " + name + ": rows must be an array");
      for (const auto& r : spec["rows"]) {
        if (!r.is_array() || r.size() != schema.size()) {
          throw DbFileError("table " + name + ": every row must list exactly " +
                            std::to_string(schema.size()) + " cells");
        }
        Tuple row;
        for (const auto& cell : r) {
          row.push_back(detail::cell_from_json(cell, "table " + name));
        }
        rows.push_back(std::move(row));
      }
    }
    db.add_table(name, schema, Relation::from_rows(schema.size(), std::move(rows)));
  }
  return db;
}

inline std::string database_to_json(const Database& db) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, table] : db.tables()) {
    nlohmann::json schema = nlohmann::json::array();
    for (const Name& a : table.schema) schema.push_back(a);
    nlohmann::json rows = nlohmann::json::array();
    for (const Tuple& t : table.rel.rows()) {
      nlohmann::json row = nlohmann::json::array();
      for (const Value& v : t) {
        if (v.is_null()) {
          row.push_back(nullptr);
        } else if (v.constant().is_int()) {
          row.push_back(v.constant().int_value());
        } else {
          row.push_back(v.constant().str_value());
        }
      }
      rows.push_back(std::move(row));
    }
    doc[name] = {{"schema", std::move(schema)}, {"rows", std::move(rows)}};
  }
  return doc.dump(2);
}

inline Database load_database_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DbFileError("cannot open database file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_database_json(buf.str());
}

/// CSV import for one table. The first line is the schema. An unquoted cell
/// is an integer when it parses as one, the literal NULL (any case) is null,
/// anything else is a string; a double-quoted cell is always a string, with
/// "" as the quote escape. So NULL is null but "NULL" is the four-letter
/// string.
inline std::pair<Schema, std::vector<Tuple>> parse_csv_table(const std::string& text) {
  std::vector<std::vector<std::pair<std::string, bool>>> records;  // (text, quoted)
  std::vector<std::pair<std::string, bool>> record;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  auto end_field = [&]() {
    record.emplace_back(field, quoted);
    field.clear();
    quoted = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(record);
    record.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '"') {
      quoted = true;
      ++i;
      for (;;) {
        if (i >= text.size()) throw DbFileError("unterminated quoted CSV field");
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        field.push_back(text[i]);
        ++i;
      }
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\n' || c == '\r') {
      if (!field.empty() || !record.empty() || quoted) end_record();
      while (i < text.size() && (text[i] == '\n' || text[i] == '\r')) ++i;
    } else {
      field.push_back(c);
      ++i;
    }
  }
  if (!field.empty() || !record.empty() || quoted) end_record();
  if (records.empty()) throw DbFileError("CSV table has no header line");

  Schema schema;
  std::set<Name> seen;
  for (const auto& [cell, was_quoted] : records[0]) {
    (void)was_quoted;
    if (!seen.insert(cell).second) {
      throw DbFileError("CSV schema repeats attribute " + cell);
    }
    schema.push_back(cell);
  }
  std::vector<Tuple> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != schema.size()) {
      throw DbFileError("CSV row " + std::to_string(r) + " has " +
                        std::to_string(records[r].size()) + " cells, expected " +
                        std::to_string(schema.size()));
    }
    Tuple row;
    for (const auto& [cell, was_quoted] : records[r]) {
      if (was_quoted) {
        row.push_back(Value::string(cell));
        continue;
      }
      std::string upper = cell;
      for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (upper == "NULL") {
        row.push_back(Value::null());
        continue;
      }
      try {
        std::size_t used = 0;
        std::int64_t n = std::stoll(cell, &used);
        if (used == cell.size()) {
          row.push_back(Value::integer(n));
          continue;
        }
      } catch (const std::exception&) {
      }
      row.push_back(Value::string(cell));
    }
    rows.push_back(std::move(row));
  }
  return {std::move(schema), std::move(rows)};
}

}  // namespace nullsql
