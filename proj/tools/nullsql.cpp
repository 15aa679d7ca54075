// Command-line front end: check, run, translate, and compare queries.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 well-formedness error,
// 3 counterexample found.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nullsql/nullsql.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIoOrParse = 1;
constexpr int kExitWf = 2;
constexpr int kExitCounterexample = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nullsql::DbFileError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_wf_error(const std::string& source, const nullsql::WfError& err) {
  auto [line, col] = nullsql::line_col(source, err.span.begin);
  std::cerr << nullsql::to_string(err.kind) << " at " << line << ":" << col << ": "
            << err.message << "\n";
}

void print_parse_error(const std::string& source, const nullsql::ParseError& err) {
  auto [line, col] = nullsql::line_col(source, err.span().begin);
  std::cerr << "parse error at " << line << ":" << col << ": " << err.what() << "\n";
}

struct LoadedQuery {
  std::string source;
  nullsql::QueryPtr query;
};

// Returns nullopt after printing a diagnostic; the caller exits 1.
std::optional<LoadedQuery> load_query(const std::string& path) {
  std::string source;
  try {
    source = read_file(path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return std::nullopt;
  }
  try {
    nullsql::QueryPtr q = nullsql::parse_query(source);
    return LoadedQuery{std::move(source), std::move(q)};
  } catch (const nullsql::ParseError& e) {
    print_parse_error(source, e);
    return std::nullopt;
  }
}

std::optional<nullsql::Database> load_db(const std::string& path,
                                         const std::vector<std::string>& csv_tables) {
  nullsql::Database db;
  try {
    db = nullsql::load_database_file(path);
    for (const std::string& spec : csv_tables) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) {
        throw nullsql::DbFileError("--csv expects NAME=path, got " + spec);
      }
      std::string name = spec.substr(0, eq);
      auto [schema, rows] = nullsql::parse_csv_table(read_file(spec.substr(eq + 1)));
      db.add_table(name, schema,
                   nullsql::Relation::from_rows(schema.size(), std::move(rows)));
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return std::nullopt;
  }
  return db;
}

std::string format_cell(const nullsql::Value& v) { return nullsql::to_string(v); }

void print_relation(const nullsql::Schema& schema, const nullsql::Relation& rel) {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (i) std::cout << '\t';
    std::cout << schema[i];
  }
  std::cout << '\n';
  for (const nullsql::Tuple& row : rel.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) std::cout << '\t';
      std::cout << format_cell(row[i]);
    }
    std::cout << '\n';
  }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("NULLSQL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring unparsable NULLSQL_SEED\n";
    }
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int cmd_wf(const std::string& db_path, const std::string& query_path) {
  auto db = load_db(db_path, {});
  if (!db) return kExitIoOrParse;
  auto loaded = load_query(query_path);
  if (!loaded) return kExitIoOrParse;
  nullsql::WfResult<nullsql::Schema> result = nullsql::wf_query({}, *db, *loaded->query);
  if (!result.ok()) {
    print_wf_error(loaded->source, result.error());
    return kExitWf;
  }
  std::cout << "schema: (";
  for (std::size_t i = 0; i < result.value().size(); ++i) {
    if (i) std::cout << ", ";
    std::cout << result.value()[i];
  }
  std::cout << ")\n";
  return kExitOk;
}

int cmd_run(const std::string& db_path, const std::string& query_path,
            const std::string& logic, const std::vector<std::string>& csv_tables) {
  auto db = load_db(db_path, csv_tables);
  if (!db) return kExitIoOrParse;
  auto loaded = load_query(query_path);
  if (!loaded) return kExitIoOrParse;
  nullsql::WfResult<nullsql::Schema> schema = nullsql::wf_query({}, *db, *loaded->query);
  if (!schema.ok()) {
    print_wf_error(loaded->source, schema.error());
    return kExitWf;
  }
  nullsql::Relation result =
      logic == "2vl"
          ? nullsql::harness::run_query<nullsql::TwoValued>(*db, *loaded->query)
          : nullsql::harness::run_query<nullsql::ThreeValued>(*db, *loaded->query);
  print_relation(schema.value(), result);
  return kExitOk;
}

int cmd_translate(const std::string& query_path) {
  auto loaded = load_query(query_path);
  if (!loaded) return kExitIoOrParse;
  nullsql::Database empty_db;
  nullsql::QueryPtr translated = nullsql::ttquery(empty_db, *loaded->query);
  std::cout << nullsql::render(*translated) << "\n";
  return kExitOk;
}

template <class L1, class L2>
int run_equiv(const nullsql::Query& q1, const nullsql::Query& q2,
              const nullsql::harness::GenConfig& cfg,
              const nullsql::harness::TableSchemas& tables) {
  nullsql::harness::EquivOutcome outcome =
      nullsql::harness::check_equiv<L1, L2>(q1, q2, cfg, tables);
  if (outcome.equivalent()) {
    std::cout << "equivalent over " << outcome.trials_run << " trials\n";
    return kExitOk;
  }
  const nullsql::harness::Counterexample& cex = *outcome.counterexample;
  std::cout << "counterexample found at trial " << outcome.trials_run
            << " (seed " << cex.seed << "):\n";
  std::cout << nullsql::database_to_json(cex.db) << "\n";
  std::cout << "lhs rows:\n";
  for (const nullsql::Tuple& t : cex.lhs.rows()) std::cout << "  " << to_string(t) << "\n";
  std::cout << "rhs rows:\n";
  for (const nullsql::Tuple& t : cex.rhs.rows()) std::cout << "  " << to_string(t) << "\n";
  return kExitCounterexample;
}

int cmd_equiv(const std::string& q1_path, const std::string& q2_path,
              const std::string& schema_path, const std::string& logic1,
              const std::string& logic2, std::size_t trials,
              std::optional<std::uint64_t> seed_flag) {
  auto loaded1 = load_query(q1_path);
  if (!loaded1) return kExitIoOrParse;
  auto loaded2 = load_query(q2_path);
  if (!loaded2) return kExitIoOrParse;
  std::optional<nullsql::Database> schema_db = load_db(schema_path, {});
  if (!schema_db) return kExitIoOrParse;

  nullsql::harness::TableSchemas tables;
  for (const auto& [name, table] : schema_db->tables()) tables[name] = table.schema;

  nullsql::harness::GenConfig cfg;
  cfg.trials = trials;
  cfg.seed = resolve_seed(seed_flag);
  std::cerr << "seed: " << cfg.seed << "\n";

  try {
    if (logic1 == "2vl" && logic2 == "2vl") {
      return run_equiv<nullsql::TwoValued, nullsql::TwoValued>(
          *loaded1->query, *loaded2->query, cfg, tables);
    }
    if (logic1 == "2vl") {
      return run_equiv<nullsql::TwoValued, nullsql::ThreeValued>(
          *loaded1->query, *loaded2->query, cfg, tables);
    }
    if (logic2 == "2vl") {
      return run_equiv<nullsql::ThreeValued, nullsql::TwoValued>(
          *loaded1->query, *loaded2->query, cfg, tables);
    }
    return run_equiv<nullsql::ThreeValued, nullsql::ThreeValued>(
        *loaded1->query, *loaded2->query, cfg, tables);
  } catch (const nullsql::WfException& e) {
    std::cerr << e.what() << "\n";
    return kExitWf;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitWf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference interpreter for a SQL fragment with NULLs and bag semantics"};
  app.require_subcommand(1);

  std::string db_path, query_path, query2_path, schema_path;
  std::string logic = "3vl", logic1 = "3vl", logic2 = "3vl";
  std::vector<std::string> csv_tables;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;

  CLI::App* wf = app.add_subcommand("wf", "check a query against a database schema");
  wf->add_option("db", db_path, "database JSON file")->required();
  wf->add_option("query", query_path, "query file")->required();

  CLI::App* run = app.add_subcommand("run", "evaluate a query");
  run->add_option("db", db_path, "database JSON file")->required();
  run->add_option("query", query_path, "query file")->required();
  run->add_option("--logic", logic, "2vl or 3vl")
      ->check(CLI::IsMember({"2vl", "3vl"}));
  run->add_option("--csv", csv_tables, "add a table from CSV as NAME=path");

  CLI::App* translate = app.add_subcommand("translate", "rewrite away three-valued logic");
  translate->add_option("query", query_path, "query file")->required();

  CLI::App* equiv = app.add_subcommand("equiv", "randomized equivalence check");
  equiv->add_option("query1", query_path, "first query file")->required();
  equiv->add_option("query2", query2_path, "second query file")->required();
  equiv->add_option("schemas", schema_path, "JSON file naming the table schemas")->required();
  equiv->add_option("--logic1", logic1, "logic for the first query")
      ->check(CLI::IsMember({"2vl", "3vl"}));
  equiv->add_option("--logic2", logic2, "logic for the second query")
      ->check(CLI::IsMember({"2vl", "3vl"}));
  equiv->add_option("--trials", trials, "number of random databases");
  equiv->add_option("--seed", seed, "RNG seed (default: NULLSQL_SEED or random)");

  CLI11_PARSE(app, argc, argv);

  if (wf->parsed()) return cmd_wf(db_path, query_path);
  if (run->parsed()) return cmd_run(db_path, query_path, logic, csv_tables);
  if (translate->parsed()) return cmd_translate(query_path);
  return cmd_equiv(query_path, query2_path, schema_path, logic1, logic2, trials, seed);
}
