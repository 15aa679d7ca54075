#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace nullsql;

TEST_CASE("tm_lift shifts variable indices and nothing else") {
  Term v = Term::var(0, "A");
  REQUIRE(ast_equal(tm_lift(v, 1), Term::var(1, "A")));
  REQUIRE(ast_equal(tm_lift(Term::null(), 5), Term::null()));
  REQUIRE(ast_equal(tm_lift(Term::integer(42), 3), Term::integer(42)));
}

TEST_CASE("tm_lift is additive") {
  harness::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    std::size_t index = rng.below(5);
    std::size_t k1 = rng.below(4), k2 = rng.below(4);
    Term t = Term::var(index, "X");
    REQUIRE(ast_equal(tm_lift(tm_lift(t, k1), k2), tm_lift(t, k1 + k2)));
    REQUIRE(tm_lift(t, k1).as_var().table == index + k1);
  }
}

TEST_CASE("select-list substitution replaces index-0 references") {
  SECTION("bound variable is replaced by the inner term") {
    std::vector<SelectItem> items = {{Term::var(0, "A"), "Z"}};
    auto out = subst_select_list(items, {{"A", Term::integer(7)}});
    REQUIRE(out.size() == 1);
    REQUIRE(ast_equal(out[0].term, Term::integer(7)));
    REQUIRE(out[0].name == "Z");
  }
  SECTION("constants pass through untouched") {
    std::vector<SelectItem> items = {{Term::integer(3), "Z"}};
    auto out = subst_select_list(items, {{"A", Term::null()}});
    REQUIRE(ast_equal(out[0].term, Term::integer(3)));
  }
  SECTION("replacement term may itself be a variable of the inner scope") {
    std::vector<SelectItem> items = {{Term::var(0, "B"), "Z"}};
    auto out = subst_select_list(items, {{"B", Term::var(0, "C")}});
    REQUIRE(ast_equal(out[0].term, Term::var(0, "C")));
  }
  SECTION("outer references stay at their index") {
    std::vector<SelectItem> items = {{Term::var(1, "A"), "Z"}};
    auto out = subst_select_list(items, {{"A", Term::integer(0)}});
    REQUIRE(ast_equal(out[0].term, Term::var(1, "A")));
  }
  SECTION("unbound references are an error") {
    std::vector<SelectItem> items = {{Term::var(0, "Q"), "Z"}};
    REQUIRE_THROWS_AS(subst_select_list(items, {{"A", Term::integer(0)}}),
                      std::invalid_argument);
  }
}

TEST_CASE("structural equality ignores spans") {
  QueryPtr a = parse_query("SELECT 0.A AS A FROM table R AS (A,B,C) WHERE TRUE");
  QueryPtr b = Query::select(false, {{Term::var(0, "A"), "A"}},
                             {{TableRef::base("R"), {"A", "B", "C"}}}, Cond::truth());
  REQUIRE(ast_equal(*a, *b));
  REQUIRE(a->span.end > a->span.begin);
  REQUIRE(b->span.end == 0);
}

TEST_CASE("predicate vocabulary is the six binary comparisons") {
  for (PredOp op : {PredOp::Eq, PredOp::Neq, PredOp::Lt, PredOp::Le, PredOp::Gt,
                    PredOp::Ge}) {
    REQUIRE(pred_arity(op) == 2);
  }
  PredicateRegistry registry;  // extension hook ships empty
  REQUIRE(registry.entries.empty());
}

TEST_CASE("value ordering: NULL least, integers below strings") {
  using testutil::iv;
  using testutil::nv;
  using testutil::sv;
  REQUIRE(nv() < iv(-100));
  REQUIRE(iv(-100) < iv(5));
  REQUIRE(iv(900) < sv(""));
  REQUIRE(sv("a") < sv("b"));
  REQUIRE(nv() == nv());  // identical as data, even though veq says otherwise
}
