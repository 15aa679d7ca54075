#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace nullsql;
using testutil::iv;
using testutil::nv;
using testutil::sv;

TEST_CASE("Kleene connective tables") {
  using L = ThreeValued;
  const Tribool F = Tribool::False, U = Tribool::Unknown, T = Tribool::True;

  // band = min under false < unknown < true
  REQUIRE(L::band(T, T) == T);
  REQUIRE(L::band(T, U) == U);
  REQUIRE(L::band(T, F) == F);
  REQUIRE(L::band(U, U) == U);
  REQUIRE(L::band(U, F) == F);
  REQUIRE(L::band(F, F) == F);

  // bor = max
  REQUIRE(L::bor(F, F) == F);
  REQUIRE(L::bor(F, U) == U);
  REQUIRE(L::bor(F, T) == T);
  REQUIRE(L::bor(U, U) == U);
  REQUIRE(L::bor(U, T) == T);
  REQUIRE(L::bor(T, T) == T);

  // bneg swaps the extremes, fixes unknown
  REQUIRE(L::bneg(T) == F);
  REQUIRE(L::bneg(F) == T);
  REQUIRE(L::bneg(U) == U);

  for (Tribool a : L::domain()) {
    for (Tribool b : L::domain()) {
      REQUIRE(L::band(a, b) == L::band(b, a));
      REQUIRE(L::bor(a, b) == L::bor(b, a));
    }
  }
}

TEST_CASE("tabulated connectives match the pointwise definitions") {
  auto three = connective_tables<ThreeValued>();
  REQUIRE(three.binary.size() == 9);
  REQUIRE(three.negation.size() == 3);
  for (const auto& r : three.binary) {
    REQUIRE(r.conj == ThreeValued::band(r.a, r.b));
    REQUIRE(r.disj == ThreeValued::bor(r.a, r.b));
  }
  auto two = connective_tables<TwoValued>();
  REQUIRE(two.binary.size() == 4);
  for (const auto& r : two.negation) REQUIRE(r.neg == !r.a);
}

TEST_CASE("Boolean connective tables") {
  using L = TwoValued;
  REQUIRE(L::band(true, false) == false);
  REQUIRE(L::band(true, true) == true);
  REQUIRE(L::bor(false, false) == false);
  REQUIRE(L::bor(true, false) == true);
  REQUIRE(L::bneg(true) == false);
  REQUIRE(L::bmaybe == L::bfalse);  // the uncertain value collapses onto false
}

TEST_CASE("De Morgan holds in both instances") {
  for (Tribool a : ThreeValued::domain()) {
    for (Tribool b : ThreeValued::domain()) {
      REQUIRE(ThreeValued::bneg(ThreeValued::band(a, b)) ==
              ThreeValued::bor(ThreeValued::bneg(a), ThreeValued::bneg(b)));
      REQUIRE(ThreeValued::bneg(ThreeValued::bor(a, b)) ==
              ThreeValued::band(ThreeValued::bneg(a), ThreeValued::bneg(b)));
    }
  }
  for (bool a : TwoValued::domain()) {
    for (bool b : TwoValued::domain()) {
      REQUIRE(TwoValued::bneg(TwoValued::band(a, b)) ==
              TwoValued::bor(TwoValued::bneg(a), TwoValued::bneg(b)));
    }
  }
}

TEST_CASE("of_bool and the truth/falsity tests") {
  REQUIRE(ThreeValued::is_btrue(ThreeValued::of_bool(true)));
  REQUIRE(ThreeValued::is_bfalse(ThreeValued::of_bool(false)));
  REQUIRE(TwoValued::is_btrue(TwoValued::of_bool(true)));
  REQUIRE(TwoValued::is_bfalse(TwoValued::of_bool(false)));

  // In 3VL, not-true does not imply false.
  REQUIRE(!ThreeValued::is_btrue(Tribool::Unknown));
  REQUIRE(!ThreeValued::is_bfalse(Tribool::Unknown));

  // In 2VL, every value is exactly one of true/false.
  for (bool x : TwoValued::domain()) {
    REQUIRE(TwoValued::is_btrue(x) != TwoValued::is_bfalse(x));
  }
}

TEST_CASE("veq is uncertain on NULL, data equality otherwise") {
  REQUIRE(veq<ThreeValued>(iv(1), iv(1)) == Tribool::True);
  REQUIRE(veq<ThreeValued>(iv(1), nv()) == Tribool::Unknown);
  REQUIRE(veq<ThreeValued>(nv(), nv()) == Tribool::Unknown);
  REQUIRE(veq<ThreeValued>(iv(1), iv(2)) == Tribool::False);
  REQUIRE(veq<ThreeValued>(sv("a"), sv("a")) == Tribool::True);
  REQUIRE(veq<ThreeValued>(iv(1), sv("1")) == Tribool::False);

  REQUIRE(veq<TwoValued>(iv(1), iv(1)) == true);
  REQUIRE(veq<TwoValued>(iv(1), nv()) == false);  // bmaybe = false in 2VL
  REQUIRE(veq<TwoValued>(nv(), nv()) == false);
}

TEST_CASE("sem_bpred lifts comparisons over possibly-null values") {
  REQUIRE(sem_bpred<ThreeValued>(PredOp::Eq, {iv(1), iv(1)}) == Tribool::True);
  REQUIRE(sem_bpred<ThreeValued>(PredOp::Lt, {nv(), iv(5)}) == Tribool::Unknown);
  REQUIRE(sem_bpred<ThreeValued>(PredOp::Neq, {iv(1), iv(2)}) == Tribool::True);
  REQUIRE(sem_bpred<ThreeValued>(PredOp::Le, {iv(2), iv(2)}) == Tribool::True);
  REQUIRE(sem_bpred<ThreeValued>(PredOp::Gt, {iv(1), iv(2)}) == Tribool::False);
  REQUIRE(sem_bpred<TwoValued>(PredOp::Lt, {nv(), iv(5)}) == false);

  // Mixed kinds resolve through the global constant order (Int < Str).
  REQUIRE(sem_bpred<ThreeValued>(PredOp::Lt, {iv(999), sv("a")}) == Tribool::True);

  REQUIRE_THROWS_AS(sem_bpred<ThreeValued>(PredOp::Eq, {iv(1)}), std::invalid_argument);
}
