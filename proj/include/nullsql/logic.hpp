#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullsql/ast.hpp"
#include "nullsql/value.hpp"

namespace nullsql {

/// Kleene truth values, ordered false < unknown < true so that the strong
/// connectives are min/max.
enum class Tribool { False = 0, Unknown = 1, True = 2 };

inline std::string to_string(Tribool t) {
  switch (t) {
    case Tribool::False: return "false";
    case Tribool::Unknown: return "unknown";
    case Tribool::True: return "true";
  }
  return "?";
}

/// Boolean logic. The uncertain value collapses onto false, so a condition
/// holds exactly when it is not false.
struct TwoValued {
  using TruthValue = bool;
  static constexpr TruthValue btrue = true;
  static constexpr TruthValue bfalse = false;
  static constexpr TruthValue bmaybe = false;

  static constexpr TruthValue band(TruthValue a, TruthValue b) { return a && b; }
  static constexpr TruthValue bor(TruthValue a, TruthValue b) { return a || b; }
  static constexpr TruthValue bneg(TruthValue a) { return !a; }
  static constexpr bool is_btrue(TruthValue a) { return a; }
  static constexpr bool is_bfalse(TruthValue a) { return !a; }
  static constexpr TruthValue of_bool(bool b) { return b; }

  static constexpr std::array<TruthValue, 2> domain() { return {false, true}; }
  static constexpr const char* name() { return "2vl"; }
};

/// Kleene's strong logic of indeterminacy: conjunction is minimum,
/// disjunction is maximum, negation swaps the extremes and fixes unknown.
struct ThreeValued {
  using TruthValue = Tribool;
  static constexpr TruthValue btrue = Tribool::True;
  static constexpr TruthValue bfalse = Tribool::False;
  static constexpr TruthValue bmaybe = Tribool::Unknown;

  static constexpr TruthValue band(TruthValue a, TruthValue b) {
    return a < b ? a : b;
  }
  static constexpr TruthValue bor(TruthValue a, TruthValue b) {
    return a < b ? b : a;
  }
  static constexpr TruthValue bneg(TruthValue a) {
    switch (a) {
      case Tribool::True: return Tribool::False;
      case Tribool::False: return Tribool::True;
      default: return Tribool::Unknown;
    }
  }
  static constexpr bool is_btrue(TruthValue a) { return a == Tribool::True; }
  static constexpr bool is_bfalse(TruthValue a) { return a == Tribool::False; }
  static constexpr TruthValue of_bool(bool b) {
    return b ? Tribool::True : Tribool::False;
  }

  static constexpr std::array<TruthValue, 3> domain() {
    return {Tribool::False, Tribool::Unknown, Tribool::True};
  }
  static constexpr const char* name() { return "3vl"; }
};

/// The connectives of a logic instance, fully tabulated over its carrier.
template <class Logic>
struct ConnectiveTables {
  using TV = typename Logic::TruthValue;
  struct BinaryRow {
    TV a, b, conj, disj;
  };
  struct UnaryRow {
    TV a, neg;
  };
  std::vector<BinaryRow> binary;
  std::vector<UnaryRow> negation;
};

template <class Logic>
ConnectiveTables<Logic> connective_tables() {
  ConnectiveTables<Logic> out;
  for (auto a : Logic::domain()) {
    out.negation.push_back({a, Logic::bneg(a)});
    for (auto b : Logic::domain()) {
      out.binary.push_back({a, b, Logic::band(a, b), Logic::bor(a, b)});
    }
  }
  return out;
}

/// Value equality as conditions see it: uncertain as soon as either side is
/// NULL, otherwise plain data equality on the constants.
template <class Logic>
typename Logic::TruthValue veq(const Value& v, const Value& w) {
  if (v.is_null() || w.is_null()) return Logic::bmaybe;
  return Logic::of_bool(v.constant() == w.constant());
}

/// The boolean meaning of a comparison on constants. Total: mixed-kind
/// arguments compare through the global constant order.
inline bool pred_holds(PredOp op, const BaseConst& a, const BaseConst& b) {
  switch (op) {
    case PredOp::Eq: return a == b;
    case PredOp::Neq: return a != b;
    case PredOp::Lt: return a < b;
    case PredOp::Le: return a <= b;
    case PredOp::Gt: return a > b;
    case PredOp::Ge: return a >= b;
  }
  return false;
}

/// Lifts a comparison to values: uncertain if any argument is NULL,
/// otherwise the boolean answer injected into the logic.
template <class Logic>
typename Logic::TruthValue sem_bpred(PredOp op, const std::vector<Value>& args) {
  if (args.size() != pred_arity(op)) {
    throw std::invalid_argument("predicate arity mismatch: got " +
                                std::to_string(args.size()) + " arguments");
  }
  for (const Value& v : args) {
    if (v.is_null()) return Logic::bmaybe;
  }
  return Logic::of_bool(pred_holds(op, args[0].constant(), args[1].constant()));
}

}  // namespace nullsql
