#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nullsql/ast.hpp"

namespace nullsql {

/// Reader/printer for the concrete query syntax. Keywords are
/// case-insensitive, names case-sensitive; `--` starts a line comment.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, SourceSpan span)
      : std::runtime_error(std::move(message)), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// 1-based line:column of a byte offset, for diagnostics.
inline std::pair<std::size_t, std::size_t> line_col(std::string_view text,
                                                    std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

namespace lex {

enum class TokKind { Int, Str, Name, Keyword, Symbol, End };

struct Token {
  TokKind kind;
  std::string text;       // keyword (upper-cased), name, symbol
  std::int64_t int_value = 0;
  std::string str_value;  // string literal contents
  SourceSpan span{};
};

inline const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "SELECT", "DISTINCT", "FROM",  "WHERE",     "AS",     "TABLE", "QUERY",
      "UNION",  "INTERSECT", "EXCEPT", "ALL",     "TRUE",   "FALSE", "NULL",
      "IS",     "NOT",       "IN",     "EXISTS",  "AND",    "OR",
  };
  return kw;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto is_name_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto is_name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      ++i;
      while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      std::string digits(src.substr(start, i - start));
      std::int64_t value = 0;
      try {
        value = std::stoll(digits);
      } catch (const std::exception&) {
        throw ParseError("integer literal out of range", {start, i});
      }
      out.push_back({TokKind::Int, digits, value, "", {start, i}});
      continue;
    }
    if (c == '\'') {
      std::string contents;
      ++i;
      for (;;) {
        if (i >= n) throw ParseError("unterminated string literal", {start, i});
        if (src[i] == '\'') {
          if (i + 1 < n && src[i + 1] == '\'') {  // escaped quote
            contents.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        contents.push_back(src[i]);
        ++i;
      }
      out.push_back({TokKind::Str, "", 0, std::move(contents), {start, i}});
      continue;
    }
    if (is_name_start(c)) {
      ++i;
      while (i < n && is_name_char(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      std::string upper = word;
      for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (keywords().count(upper)) {
        out.push_back({TokKind::Keyword, upper, 0, "", {start, i}});
      } else {
        out.push_back({TokKind::Name, std::move(word), 0, "", {start, i}});
      }
      continue;
    }
    if (c == kFreshNamePrefix && i + 1 < n && is_name_char(src[i + 1])) {
      ++i;
      while (i < n && is_name_char(src[i])) ++i;
      out.push_back({TokKind::Name, std::string(src.substr(start, i - start)), 0, "", {start, i}});
      continue;
    }
    auto symbol = [&](std::string s) {
      i = start + s.size();
      out.push_back({TokKind::Symbol, std::move(s), 0, "", {start, i}});
    };
    if (c == '<' && i + 1 < n && src[i + 1] == '>') {
      symbol("<>");
    } else if (c == '<' && i + 1 < n && src[i + 1] == '=') {
      symbol("<=");
    } else if (c == '>' && i + 1 < n && src[i + 1] == '=') {
      symbol(">=");
    } else if (c == '<' || c == '>' || c == '=' || c == '(' || c == ')' || c == ',' ||
               c == '.' || c == '*') {
      symbol(std::string(1, c));
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "'", {start, start + 1});
    }
  }
  out.push_back({TokKind::End, "", 0, "", {n, n}});
  return out;
}

}  // namespace lex

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex::tokenize(src)) {}

  QueryPtr parse_query_eof() {
    QueryPtr q = parse_query();
    expect_end();
    return q;
  }

 private:
  using Token = lex::Token;
  using TokKind = lex::TokKind;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() { return tokens_[pos_++]; }

  bool at_keyword(const char* kw) const {
    return peek().kind == TokKind::Keyword && peek().text == kw;
  }
  bool accept_keyword(const char* kw) {
    if (!at_keyword(kw)) return false;
    ++pos_;
    return true;
  }
  void expect_keyword(const char* kw) {
    if (!accept_keyword(kw)) fail(std::string("expected ") + kw);
  }
  bool at_symbol(const char* s) const {
    return peek().kind == TokKind::Symbol && peek().text == s;
  }
  bool accept_symbol(const char* s) {
    if (!at_symbol(s)) return false;
    ++pos_;
    return true;
  }
  void expect_symbol(const char* s) {
    if (!accept_symbol(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_end() {
    if (peek().kind != TokKind::End) fail("unexpected trailing input");
  }
  [[noreturn]] void fail(std::string message) const {
    throw ParseError(std::move(message), peek().span);
  }

  Name parse_name() {
    if (peek().kind != TokKind::Name) fail("expected a name");
    return advance().text;
  }

  QueryPtr parse_query() {
    std::size_t start = peek().span.begin;
    QueryPtr lhs = parse_query_primary();
    for (;;) {
      SetOpKind kind;
      if (at_keyword("UNION")) {
        kind = SetOpKind::Union;
      } else if (at_keyword("INTERSECT")) {
        kind = SetOpKind::Intersect;
      } else if (at_keyword("EXCEPT")) {
        kind = SetOpKind::Except;
      } else {
        break;
      }
      advance();
      bool all = accept_keyword("ALL");
      QueryPtr rhs = parse_query_primary();
      lhs = Query::set_op(kind, all, std::move(lhs), std::move(rhs));
      lhs->span = {start, tokens_[pos_ - 1].span.end};
    }
    return lhs;
  }

  QueryPtr parse_query_primary() {
    if (accept_symbol("(")) {
      QueryPtr q = parse_query();
      expect_symbol(")");
      return q;
    }
    std::size_t start = peek().span.begin;
    expect_keyword("SELECT");
    bool distinct = accept_keyword("DISTINCT");
    bool star = accept_symbol("*");
    std::vector<SelectItem> items;
    if (!star) {
      do {
        Term t = parse_term();
        expect_keyword("AS");
        Name n = parse_name();
        items.push_back(SelectItem{std::move(t), std::move(n)});
      } while (accept_symbol(","));
    }
    expect_keyword("FROM");
    std::vector<FromItem> from;
    do {
      from.push_back(parse_from_item());
    } while (accept_symbol(","));
    expect_keyword("WHERE");
    Cond where = parse_cond();
    QueryPtr q = star ? Query::select_star(distinct, std::move(from), std::move(where))
                      : Query::select(distinct, std::move(items), std::move(from),
                                      std::move(where));
    q->span = {start, tokens_[pos_ - 1].span.end};
    return q;
  }

  FromItem parse_from_item() {
    std::size_t start = peek().span.begin;
    TableRef ref;
    if (accept_keyword("TABLE")) {
      ref = TableRef::base(parse_name());
    } else if (accept_keyword("QUERY")) {
      expect_symbol("(");
      ref = TableRef::subquery(parse_query());
      expect_symbol(")");
    } else {
      fail("expected 'table' or 'query' in FROM clause");
    }
    ref.span = {start, tokens_[pos_ - 1].span.end};
    expect_keyword("AS");
    expect_symbol("(");
    Schema alias;
    do {
      alias.push_back(parse_name());
    } while (accept_symbol(","));
    expect_symbol(")");
    return FromItem{std::move(ref), std::move(alias)};
  }

  Term parse_term() {
    const Token& tok = peek();
    if (tok.kind == TokKind::Int) {
      advance();
      if (accept_symbol(".")) {
        if (tok.int_value < 0) {
          throw ParseError("table index must be non-negative", tok.span);
        }
        Name attr = parse_name();
        Term t = Term::var(static_cast<std::size_t>(tok.int_value), std::move(attr));
        t.span = {tok.span.begin, tokens_[pos_ - 1].span.end};
        return t;
      }
      Term t = Term::integer(tok.int_value);
      t.span = tok.span;
      return t;
    }
    if (tok.kind == TokKind::Str) {
      advance();
      Term t = Term::string(tok.str_value);
      t.span = tok.span;
      return t;
    }
    if (tok.kind == TokKind::Keyword && tok.text == "NULL") {
      advance();
      Term t = Term::null();
      t.span = tok.span;
      return t;
    }
    fail("expected a term");
  }

  // Precedence: NOT > AND > OR.
  Cond parse_cond() { return parse_or(); }

  Cond parse_or() {
    std::size_t start = peek().span.begin;
    Cond lhs = parse_and();
    while (accept_keyword("OR")) {
      Cond rhs = parse_and();
      lhs = Cond::disj(std::move(lhs), std::move(rhs));
      lhs.span = {start, tokens_[pos_ - 1].span.end};
    }
    return lhs;
  }

  Cond parse_and() {
    std::size_t start = peek().span.begin;
    Cond lhs = parse_not();
    while (accept_keyword("AND")) {
      Cond rhs = parse_not();
      lhs = Cond::conj(std::move(lhs), std::move(rhs));
      lhs.span = {start, tokens_[pos_ - 1].span.end};
    }
    return lhs;
  }

  Cond parse_not() {
    std::size_t start = peek().span.begin;
    if (accept_keyword("NOT")) {
      Cond inner = parse_not();
      Cond c = Cond::negate(std::move(inner));
      c.span = {start, tokens_[pos_ - 1].span.end};
      return c;
    }
    return parse_cond_primary();
  }

  // A '(' here may open a parenthesized condition or a tuple of terms for a
  // membership test; look ahead to the matching ')' to decide.
  bool paren_starts_tuple() const {
    std::size_t depth = 0;
    for (std::size_t j = pos_;; ++j) {
      const Token& t = peek(j - pos_);
      if (t.kind == TokKind::End) return false;
      if (t.kind == TokKind::Symbol && t.text == "(") ++depth;
      if (t.kind == TokKind::Symbol && t.text == ")") {
        if (--depth == 0) {
          const Token& next = peek(j - pos_ + 1);
          return next.kind == TokKind::Keyword &&
                 (next.text == "IN" || next.text == "NOT");
        }
      }
    }
  }

  Cond parse_cond_primary() {
    std::size_t start = peek().span.begin;
    if (accept_keyword("TRUE")) {
      Cond c = Cond::truth();
      c.span = {start, tokens_[pos_ - 1].span.end};
      return c;
    }
    if (accept_keyword("FALSE")) {
      Cond c = Cond::falsity();
      c.span = {start, tokens_[pos_ - 1].span.end};
      return c;
    }
    if (accept_keyword("EXISTS")) {
      expect_symbol("(");
      QueryPtr q = parse_query();
      expect_symbol(")");
      Cond c = Cond::exists(std::move(q));
      c.span = {start, tokens_[pos_ - 1].span.end};
      return c;
    }
    if (at_symbol("(")) {
      if (paren_starts_tuple()) {
        advance();  // (
        std::vector<Term> terms;
        do {
          terms.push_back(parse_term());
        } while (accept_symbol(","));
        expect_symbol(")");
        return parse_membership(std::move(terms), start);
      }
      advance();  // (
      Cond c = parse_cond();
      expect_symbol(")");
      return c;
    }
    Term t = parse_term();
    if (accept_keyword("IS")) {
      bool negated = accept_keyword("NOT");
      expect_keyword("NULL");
      Cond c = Cond::is_null(!negated, std::move(t));
      c.span = {start, tokens_[pos_ - 1].span.end};
      return c;
    }
    if (peek().kind == TokKind::Symbol) {
      PredOp op;
      bool is_cmp = true;
      const std::string& s = peek().text;
      if (s == "=") op = PredOp::Eq;
      else if (s == "<>") op = PredOp::Neq;
      else if (s == "<") op = PredOp::Lt;
      else if (s == "<=") op = PredOp::Le;
      else if (s == ">") op = PredOp::Gt;
      else if (s == ">=") op = PredOp::Ge;
      else is_cmp = false;
      if (is_cmp) {
        advance();
        Term rhs = parse_term();
        Cond c = Cond::pred(op, {std::move(t), std::move(rhs)});
        c.span = {start, tokens_[pos_ - 1].span.end};
        return c;
      }
    }
    if (at_keyword("IN") || at_keyword("NOT")) {
      std::vector<Term> terms;
      terms.push_back(std::move(t));
      return parse_membership(std::move(terms), start);
    }
    fail("expected IS, a comparison, or IN after term");
  }

  Cond parse_membership(std::vector<Term> terms, std::size_t start) {
    bool negated = accept_keyword("NOT");
    expect_keyword("IN");
    expect_symbol("(");
    QueryPtr q = parse_query();
    expect_symbol(")");
    Cond c = Cond::memb(!negated, std::move(terms), std::move(q));
    c.span = {start, tokens_[pos_ - 1].span.end};
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses one query. Throws ParseError with a source span on failure.
inline QueryPtr parse_query(std::string_view text) {
  return detail::Parser(text).parse_query_eof();
}

// Rendering. The printed form reparses to a structurally identical AST.

inline std::string render(const Term& t) {
  if (t.is_null()) return "NULL";
  if (t.is_const()) {
    const BaseConst& c = t.as_const();
    if (c.is_int()) return std::to_string(c.int_value());
    std::string out = "'";
    for (char ch : c.str_value()) {
      out.push_back(ch);
      if (ch == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
  }
  return std::to_string(t.as_var().table) + "." + t.as_var().attr;
}

std::string render(const Query& q);

namespace detail {

// Precedence levels: OR = 0, AND = 1, NOT and atoms = 2.
inline std::string render_cond(const Cond& c, int min_prec) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cond::True>) {
          return "TRUE";
        } else if constexpr (std::is_same_v<T, Cond::False>) {
          return "FALSE";
        } else if constexpr (std::is_same_v<T, Cond::IsNull>) {
          return render(x.term) + (x.is_null ? " IS NULL" : " IS NOT NULL");
        } else if constexpr (std::is_same_v<T, Cond::Pred>) {
          return render(x.args[0]) + " " + pred_symbol(x.op) + " " + render(x.args[1]);
        } else if constexpr (std::is_same_v<T, Cond::Memb>) {
          std::string lhs;
          if (x.terms.size() == 1) {
            lhs = render(x.terms[0]);
          } else {
            lhs = "(";
            for (std::size_t i = 0; i < x.terms.size(); ++i) {
              if (i) lhs += ", ";
              lhs += render(x.terms[i]);
            }
            lhs += ")";
          }
          return lhs + (x.is_in ? " IN (" : " NOT IN (") + render(*x.query) + ")";
        } else if constexpr (std::is_same_v<T, Cond::Exists>) {
          return "EXISTS (" + render(*x.query) + ")";
        } else if constexpr (std::is_same_v<T, Cond::And>) {
          std::string s = render_cond(*x.lhs, 1) + " AND " + render_cond(*x.rhs, 2);
          return min_prec > 1 ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, Cond::Or>) {
          std::string s = render_cond(*x.lhs, 0) + " OR " + render_cond(*x.rhs, 1);
          return min_prec > 0 ? "(" + s + ")" : s;
        } else {
          static_assert(std::is_same_v<T, Cond::Not>);
          return "NOT " + render_cond(*x.arg, 2);
        }
      },
      c.node);
}

inline std::string render_from(const std::vector<FromItem>& from) {
  std::string out;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (i) out += ", ";
    if (from[i].table.is_base()) {
      out += "table " + from[i].table.as_base().name;
    } else {
      out += "query (" + render(*from[i].table.as_sub().query) + ")";
    }
    out += " AS (";
    for (std::size_t j = 0; j < from[i].alias.size(); ++j) {
      if (j) out += ", ";
      out += from[i].alias[j];
    }
    out += ")";
  }
  return out;
}

}  // namespace detail

inline std::string render(const Cond& c) { return detail::render_cond(c, 0); }

inline std::string render(const Query& q) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Query::Select>) {
          std::string out = "SELECT ";
          if (x.distinct) out += "DISTINCT ";
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (i) out += ", ";
            out += render(x.items[i].term) + " AS " + x.items[i].name;
          }
          out += " FROM " + detail::render_from(x.from);
          out += " WHERE " + render(x.where);
          return out;
        } else if constexpr (std::is_same_v<T, Query::SelectStar>) {
          std::string out = "SELECT ";
          if (x.distinct) out += "DISTINCT ";
          out += "* FROM " + detail::render_from(x.from);
          out += " WHERE " + render(x.where);
          return out;
        } else {
          static_assert(std::is_same_v<T, Query::SetOp>);
          std::string op;
          switch (x.kind) {
            case SetOpKind::Union: op = "UNION"; break;
            case SetOpKind::Intersect: op = "INTERSECT"; break;
            case SetOpKind::Except: op = "EXCEPT"; break;
          }
          if (x.all) op += " ALL";
          std::string lhs = render(*x.lhs);
          std::string rhs = render(*x.rhs);
          if (std::holds_alternative<Query::SetOp>(x.rhs->node)) rhs = "(" + rhs + ")";
          return lhs + " " + op + " " + rhs;
        }
      },
      q.node);
}

}  // namespace nullsql
