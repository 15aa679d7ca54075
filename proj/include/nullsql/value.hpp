#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nullsql {

/// A base constant: a signed 64-bit integer or a unicode (UTF-8) string.
/// The total order places every integer below every string; within a kind,
/// integers compare numerically and strings byte-lexicographically (which is
/// codepoint order for UTF-8).
class BaseConst {
 public:
  explicit BaseConst(std::int64_t v) : data_(v) {}
  explicit BaseConst(std::string v) : data_(std::move(v)) {}
  explicit BaseConst(const char* v) : data_(std::string(v)) {}

  bool is_int() const noexcept { return data_.index() == 0; }
  bool is_str() const noexcept { return data_.index() == 1; }

  std::int64_t int_value() const { return std::get<0>(data_); }
  const std::string& str_value() const { return std::get<1>(data_); }

  friend bool operator==(const BaseConst&, const BaseConst&) = default;
  friend std::strong_ordering operator<=>(const BaseConst& a, const BaseConst& b) {
    return a.data_ <=> b.data_;
  }

 private:
  std::variant<std::int64_t, std::string> data_;
};

/// A value is a base constant or NULL. NULL is strictly least in the value
/// order, so canonical forms are deterministic. Note that this order is a
/// *data* order: condition-level equality (veq) treats NULL differently.
class Value {
 public:
  Value() = default;  // NULL
  explicit Value(BaseConst c) : data_(std::move(c)) {}

  static Value null() { return Value{}; }
  static Value integer(std::int64_t v) { return Value(BaseConst(v)); }
  static Value string(std::string v) { return Value(BaseConst(std::move(v))); }

  bool is_null() const noexcept { return !data_.has_value(); }
  const BaseConst& constant() const { return *data_; }

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    return a.data_ <=> b.data_;  // nullopt (NULL) sorts first
  }

 private:
  std::optional<BaseConst> data_;
};

/// Tuples are value sequences ordered lexicographically; the arity is the
/// length. All tuples flowing through one relation share its arity.
using Tuple = std::vector<Value>;

inline std::string to_string(const BaseConst& c) {
  return c.is_int() ? std::to_string(c.int_value()) : c.str_value();
}

inline std::string to_string(const Value& v) {
  return v.is_null() ? "NULL" : to_string(v.constant());
}

inline std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t[i]);
  }
  out += ")";
  return out;
}

}  // namespace nullsql
