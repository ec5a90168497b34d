#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace thingc {

// Guard/action expression language: numeric literals, variable names,
// + - *, comparisons, enum-value tests, and/or/not, now().

enum class VarType { Number, Enum };

struct Value {
  VarType type = VarType::Number;
  double num = 0;
  std::string sym;  // enum value when type == Enum

  static Value number(double n) { return {VarType::Number, n, {}}; }
  static Value symbol(std::string s) { return {VarType::Enum, 0, std::move(s)}; }
  bool truthy() const { return type == VarType::Number ? num != 0 : !sym.empty(); }
  std::string str() const;
  friend bool operator==(const Value& a, const Value& b);
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { Add, Sub, Mul, Lt, Le, Eq, Ne, Ge, Gt, And, Or };

struct Expr {
  enum class Kind { Number, Ident, Now, Not, Binary };
  Kind kind = Kind::Number;
  double number = 0;
  std::string ident;
  BinOp op = BinOp::Add;
  ExprPtr lhs, rhs;

  static ExprPtr make_number(double n);
  static ExprPtr make_ident(std::string name);
  static ExprPtr make_now();
  static ExprPtr make_not(ExprPtr e);
  static ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r);
};

// Canonical text form; parse(to_string(e)) reproduces the same tree.
std::string to_string(const Expr& e);
std::string to_string(const ExprPtr& e);

struct Action {
  std::string var;
  ExprPtr value;
};
std::string to_string(const Action& a);

struct EvalContext {
  const std::unordered_map<std::string, Value>* vars = nullptr;
  long long now = 0;
};

// Unknown identifiers evaluate to enum symbols; validation rejects guards
// whose identifiers are neither variables nor declared enum values.
Value eval(const Expr& e, const EvalContext& ctx);

// Collects every identifier appearing in the expression.
void collect_idents(const Expr& e, std::vector<std::string>& out);

// Parses the expression sublanguage. On failure returns nullptr and sets err.
ExprPtr parse_expr(const std::string& text, std::string& err);

}  // namespace thingc
