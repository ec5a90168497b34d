#include "thingc/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace thingc {

std::string Value::str() const {
  if (type == VarType::Enum) return sym;
  std::ostringstream os;
  if (num == std::floor(num) && std::abs(num) < 1e15) {
    os << static_cast<long long>(num);
  } else {
    os << num;
  }
  return os.str();
}

bool operator==(const Value& a, const Value& b) {
  if (a.type != b.type) return false;
  return a.type == VarType::Number ? a.num == b.num : a.sym == b.sym;
}

ExprPtr Expr::make_number(double n) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->number = n;
  return e;
}

ExprPtr Expr::make_ident(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Ident;
  e->ident = std::move(name);
  return e;
}

ExprPtr Expr::make_now() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Now;
  return e;
}

ExprPtr Expr::make_not(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Not;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr Expr::make_binary(BinOp op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

namespace {

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Ge: return ">=";
    case BinOp::Gt: return ">";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

// Higher binds tighter. `not` sits between comparison and multiplication.
int op_prec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Ge:
    case BinOp::Gt: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul: return 6;
  }
  return 0;
}

void print(const Expr& e, int parent_prec, std::ostringstream& os) {
  switch (e.kind) {
    case Expr::Kind::Number:
      os << Value::number(e.number).str();
      return;
    case Expr::Kind::Ident:
      os << e.ident;
      return;
    case Expr::Kind::Now:
      os << "now()";
      return;
    case Expr::Kind::Not: {
      if (parent_prec > 4) os << "(";
      os << "not ";
      print(*e.lhs, 4, os);
      if (parent_prec > 4) os << ")";
      return;
    }
    case Expr::Kind::Binary: {
      int p = op_prec(e.op);
      if (parent_prec > p) os << "(";
      print(*e.lhs, p, os);
      os << " " << op_text(e.op) << " ";
      print(*e.rhs, p + 1, os);  // left-associative
      if (parent_prec > p) os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(e, 0, os);
  return os.str();
}

std::string to_string(const ExprPtr& e) { return e ? to_string(*e) : std::string(); }

std::string to_string(const Action& a) { return a.var + " := " + to_string(a.value); }

Value eval(const Expr& e, const EvalContext& ctx) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Value::number(e.number);
    case Expr::Kind::Ident: {
      if (ctx.vars) {
        auto it = ctx.vars->find(e.ident);
        if (it != ctx.vars->end()) return it->second;
      }
      return Value::symbol(e.ident);
    }
    case Expr::Kind::Now:
      return Value::number(static_cast<double>(ctx.now));
    case Expr::Kind::Not:
      return Value::number(eval(*e.lhs, ctx).truthy() ? 0 : 1);
    case Expr::Kind::Binary: {
      Value l = eval(*e.lhs, ctx);
      Value r = eval(*e.rhs, ctx);
      auto num = [](bool b) { return Value::number(b ? 1 : 0); };
      switch (e.op) {
        case BinOp::Add: return Value::number(l.num + r.num);
        case BinOp::Sub: return Value::number(l.num - r.num);
        case BinOp::Mul: return Value::number(l.num * r.num);
        case BinOp::Lt: return num(l.num < r.num);
        case BinOp::Le: return num(l.num <= r.num);
        case BinOp::Ge: return num(l.num >= r.num);
        case BinOp::Gt: return num(l.num > r.num);
        case BinOp::Eq: return num(l == r);
        case BinOp::Ne: return num(!(l == r));
        case BinOp::And: return num(l.truthy() && r.truthy());
        case BinOp::Or: return num(l.truthy() || r.truthy());
      }
      return Value::number(0);
    }
  }
  return Value::number(0);
}

void collect_idents(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Ident:
      out.push_back(e.ident);
      return;
    case Expr::Kind::Not:
      collect_idents(*e.lhs, out);
      return;
    case Expr::Kind::Binary:
      collect_idents(*e.lhs, out);
      collect_idents(*e.rhs, out);
      return;
    default:
      return;
  }
}

namespace {

struct ExprParser {
  const std::string& text;
  size_t pos = 0;
  std::string err;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  bool eat(const char* tok) {
    skip_ws();
    size_t n = std::char_traits<char>::length(tok);
    if (text.compare(pos, n, tok) == 0) {
      pos += n;
      return true;
    }
    return false;
  }

  bool eat_word(const char* word) {
    skip_ws();
    size_t n = std::char_traits<char>::length(word);
    if (text.compare(pos, n, word) != 0) return false;
    size_t after = pos + n;
    if (after < text.size() &&
        (std::isalnum(static_cast<unsigned char>(text[after])) || text[after] == '_'))
      return false;
    pos = after;
    return true;
  }

  ExprPtr fail(const std::string& what) {
    if (err.empty()) err = what;
    return nullptr;
  }

  ExprPtr parse_or() {
    auto l = parse_and();
    if (!l) return nullptr;
    while (eat_word("or")) {
      auto r = parse_and();
      if (!r) return nullptr;
      l = Expr::make_binary(BinOp::Or, l, r);
    }
    return l;
  }

  ExprPtr parse_and() {
    auto l = parse_not();
    if (!l) return nullptr;
    while (eat_word("and")) {
      auto r = parse_not();
      if (!r) return nullptr;
      l = Expr::make_binary(BinOp::And, l, r);
    }
    return l;
  }

  ExprPtr parse_not() {
    if (eat_word("not")) {
      auto inner = parse_not();
      if (!inner) return nullptr;
      return Expr::make_not(inner);
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    auto l = parse_add();
    if (!l) return nullptr;
    BinOp op;
    skip_ws();
    if (eat("<=")) op = BinOp::Le;
    else if (eat(">=")) op = BinOp::Ge;
    else if (eat("==")) op = BinOp::Eq;
    else if (eat("!=")) op = BinOp::Ne;
    else if (eat("<")) op = BinOp::Lt;
    else if (eat(">")) op = BinOp::Gt;
    else return l;
    auto r = parse_add();
    if (!r) return nullptr;
    return Expr::make_binary(op, l, r);
  }

  ExprPtr parse_add() {
    auto l = parse_mul();
    if (!l) return nullptr;
    for (;;) {
      skip_ws();
      if (eat("+")) {
        auto r = parse_mul();
        if (!r) return nullptr;
        l = Expr::make_binary(BinOp::Add, l, r);
      } else if (eat("-")) {
        auto r = parse_mul();
        if (!r) return nullptr;
        l = Expr::make_binary(BinOp::Sub, l, r);
      } else {
        return l;
      }
    }
  }

  ExprPtr parse_mul() {
    auto l = parse_atom();
    if (!l) return nullptr;
    while (eat("*")) {
      auto r = parse_atom();
      if (!r) return nullptr;
      l = Expr::make_binary(BinOp::Mul, l, r);
    }
    return l;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) return fail("unexpected end of expression");
    char c = text[pos];
    if (c == '(') {
      pos++;
      auto e = parse_or();
      if (!e) return nullptr;
      if (!eat(")")) return fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
      size_t end;
      double v = std::stod(text.substr(pos), &end);
      pos += end;
      return Expr::make_number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        pos++;
      std::string word = text.substr(start, pos - start);
      if (word == "now") {
        if (!eat("(") || !eat(")")) return fail("expected () after now");
        return Expr::make_now();
      }
      return Expr::make_ident(word);
    }
    return fail(std::string("unexpected character '") + c + "' in expression");
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& text, std::string& err) {
  ExprParser p{text};
  auto e = p.parse_or();
  if (e) {
    p.skip_ws();
    if (p.pos != text.size()) {
      err = "trailing input after expression: '" + text.substr(p.pos) + "'";
      return nullptr;
    }
  } else {
    err = p.err.empty() ? "invalid expression" : p.err;
  }
  return e;
}

}  // namespace thingc
