#include "spin2d/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

constexpr std::array<std::pair<std::string_view, Expr::Func>, 7> kFuncs{{
    {"sin", Expr::Func::Sin},
    {"cos", Expr::Func::Cos},
    {"sinh", Expr::Func::Sinh},
    {"cosh", Expr::Func::Cosh},
    {"exp", Expr::Func::Exp},
    {"ln", Expr::Func::Ln},
    {"sqrt", Expr::Func::Sqrt},
}};

NodePtr make(Expr::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Number;
  n->number = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) {
      if (src_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Expr::Kind::Add, lhs, term());
      else if (accept('-'))
        lhs = make(Expr::Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Expr::Kind::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Expr::Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Expr::Kind::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Expr::Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) {
        skip_ws();
        throw ParseError(pos_ == src_.size() ? "unbalanced '(' opened at offset " + std::to_string(open)
                                             : "expected ')'",
                         pos_);
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v))
      throw ParseError("malformed number '" + text + "'", start);
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return make(Expr::Kind::VarX);
    if (name == "y") return make(Expr::Kind::VarY);
    if (name == "i") return make(Expr::Kind::ImagUnit);
    for (const auto& [fname, f] : kFuncs) {
      if (name != fname) continue;
      if (!accept('(')) {
        skip_ws();
        throw ParseError("expected '(' after " + std::string(name), pos_);
      }
      NodePtr arg = expr();
      if (!accept(')')) {
        skip_ws();
        throw ParseError("expected ')' closing " + std::string(name), pos_);
      }
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Kind::Call;
      n->func = f;
      n->lhs = std::move(arg);
      return n;
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expr::Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case Expr::Kind::Number: out += format_number(n.number); break;
    case Expr::Kind::ImagUnit: out += 'i'; break;
    case Expr::Kind::VarX: out += 'x'; break;
    case Expr::Kind::VarY: out += 'y'; break;
    case Expr::Kind::Add: binary(" + "); break;
    case Expr::Kind::Sub: binary(" - "); break;
    case Expr::Kind::Mul: binary(" * "); break;
    case Expr::Kind::Div: binary(" / "); break;
    case Expr::Kind::Pow: binary("^"); break;
    case Expr::Kind::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      break;
    case Expr::Kind::Call:
      out += func_name(n.func);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

std::string describe(const Expr::Node& n) {
  std::string s;
  print(n, s);
  return s;
}

Jet eval_node(const Expr::Node& n, Complex bx, Complex by, int order) {
  switch (n.kind) {
    case Expr::Kind::Number: return Jet::constant(n.number, order);
    case Expr::Kind::ImagUnit: return Jet::constant(Complex(0.0, 1.0), order);
    case Expr::Kind::VarX: return Jet::variable(Axis::X, bx, order);
    case Expr::Kind::VarY: return Jet::variable(Axis::Y, by, order);
    case Expr::Kind::Add: return eval_node(*n.lhs, bx, by, order) + eval_node(*n.rhs, bx, by, order);
    case Expr::Kind::Sub: return eval_node(*n.lhs, bx, by, order) - eval_node(*n.rhs, bx, by, order);
    case Expr::Kind::Mul: return eval_node(*n.lhs, bx, by, order) * eval_node(*n.rhs, bx, by, order);
    case Expr::Kind::Neg: return -eval_node(*n.lhs, bx, by, order);
    case Expr::Kind::Div: {
      const Jet den = eval_node(*n.rhs, bx, by, order);
      try {
        return eval_node(*n.lhs, bx, by, order) * reciprocal(den);
      } catch (const SingularError&) {
        throw DomainError("division by zero in '" + describe(n) + "'");
      }
    }
    case Expr::Kind::Pow: {
      const Jet base = eval_node(*n.lhs, bx, by, order);
      const Jet expo = eval_node(*n.rhs, bx, by, order);
      try {
        return pow(base, expo);
      } catch (const Error& e) {
        throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
      }
    }
    case Expr::Kind::Call: {
      const Jet a = eval_node(*n.lhs, bx, by, order);
      try {
        switch (n.func) {
          case Expr::Func::Sin: return sin(a);
          case Expr::Func::Cos: return cos(a);
          case Expr::Func::Sinh: return sinh(a);
          case Expr::Func::Cosh: return cosh(a);
          case Expr::Func::Exp: return exp(a);
          case Expr::Func::Ln: return log(a);
          case Expr::Func::Sqrt: return sqrt(a);
        }
      } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

bool depends(const Expr::Node& n, Axis axis) {
  if (n.kind == Expr::Kind::VarX) return axis == Axis::X;
  if (n.kind == Expr::Kind::VarY) return axis == Axis::Y;
  return (n.lhs && depends(*n.lhs, axis)) || (n.rhs && depends(*n.rhs, axis));
}

bool same(const Expr::Node* a, const Expr::Node* b) {
  if (a == nullptr || b == nullptr) return a == b;
  if (a->kind != b->kind) return false;
  if (a->kind == Expr::Kind::Number && a->number != b->number) return false;
  if (a->kind == Expr::Kind::Call && a->func != b->func) return false;
  return same(a->lhs.get(), b->lhs.get()) && same(a->rhs.get(), b->rhs.get());
}

}  // namespace

const char* func_name(Expr::Func f) {
  for (const auto& [name, fn] : kFuncs)
    if (fn == f) return name.data();
  return "?";
}

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).parse()); }

Expr Expr::constant(Complex c) {
  NodePtr re = make_number(std::abs(c.real()));
  if (c.real() < 0) re = make(Kind::Neg, re);
  if (c.imag() == 0.0) return Expr(re);
  NodePtr im = make(Kind::Mul, make_number(std::abs(c.imag())), make(Kind::ImagUnit));
  return Expr(make(c.imag() < 0 ? Kind::Sub : Kind::Add, re, im));
}

std::string Expr::to_string() const {
  if (!root_) return {};
  std::string s;
  print(*root_, s);
  return s;
}

Jet Expr::eval_jet(Complex base_x, Complex base_y, int order) const {
  if (!root_) throw Error("evaluating an empty expression");
  return eval_node(*root_, base_x, base_y, order);
}

bool Expr::depends_on(Axis axis) const { return root_ && depends(*root_, axis); }

bool Expr::structurally_equal(const Expr& other) const { return same(root_.get(), other.root_.get()); }

}  // namespace spin2d
