#include "drumlab/exprdsl.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace drumlab {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  double value = 0.0;     // number
  std::string text;       // ident
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, pos_, 0.0, {}});
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        out.push_back(ident());
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::plus; break;
          case '-': k = Tok::minus; break;
          case '*': k = Tok::star; break;
          case '/': k = Tok::slash; break;
          case '^': k = Tok::caret; break;
          case '(': k = Tok::lparen; break;
          case ')': k = Tok::rparen; break;
          default:
            throw ParseError("unexpected character '" + std::string(1, c) + "'",
                             pos_, "number, identifier, operator or parenthesis");
        }
        out.push_back({k, pos_, 0.0, {}});
        ++pos_;
      }
    }
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  Token number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", start, "digit");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw ParseError("malformed exponent", mark, "exponent digits");
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    Token t{Tok::number, start, 0.0, {}};
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto res = std::from_chars(first, last, t.value);
    if (res.ec != std::errc{} || res.ptr != last)
      throw ParseError("malformed number", start, "numeric literal");
    return t;
  }

  Token ident() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isalnum(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    Token t{Tok::ident, start, 0.0, {}};
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

using NodePtr = std::shared_ptr<const Expr>;

NodePtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::number;
  e->number = v;
  return e;
}

NodePtr make_var(VarName v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::variable;
  e->var = v;
  return e;
}

NodePtr make_neg(NodePtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::negate;
  e->lhs = std::move(operand);
  return e;
}

NodePtr make_binary(BinaryOp op, NodePtr l, NodePtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::binary;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

NodePtr make_call(Builtin fn, NodePtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::call;
  e->fn = fn;
  e->lhs = std::move(arg);
  return e;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr run() {
    NodePtr e = expr();
    expect(Tok::end, "end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  const Token& advance() { return toks_[pos_++]; }

  bool match(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(Tok k, const char* what) {
    if (!match(k))
      throw ParseError("unexpected token", peek().offset, what);
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (match(Tok::plus))
        e = make_binary(BinaryOp::add, e, term());
      else if (match(Tok::minus))
        e = make_binary(BinaryOp::sub, e, term());
      else
        return e;
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    while (true) {
      if (match(Tok::star))
        e = make_binary(BinaryOp::mul, e, factor());
      else if (match(Tok::slash))
        e = make_binary(BinaryOp::div, e, factor());
      else
        return e;
    }
  }

  NodePtr factor() {
    if (match(Tok::minus)) return make_neg(power());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (match(Tok::caret)) return make_binary(BinaryOp::pow, base, factor());
    return base;
  }

  NodePtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number:
        advance();
        return make_number(t.value);
      case Tok::lparen: {
        advance();
        NodePtr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident: {
        advance();
        if (t.text == "u") return make_var(VarName::u);
        if (t.text == "v") return make_var(VarName::v);
        if (t.text == "x") return make_var(VarName::x);
        if (t.text == "y") return make_var(VarName::y);
        if (t.text == "pi") return make_number(M_PI);
        Builtin fn;
        if (t.text == "sin") fn = Builtin::sin;
        else if (t.text == "cos") fn = Builtin::cos;
        else if (t.text == "exp") fn = Builtin::exp;
        else if (t.text == "sqrt") fn = Builtin::sqrt;
        else if (t.text == "abs") fn = Builtin::abs;
        else
          throw ParseError("unknown identifier '" + t.text + "'", t.offset,
                           "one of u, v, x, y, pi, sin, cos, exp, sqrt, abs");
        expect(Tok::lparen, "'(' after function name");
        NodePtr arg = expr();
        expect(Tok::rparen, "')'");
        return make_call(fn, arg);
      }
      default:
        throw ParseError("unexpected token", t.offset,
                         "number, identifier or '('");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

double eval_node(const Expr& e, std::span<const double> coords) {
  switch (e.kind) {
    case ExprKind::number:
      return e.number;
    case ExprKind::variable: {
      const bool first = e.var == VarName::u || e.var == VarName::x;
      const std::size_t idx = first ? 0 : 1;
      if (idx >= coords.size()) {
        static const char* names[] = {"u", "v", "x", "y"};
        throw EvalError(std::string("unbound variable '") +
                        names[static_cast<int>(e.var)] + "'");
      }
      return coords[idx];
    }
    case ExprKind::negate:
      return -eval_node(*e.lhs, coords);
    case ExprKind::binary: {
      const double a = eval_node(*e.lhs, coords);
      const double b = eval_node(*e.rhs, coords);
      switch (e.op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div:
          if (b == 0.0) throw EvalError("division by zero");
          return a / b;
        case BinaryOp::pow: {
          const double r = std::pow(a, b);
          if (std::isnan(r))
            throw EvalError("domain error in power (negative base with "
                            "non-integer exponent)");
          return r;
        }
      }
      break;
    }
    case ExprKind::call: {
      const double a = eval_node(*e.lhs, coords);
      switch (e.fn) {
        case Builtin::sin: return std::sin(a);
        case Builtin::cos: return std::cos(a);
        case Builtin::exp: return std::exp(a);
        case Builtin::sqrt:
          if (a < 0.0) throw EvalError("sqrt of a negative value");
          return std::sqrt(a);
        case Builtin::abs: return std::abs(a);
      }
      break;
    }
  }
  throw EvalError("corrupt expression node");
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Precedence: add/sub 1, mul/div 2, unary minus 3, pow 4, atoms 5.
int node_prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::binary:
      switch (e.op) {
        case BinaryOp::add:
        case BinaryOp::sub: return 1;
        case BinaryOp::mul:
        case BinaryOp::div: return 2;
        case BinaryOp::pow: return 4;
      }
      return 5;
    case ExprKind::negate:
      return 3;
    case ExprKind::number:
      return e.number < 0.0 ? 3 : 5;  // prints with a leading '-'
    default:
      return 5;
  }
}

void print_node(const Expr& e, int min_prec, std::string& out) {
  const bool parens = node_prec(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::number:
      out += format_number(e.number);
      break;
    case ExprKind::variable: {
      static const char* names[] = {"u", "v", "x", "y"};
      out += names[static_cast<int>(e.var)];
      break;
    }
    case ExprKind::negate:
      out += '-';
      print_node(*e.lhs, 4, out);
      break;
    case ExprKind::binary: {
      const char* sym = nullptr;
      int left_min = 0, right_min = 0;
      switch (e.op) {
        case BinaryOp::add: sym = "+"; left_min = 1; right_min = 2; break;
        case BinaryOp::sub: sym = "-"; left_min = 1; right_min = 2; break;
        case BinaryOp::mul: sym = "*"; left_min = 2; right_min = 3; break;
        case BinaryOp::div: sym = "/"; left_min = 2; right_min = 3; break;
        // '^' takes an atom on the left and a factor on the right.
        case BinaryOp::pow: sym = "^"; left_min = 5; right_min = 3; break;
      }
      print_node(*e.lhs, left_min, out);
      out += sym;
      print_node(*e.rhs, right_min, out);
      break;
    }
    case ExprKind::call: {
      static const char* names[] = {"sin", "cos", "exp", "sqrt", "abs"};
      out += names[static_cast<int>(e.fn)];
      out += '(';
      print_node(*e.lhs, 1, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

DensityExpr DensityExpr::parse(std::string_view text) {
  Lexer lex(text);
  Parser parser(lex.run());
  DensityExpr d;
  d.root_ = parser.run();
  return d;
}

DensityExpr DensityExpr::from_ast(std::shared_ptr<const Expr> root) {
  if (!root) throw std::invalid_argument("null expression");
  DensityExpr d;
  d.root_ = std::move(root);
  return d;
}

double DensityExpr::eval(std::span<const double> coords) const {
  if (!root_) return 1.0;
  return eval_node(*root_, coords);
}

double DensityExpr::eval(double u, double v) const {
  const double c[2] = {u, v};
  return eval(std::span<const double>(c, 2));
}

std::string DensityExpr::str() const {
  if (!root_) return "1";
  std::string out;
  print_node(*root_, 0, out);
  return out;
}

}  // namespace drumlab
