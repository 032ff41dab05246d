#include "dualgeo/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "dualgeo/field.hpp"

namespace dualgeo {

struct ExprNode {
  Op op = Op::Number;
  double number = 0.0;
  int index = 0;
  std::vector<Expr> args;
};

SyntaxError::SyntaxError(std::size_t position, const std::string& what)
    : ExprError("syntax error at offset " + std::to_string(position) + ": " + what), position_(position) {}

IndexRangeError::IndexRangeError(std::size_t position, const std::string& what)
    : ExprError("index out of range at offset " + std::to_string(position) + ": " + what),
      position_(position) {}

DomainError::DomainError(const std::string& what, std::string subexpression)
    : ExprError(what + " in " + subexpression), subexpression_(std::move(subexpression)) {}

namespace {

const std::shared_ptr<const ExprNode>& zero_node() {
  static const auto node = std::make_shared<const ExprNode>();
  return node;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Neg: return "neg";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "pow";
    default: return "?";
  }
}

bool is_unary(Op op) {
  return op == Op::Neg || op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Log || op == Op::Sqrt;
}

void format_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Number: format_number(out, e.number()); return;
    case Op::X: out += 'x'; out += std::to_string(e.index()); return;
    case Op::P: out += 'p'; out += std::to_string(e.index()); return;
    default: break;
  }
  out += '(';
  out += op_name(e.op());
  for (const Expr& a : e.args()) {
    out += ' ';
    print(a, out);
  }
  if (e.op() == Op::Pow) {
    out += ' ';
    format_number(out, e.number());
  }
  out += ')';
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double c) {
  auto n = std::make_shared<ExprNode>();
  n->number = c;
  node_ = std::move(n);
}

Expr Expr::x(int i) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::X;
  n->index = i;
  return Expr(std::move(n));
}

Expr Expr::p(int a) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::P;
  n->index = a;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary(op)) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args.push_back(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::nary(Op op, std::vector<Expr> args) {
  const bool binary = op == Op::Sub || op == Op::Div;
  if (!(binary || op == Op::Add || op == Op::Mul)) throw std::invalid_argument("not an n-ary operator");
  if (binary ? args.size() != 2 : args.size() < 2) throw std::invalid_argument("wrong operand count");
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, double exponent) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Pow;
  n->number = exponent;
  n->args.push_back(std::move(base));
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::number() const { return node_->number; }
int Expr::index() const { return node_->index; }
std::span<const Expr> Expr::args() const { return node_->args; }

bool Expr::references_p() const { return max_p_index() > 0; }

int Expr::max_x_index() const {
  if (op() == Op::X) return index();
  int best = 0;
  for (const Expr& a : args()) best = std::max(best, a.max_x_index());
  return best;
}

int Expr::max_p_index() const {
  if (op() == Op::P) return index();
  int best = 0;
  for (const Expr& a : args()) best = std::max(best, a.max_p_index());
  return best;
}

std::string Expr::str() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.number() != b.number() || a.index() != b.index()) return false;
  auto aa = a.args(), ba = b.args();
  return std::equal(aa.begin(), aa.end(), ba.begin(), ba.end());
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_number() && b.is_number()) return Expr(a.number() + b.number());
  return Expr::nary(Op::Add, {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_number() && b.is_number()) return Expr(a.number() - b.number());
  return Expr::nary(Op::Sub, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_number() && a.number() == 1.0) return b;
  if (b.is_number() && b.number() == 1.0) return a;
  if (a.is_number() && b.is_number()) return Expr(a.number() * b.number());
  return Expr::nary(Op::Mul, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) { return Expr::nary(Op::Div, {a, b}); }

Expr operator-(const Expr& a) {
  if (a.is_number()) return Expr(-a.number());
  return Expr::unary(Op::Neg, a);
}

Expr sin(const Expr& e) { return Expr::unary(Op::Sin, e); }
Expr cos(const Expr& e) { return Expr::unary(Op::Cos, e); }
Expr exp(const Expr& e) { return Expr::unary(Op::Exp, e); }
Expr log(const Expr& e) { return Expr::unary(Op::Log, e); }
Expr sqrt(const Expr& e) { return Expr::unary(Op::Sqrt, e); }

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, int m, int r) : text_(text), m_(m), r_(r) {}

  Expr parse_all() {
    Expr e = parse();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "trailing input");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view token() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  static bool looks_numeric(std::string_view t) {
    if (t.empty()) return false;
    std::size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    return k < t.size() && (std::isdigit(static_cast<unsigned char>(t[k])) || t[k] == '.');
  }

  double number_token(std::size_t at, std::string_view t) {
    std::string_view body = t;
    if (!body.empty() && body[0] == '+') body.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size())
      throw SyntaxError(at, "malformed number '" + std::string(t) + "'");
    return v;
  }

  Expr atom(std::size_t at, std::string_view t) {
    if (looks_numeric(t)) return Expr(number_token(at, t));
    if (t.size() >= 2 && (t[0] == 'x' || t[0] == 'p') &&
        std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      int idx = 0;
      auto res = std::from_chars(t.data() + 1, t.data() + t.size(), idx);
      const int limit = t[0] == 'x' ? m_ : r_;
      if (res.ec != std::errc() || idx < 1 || idx > limit)
        throw IndexRangeError(at, "'" + std::string(t) + "' but the " + (t[0] == 'x' ? "base" : "fiber") +
                                      " dimension is " + std::to_string(limit));
      return t[0] == 'x' ? Expr::x(idx) : Expr::p(idx);
    }
    throw SyntaxError(at, "unexpected token '" + std::string(t) + "'");
  }

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    if (text_[pos_] == ')') throw SyntaxError(pos_, "unexpected ')'");
    if (text_[pos_] != '(') {
      std::size_t at = pos_;
      return atom(at, token());
    }
    const std::size_t open = pos_++;
    skip_space();
    const std::size_t op_at = pos_;
    std::string_view name = token();
    if (name.empty()) throw SyntaxError(op_at, "missing operator");

    static const std::pair<std::string_view, Op> kOps[] = {
        {"+", Op::Add},   {"-", Op::Sub},   {"*", Op::Mul},   {"/", Op::Div},
        {"neg", Op::Neg}, {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"pow", Op::Pow}};
    auto it = std::find_if(std::begin(kOps), std::end(kOps), [&](const auto& kv) { return kv.first == name; });
    if (it == std::end(kOps)) throw SyntaxError(op_at, "unknown operator '" + std::string(name) + "'");
    const Op op = it->second;

    std::vector<Expr> args;
    std::vector<std::size_t> arg_pos;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw SyntaxError(open, "unclosed '('");
      if (text_[pos_] == ')') break;
      arg_pos.push_back(pos_);
      args.push_back(parse());
    }
    const std::size_t close = pos_++;

    if (op == Op::Pow) {
      if (args.size() != 2) throw SyntaxError(close, "pow takes exactly two operands");
      if (!args[1].is_number()) throw SyntaxError(arg_pos[1], "pow exponent must be a number");
      return Expr::pow(args[0], args[1].number());
    }
    if (is_unary(op)) {
      if (args.size() != 1) throw SyntaxError(close, std::string(name) + " takes exactly one operand");
      return Expr::unary(op, args[0]);
    }
    if (op == Op::Sub || op == Op::Div) {
      if (args.size() != 2) throw SyntaxError(close, std::string(name) + " takes exactly two operands");
    } else if (args.size() < 2) {
      throw SyntaxError(close, std::string(name) + " takes at least two operands");
    }
    return Expr::nary(op, std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int m_, r_;
};

}  // namespace

Expr parse_expr(std::string_view text, int m, int r) { return Parser(text, m, r).parse_all(); }

Expr substitute_x(const Expr& e, std::span<const Expr> replacement) {
  switch (e.op()) {
    case Op::Number:
    case Op::P: return e;
    case Op::X:
      if (e.index() < 1 || e.index() > static_cast<int>(replacement.size()))
        throw std::out_of_range("substitution has no entry for x" + std::to_string(e.index()));
      return replacement[e.index() - 1];
    case Op::Pow: return Expr::pow(substitute_x(e.args()[0], replacement), e.number());
    default: break;
  }
  std::vector<Expr> args;
  for (const Expr& a : e.args()) args.push_back(substitute_x(a, replacement));
  if (args.size() == 1) return Expr::unary(e.op(), std::move(args[0]));
  return Expr::nary(e.op(), std::move(args));
}

// ------------------------------------------------------------- evaluation

namespace {

// Falling factorial c (c-1) ... (c-k+1).
double falling(double c, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= c - i;
  return f;
}

Jet pow_jet(const Expr& node, const Jet& u, double c) {
  const double b = u.value();
  const bool integral = c == std::floor(c);
  if (b < 0.0 && !integral) throw DomainError("negative base with non-integer exponent", node.str());
  std::array<double, 4> f{};
  for (int k = 0; k <= u.order(); ++k) {
    const double coef = falling(c, k);
    if (coef == 0.0) continue;
    if (b == 0.0 && c - k < 0.0) throw DomainError("zero base with negative power", node.str());
    f[k] = coef * std::pow(b, c - k);
  }
  return u.compose(f[0], f[1], f[2], f[3]);
}

Jet eval(const Expr& e, const Point& pt, int order) {
  const int n = pt.n();
  switch (e.op()) {
    case Op::Number: return Jet::constant(n, order, e.number());
    case Op::X:
      if (e.index() > pt.m()) throw std::out_of_range("x" + std::to_string(e.index()) + " exceeds point dimension");
      return Jet::variable(n, order, e.index() - 1, pt.x[e.index() - 1]);
    case Op::P:
      if (e.index() > pt.r()) throw std::out_of_range("p" + std::to_string(e.index()) + " exceeds point dimension");
      return Jet::variable(n, order, pt.m() + e.index() - 1, pt.p[e.index() - 1]);
    default: break;
  }
  auto args = e.args();
  switch (e.op()) {
    case Op::Neg: return -eval(args[0], pt, order);
    case Op::Sin: {
      Jet u = eval(args[0], pt, order);
      const double s = std::sin(u.value()), c = std::cos(u.value());
      return u.compose(s, c, -s, -c);
    }
    case Op::Cos: {
      Jet u = eval(args[0], pt, order);
      const double s = std::sin(u.value()), c = std::cos(u.value());
      return u.compose(c, -s, -c, s);
    }
    case Op::Exp: {
      Jet u = eval(args[0], pt, order);
      const double v = std::exp(u.value());
      return u.compose(v, v, v, v);
    }
    case Op::Log: {
      Jet u = eval(args[0], pt, order);
      const double v = u.value();
      if (!(v > 0.0)) throw DomainError("log of non-positive value", e.str());
      return u.compose(std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
    }
    case Op::Sqrt: {
      Jet u = eval(args[0], pt, order);
      const double v = u.value();
      if (!(v > 0.0)) throw DomainError("sqrt of non-positive value", e.str());
      const double s = std::sqrt(v);
      return u.compose(s, 0.5 / s, -0.25 / (v * s), 0.375 / (v * v * s));
    }
    case Op::Pow: return pow_jet(e, eval(args[0], pt, order), e.number());
    case Op::Add: {
      Jet acc = eval(args[0], pt, order);
      for (std::size_t k = 1; k < args.size(); ++k) acc += eval(args[k], pt, order);
      return acc;
    }
    case Op::Sub: return eval(args[0], pt, order) - eval(args[1], pt, order);
    case Op::Mul: {
      Jet acc = eval(args[0], pt, order);
      for (std::size_t k = 1; k < args.size(); ++k) acc = acc * eval(args[k], pt, order);
      return acc;
    }
    case Op::Div: {
      Jet num = eval(args[0], pt, order);
      Jet den = eval(args[1], pt, order);
      const double v = den.value();
      if (v == 0.0) throw DomainError("division by zero", e.str());
      const double inv = 1.0 / v;
      return num * den.compose(inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv);
    }
    default: break;
  }
  throw std::logic_error("unhandled expression node");
}

double value(const Expr& e, const Point& pt) {
  auto args = e.args();
  switch (e.op()) {
    case Op::Number: return e.number();
    case Op::X:
      if (e.index() > pt.m()) throw std::out_of_range("x" + std::to_string(e.index()) + " exceeds point dimension");
      return pt.x[e.index() - 1];
    case Op::P:
      if (e.index() > pt.r()) throw std::out_of_range("p" + std::to_string(e.index()) + " exceeds point dimension");
      return pt.p[e.index() - 1];
    case Op::Neg: return -value(args[0], pt);
    case Op::Sin: return std::sin(value(args[0], pt));
    case Op::Cos: return std::cos(value(args[0], pt));
    case Op::Exp: return std::exp(value(args[0], pt));
    case Op::Log: {
      const double v = value(args[0], pt);
      if (!(v > 0.0)) throw DomainError("log of non-positive value", e.str());
      return std::log(v);
    }
    case Op::Sqrt: {
      const double v = value(args[0], pt);
      if (!(v > 0.0)) throw DomainError("sqrt of non-positive value", e.str());
      return std::sqrt(v);
    }
    case Op::Pow: {
      const double b = value(args[0], pt), c = e.number();
      if (b < 0.0 && c != std::floor(c)) throw DomainError("negative base with non-integer exponent", e.str());
      if (b == 0.0 && c < 0.0) throw DomainError("zero base with negative power", e.str());
      return std::pow(b, c);
    }
    case Op::Add: {
      double acc = value(args[0], pt);
      for (std::size_t k = 1; k < args.size(); ++k) acc += value(args[k], pt);
      return acc;
    }
    case Op::Sub: return value(args[0], pt) - value(args[1], pt);
    case Op::Mul: {
      double acc = value(args[0], pt);
      for (std::size_t k = 1; k < args.size(); ++k) acc *= value(args[k], pt);
      return acc;
    }
    case Op::Div: {
      const double den = value(args[1], pt);
      if (den == 0.0) throw DomainError("division by zero", e.str());
      return value(args[0], pt) / den;
    }
  }
  throw std::logic_error("unhandled expression node");
}

}  // namespace

Jet eval_jet(const Expr& e, const Point& pt, int order) {
  if (order < 0 || order > Jet::kMaxOrder) throw std::invalid_argument("jet order must be in 0..3");
  return eval(e, pt, order);
}

double eval_value(const Expr& e, const Point& pt) { return value(e, pt); }

}  // namespace dualgeo
