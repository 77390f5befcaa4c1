#include "cartan/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace cartan {

// ---------------------------------------------------------------- jets

ScalarJet ScalarJet::constant(double v, std::size_t n, int order) {
  ScalarJet j;
  j.order = order;
  j.value = v;
  if (order >= 1) j.grad.assign(n, 0.0);
  if (order >= 2) j.hess = Mat(n, n);
  return j;
}

ScalarJet ScalarJet::coordinate(double v, std::size_t index, std::size_t n, int order) {
  ScalarJet j = constant(v, n, order);
  if (order >= 1) j.grad[index] = 1.0;
  return j;
}

namespace {

std::size_t jet_dim(const ScalarJet& a) { return a.grad.size(); }

ScalarJet jet_like(const ScalarJet& a, double v) {
  return ScalarJet::constant(v, jet_dim(a), a.order);
}

}  // namespace

ScalarJet operator+(const ScalarJet& a, const ScalarJet& b) {
  ScalarJet r = a;
  r.value += b.value;
  if (r.order >= 1)
    for (std::size_t i = 0; i < r.grad.size(); ++i) r.grad[i] += b.grad[i];
  if (r.order >= 2)
    for (std::size_t i = 0; i < r.grad.size(); ++i)
      for (std::size_t j = 0; j < r.grad.size(); ++j) r.hess(i, j) += b.hess(i, j);
  return r;
}

ScalarJet operator-(const ScalarJet& a, const ScalarJet& b) {
  ScalarJet r = a;
  r.value -= b.value;
  if (r.order >= 1)
    for (std::size_t i = 0; i < r.grad.size(); ++i) r.grad[i] -= b.grad[i];
  if (r.order >= 2)
    for (std::size_t i = 0; i < r.grad.size(); ++i)
      for (std::size_t j = 0; j < r.grad.size(); ++j) r.hess(i, j) -= b.hess(i, j);
  return r;
}

ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
  const std::size_t n = jet_dim(a);
  ScalarJet r = jet_like(a, a.value * b.value);
  if (r.order >= 1)
    for (std::size_t i = 0; i < n; ++i) r.grad[i] = a.grad[i] * b.value + b.grad[i] * a.value;
  if (r.order >= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r.hess(i, j) = a.hess(i, j) * b.value + b.hess(i, j) * a.value +
                       a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j];
  return r;
}

ScalarJet operator-(const ScalarJet& a) {
  ScalarJet r = a;
  r.value = -r.value;
  if (r.order >= 1)
    for (double& g : r.grad) g = -g;
  if (r.order >= 2)
    for (std::size_t i = 0; i < r.grad.size(); ++i)
      for (std::size_t j = 0; j < r.grad.size(); ++j) r.hess(i, j) = -r.hess(i, j);
  return r;
}

namespace {

// f(u) with f0 = f(u), f1 = f'(u), f2 = f''(u).
ScalarJet jet_chain(const ScalarJet& u, double f0, double f1, double f2) {
  const std::size_t n = jet_dim(u);
  ScalarJet r = jet_like(u, f0);
  if (r.order >= 1)
    for (std::size_t i = 0; i < n; ++i) r.grad[i] = f1 * u.grad[i];
  if (r.order >= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r.hess(i, j) = f1 * u.hess(i, j) + f2 * u.grad[i] * u.grad[j];
  return r;
}

ScalarJet jet_reciprocal(const ScalarJet& u) {
  if (u.value == 0.0) throw EvalError("division by zero in expression");
  const double inv = 1.0 / u.value;
  return jet_chain(u, inv, -inv * inv, 2.0 * inv * inv * inv);
}

}  // namespace

ScalarJet operator/(const ScalarJet& a, const ScalarJet& b) { return a * jet_reciprocal(b); }

// ---------------------------------------------------------------- scope

EvalScope::EvalScope(const std::vector<std::string>& coords,
                     const std::map<std::string, double>& params) {
  dim_ = coords.size();
  for (std::size_t i = 0; i < coords.size(); ++i)
    table_[coords[i]] = Binding{true, i, 0.0};
  for (const auto& [name, value] : params) table_[name] = Binding{false, 0, value};
}

const EvalScope::Binding* EvalScope::find(const std::string& name) const {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------- AST

namespace detail {

enum class Fn { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, abs };

struct FnInfo {
  const char* name;
  Fn fn;
};

constexpr FnInfo kFns[] = {
    {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},
    {"sinh", Fn::sinh}, {"cosh", Fn::cosh}, {"tanh", Fn::tanh},
    {"exp", Fn::exp},   {"log", Fn::log},   {"sqrt", Fn::sqrt},
    {"abs", Fn::abs},
};

const FnInfo* find_fn(const std::string& name) {
  for (const auto& f : kFns)
    if (name == f.name) return &f;
  return nullptr;
}

struct ExprNode {
  enum class Kind { number, symbol, neg, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  double num = 0.0;
  std::string name;
  Fn fn = Fn::sin;
  std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::number;
  n->num = v;
  return n;
}

NodePtr make_symbol(const std::string& name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::symbol;
  n->name = name;
  return n;
}

NodePtr make_unary(ExprNode::Kind kind, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(ExprNode::Kind kind, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(Fn fn, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

// ------------------------------------------------------------- evaluation

double eval_value(const ExprNode& e, const EvalScope& scope, const Vec& x);

double eval_pow_value(double base, double expo) {
  if (base == 0.0 && expo < 0.0) throw EvalError("zero raised to a negative power");
  if (base < 0.0 && expo != std::nearbyint(expo))
    throw EvalError("negative base raised to a non-integer power");
  return std::pow(base, expo);
}

double eval_call_value(Fn fn, double u) {
  switch (fn) {
    case Fn::sin: return std::sin(u);
    case Fn::cos: return std::cos(u);
    case Fn::tan: return std::tan(u);
    case Fn::sinh: return std::sinh(u);
    case Fn::cosh: return std::cosh(u);
    case Fn::tanh: return std::tanh(u);
    case Fn::exp: return std::exp(u);
    case Fn::log:
      if (u <= 0.0) throw EvalError("log of a non-positive value");
      return std::log(u);
    case Fn::sqrt:
      if (u < 0.0) throw EvalError("sqrt of a negative value");
      return std::sqrt(u);
    case Fn::abs: return std::fabs(u);
  }
  throw EvalError("unknown function");
}

double eval_value(const ExprNode& e, const EvalScope& scope, const Vec& x) {
  using K = ExprNode::Kind;
  switch (e.kind) {
    case K::number: return e.num;
    case K::symbol: {
      const auto* b = scope.find(e.name);
      if (!b) throw EvalError("unbound identifier '" + e.name + "'");
      return b->is_coord ? x[b->index] : b->value;
    }
    case K::neg: return -eval_value(*e.a, scope, x);
    case K::add: return eval_value(*e.a, scope, x) + eval_value(*e.b, scope, x);
    case K::sub: return eval_value(*e.a, scope, x) - eval_value(*e.b, scope, x);
    case K::mul: return eval_value(*e.a, scope, x) * eval_value(*e.b, scope, x);
    case K::div: {
      const double d = eval_value(*e.b, scope, x);
      if (d == 0.0) throw EvalError("division by zero in expression");
      return eval_value(*e.a, scope, x) / d;
    }
    case K::pow:
      return eval_pow_value(eval_value(*e.a, scope, x), eval_value(*e.b, scope, x));
    case K::call: return eval_call_value(e.fn, eval_value(*e.a, scope, x));
  }
  throw EvalError("corrupt expression node");
}

bool jet_is_constant(const ScalarJet& j) {
  for (double g : j.grad)
    if (g != 0.0) return false;
  if (j.order >= 2)
    for (double h : j.hess.data())
      if (h != 0.0) return false;
  return true;
}

// u^m for the integer chain rule; m may be negative.
double pow_int(double u, long long m) {
  if (m == 0) return 1.0;
  if (u == 0.0) {
    if (m < 0) throw EvalError("zero raised to a negative power");
    return 0.0;
  }
  return std::pow(u, static_cast<double>(m));
}

ScalarJet eval_jet(const ExprNode& e, const EvalScope& scope, const Vec& x, int order);

ScalarJet eval_pow_jet(const ExprNode& e, const EvalScope& scope, const Vec& x, int order) {
  const ScalarJet u = eval_jet(*e.a, scope, x, order);
  const ScalarJet w = eval_jet(*e.b, scope, x, order);
  if (jet_is_constant(w)) {
    const double k = w.value;
    if (k == std::nearbyint(k) && std::fabs(k) < 1e15) {
      const long long m = static_cast<long long>(std::nearbyint(k));
      const double f0 = pow_int(u.value, m);
      const double f1 = (m == 0) ? 0.0 : m * pow_int(u.value, m - 1);
      const double f2 = (m == 0 || m == 1) ? 0.0 : m * (m - 1.0) * pow_int(u.value, m - 2);
      return jet_chain(u, f0, f1, f2);
    }
    if (u.value <= 0.0)
      throw EvalError("non-positive base raised to a non-integer power");
    const double f0 = std::pow(u.value, k);
    const double f1 = k * std::pow(u.value, k - 1.0);
    const double f2 = k * (k - 1.0) * std::pow(u.value, k - 2.0);
    return jet_chain(u, f0, f1, f2);
  }
  if (u.value <= 0.0)
    throw EvalError("non-positive base raised to a variable power");
  const ScalarJet lg = jet_chain(u, std::log(u.value), 1.0 / u.value,
                                 -1.0 / (u.value * u.value));
  const ScalarJet prod = w * lg;
  const double ex = std::exp(prod.value);
  return jet_chain(prod, ex, ex, ex);
}

ScalarJet eval_call_jet(Fn fn, const ScalarJet& u) {
  const double v = u.value;
  switch (fn) {
    case Fn::sin: return jet_chain(u, std::sin(v), std::cos(v), -std::sin(v));
    case Fn::cos: return jet_chain(u, std::cos(v), -std::sin(v), -std::cos(v));
    case Fn::tan: {
      const double t = std::tan(v);
      const double s2 = 1.0 + t * t;
      return jet_chain(u, t, s2, 2.0 * s2 * t);
    }
    case Fn::sinh: return jet_chain(u, std::sinh(v), std::cosh(v), std::sinh(v));
    case Fn::cosh: return jet_chain(u, std::cosh(v), std::sinh(v), std::cosh(v));
    case Fn::tanh: {
      const double t = std::tanh(v);
      const double s2 = 1.0 - t * t;
      return jet_chain(u, t, s2, -2.0 * s2 * t);
    }
    case Fn::exp: {
      const double ex = std::exp(v);
      return jet_chain(u, ex, ex, ex);
    }
    case Fn::log:
      if (v <= 0.0) throw EvalError("log of a non-positive value");
      return jet_chain(u, std::log(v), 1.0 / v, -1.0 / (v * v));
    case Fn::sqrt: {
      if (v < 0.0) throw EvalError("sqrt of a negative value");
      if (v == 0.0 && u.order >= 1)
        throw EvalError("sqrt is not differentiable at zero");
      const double s = std::sqrt(v);
      return jet_chain(u, s, 0.5 / s, -0.25 / (s * v));
    }
    case Fn::abs: {
      const double sg = (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
      return jet_chain(u, std::fabs(v), sg, 0.0);
    }
  }
  throw EvalError("unknown function");
}

ScalarJet eval_jet(const ExprNode& e, const EvalScope& scope, const Vec& x, int order) {
  using K = ExprNode::Kind;
  switch (e.kind) {
    case K::number: return ScalarJet::constant(e.num, scope.dim(), order);
    case K::symbol: {
      const auto* b = scope.find(e.name);
      if (!b) throw EvalError("unbound identifier '" + e.name + "'");
      if (b->is_coord)
        return ScalarJet::coordinate(x[b->index], b->index, scope.dim(), order);
      return ScalarJet::constant(b->value, scope.dim(), order);
    }
    case K::neg: return -eval_jet(*e.a, scope, x, order);
    case K::add: return eval_jet(*e.a, scope, x, order) + eval_jet(*e.b, scope, x, order);
    case K::sub: return eval_jet(*e.a, scope, x, order) - eval_jet(*e.b, scope, x, order);
    case K::mul: return eval_jet(*e.a, scope, x, order) * eval_jet(*e.b, scope, x, order);
    case K::div: return eval_jet(*e.a, scope, x, order) / eval_jet(*e.b, scope, x, order);
    case K::pow: return eval_pow_jet(e, scope, x, order);
    case K::call: return eval_call_jet(e.fn, eval_jet(*e.a, scope, x, order));
  }
  throw EvalError("corrupt expression node");
}

// ------------------------------------------------------------- printing

// Operator strength used for parenthesization. Atoms are 5.
int precedence(const ExprNode& e) {
  using K = ExprNode::Kind;
  switch (e.kind) {
    case K::add:
    case K::sub: return 1;
    case K::mul:
    case K::div: return 2;
    case K::neg: return 3;
    case K::number: return e.num < 0.0 ? 3 : 5;
    case K::pow: return 4;
    case K::symbol:
    case K::call: return 5;
  }
  return 5;
}

void print_node(const ExprNode& e, std::string& out);

void print_child(const ExprNode& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const ExprNode& e, std::string& out) {
  using K = ExprNode::Kind;
  switch (e.kind) {
    case K::number: out += format_double(e.num); return;
    case K::symbol: out += e.name; return;
    case K::neg:
      out += '-';
      print_child(*e.a, 4, out);
      return;
    case K::add:
      print_child(*e.a, 1, out);
      out += " + ";
      print_child(*e.b, 2, out);
      return;
    case K::sub:
      print_child(*e.a, 1, out);
      out += " - ";
      print_child(*e.b, 2, out);
      return;
    case K::mul:
      print_child(*e.a, 2, out);
      out += "*";
      print_child(*e.b, 3, out);
      return;
    case K::div:
      print_child(*e.a, 2, out);
      out += "/";
      print_child(*e.b, 5, out);
      return;
    case K::pow:
      print_child(*e.a, 5, out);
      out += "^";
      print_child(*e.b, 3, out);
      return;
    case K::call:
      for (const auto& f : kFns)
        if (f.fn == e.fn) {
          out += f.name;
          break;
        }
      out += '(';
      print_node(*e.a, out);
      out += ')';
      return;
  }
}

void collect(const ExprNode& e, std::set<std::string>& out) {
  if (e.kind == ExprNode::Kind::symbol) out.insert(e.name);
  if (e.a) collect(*e.a, out);
  if (e.b) collect(*e.b, out);
}

}  // namespace detail

// ---------------------------------------------------------------- parser

namespace {

struct Token {
  enum class Kind { number, ident, op, end } kind = Kind::end;
  double num = 0.0;
  std::string text;
  char op = 0;
  std::size_t line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
        continue;
      }
      break;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::Kind::end;
      return;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin)
        throw ParseError("malformed number", line_, col_);
      tok_.kind = Token::Kind::number;
      tok_.num = v;
      tok_.text.assign(begin, static_cast<const char*>(end));
      const std::size_t len = static_cast<std::size_t>(end - begin);
      pos_ += len;
      col_ += len;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t e = pos_;
      while (e < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_'))
        ++e;
      tok_.kind = Token::Kind::ident;
      tok_.text = s_.substr(pos_, e - pos_);
      col_ += e - pos_;
      pos_ = e;
      return;
    }
    if (std::string("+-*/^()").find(c) != std::string::npos) {
      tok_.kind = Token::Kind::op;
      tok_.op = c;
      ++pos_;
      ++col_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
  Token tok_;
};

using detail::ExprNode;
using detail::NodePtr;

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::end)
      throw ParseError("unexpected trailing input", t.line, t.col);
    return e;
  }

 private:
  bool peek_op(char c) const {
    return lex_.peek().kind == Token::Kind::op && lex_.peek().op == c;
  }

  NodePtr parse_sum() {
    NodePtr e = parse_term();
    while (peek_op('+') || peek_op('-')) {
      const char op = lex_.take().op;
      NodePtr rhs = parse_term();
      e = detail::make_binary(op == '+' ? ExprNode::Kind::add : ExprNode::Kind::sub,
                              std::move(e), std::move(rhs));
    }
    return e;
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    while (peek_op('*') || peek_op('/')) {
      const char op = lex_.take().op;
      NodePtr rhs = parse_factor();
      e = detail::make_binary(op == '*' ? ExprNode::Kind::mul : ExprNode::Kind::div,
                              std::move(e), std::move(rhs));
    }
    return e;
  }

  // factor := '-' factor | power; power := atom ['^' factor].
  // '^' binds tighter than unary minus and associates right.
  NodePtr parse_factor() {
    if (peek_op('-')) {
      lex_.take();
      return detail::make_unary(ExprNode::Kind::neg, parse_factor());
    }
    NodePtr base = parse_atom();
    if (peek_op('^')) {
      lex_.take();
      NodePtr expo = parse_factor();
      return detail::make_binary(ExprNode::Kind::pow, std::move(base), std::move(expo));
    }
    return base;
  }

  NodePtr parse_atom() {
    const Token t = lex_.take();
    if (t.kind == Token::Kind::number) return detail::make_number(t.num);
    if (t.kind == Token::Kind::ident) {
      if (t.text == "pi") return detail::make_number(std::numbers::pi);
      if (peek_op('(')) {
        const auto* fn = detail::find_fn(t.text);
        if (!fn)
          throw ParseError("unknown function '" + t.text + "'", t.line, t.col);
        lex_.take();
        NodePtr arg = parse_sum();
        expect_close(t);
        return detail::make_call(fn->fn, std::move(arg));
      }
      if (detail::find_fn(t.text))
        throw ParseError("function '" + t.text + "' requires an argument list",
                         t.line, t.col);
      return detail::make_symbol(t.text);
    }
    if (t.kind == Token::Kind::op && t.op == '(') {
      NodePtr e = parse_sum();
      expect_close(t);
      return e;
    }
    throw ParseError("expected a value", t.line, t.col);
  }

  void expect_close(const Token& open) {
    const Token t = lex_.take();
    if (t.kind != Token::Kind::op || t.op != ')')
      throw ParseError("unbalanced parenthesis", open.line, open.col);
  }

  Lexer lex_;
};

}  // namespace

// ---------------------------------------------------------------- facade

Expression::Expression() : node_(detail::make_number(0.0)) {}
Expression::Expression(std::shared_ptr<const detail::ExprNode> node)
    : node_(std::move(node)) {}

Expression Expression::number(double v) { return Expression(detail::make_number(v)); }
Expression Expression::symbol(const std::string& name) {
  return Expression(detail::make_symbol(name));
}
Expression Expression::call(const std::string& fn, const Expression& arg) {
  const auto* f = detail::find_fn(fn);
  if (!f) throw ParseError("unknown function '" + fn + "'");
  return Expression(detail::make_call(f->fn, arg.node_));
}
Expression Expression::pow(const Expression& base, const Expression& exponent) {
  return Expression(
      detail::make_binary(detail::ExprNode::Kind::pow, base.node_, exponent.node_));
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(detail::make_binary(detail::ExprNode::Kind::add, a.node_, b.node_));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(detail::make_binary(detail::ExprNode::Kind::sub, a.node_, b.node_));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(detail::make_binary(detail::ExprNode::Kind::mul, a.node_, b.node_));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(detail::make_binary(detail::ExprNode::Kind::div, a.node_, b.node_));
}
Expression operator-(const Expression& a) {
  return Expression(detail::make_unary(detail::ExprNode::Kind::neg, a.node_));
}

bool Expression::is_literal_zero() const {
  return node_->kind == detail::ExprNode::Kind::number && node_->num == 0.0;
}

std::string Expression::str() const {
  std::string out;
  detail::print_node(*node_, out);
  return out;
}

void Expression::collect_symbols(std::set<std::string>& out) const {
  detail::collect(*node_, out);
}

double Expression::value(const EvalScope& scope, const Vec& x) const {
  return detail::eval_value(*node_, scope, x);
}

ScalarJet Expression::jet(const EvalScope& scope, const Vec& x, int order) const {
  return detail::eval_jet(*node_, scope, x, order);
}

Expression parse_expression(const std::string& text) {
  Parser p(text);
  return Expression(p.parse());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace cartan
