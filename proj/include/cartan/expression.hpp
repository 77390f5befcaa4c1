// Scalar expressions over chart coordinates: parsing, printing, and
// evaluation as second-order jets (value, gradient, Hessian) so downstream
// curvature work never relies on finite differences.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cartan/linalg.hpp"

namespace cartan {

// Truncated second-order Taylor data of a scalar at a point.
// order 0: value only; order 1: + gradient; order 2: + Hessian.
struct ScalarJet {
  int order = 2;
  double value = 0.0;
  Vec grad;
  Mat hess;

  static ScalarJet constant(double v, std::size_t n, int order);
  static ScalarJet coordinate(double v, std::size_t index, std::size_t n, int order);
};

ScalarJet operator+(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator-(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator*(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator/(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator-(const ScalarJet& a);

// Name resolution for one spacetime document: every identifier is either a
// chart coordinate or a bound parameter value.
class EvalScope {
 public:
  struct Binding {
    bool is_coord = false;
    std::size_t index = 0;
    double value = 0.0;
  };

  EvalScope() = default;
  EvalScope(const std::vector<std::string>& coords,
            const std::map<std::string, double>& params);

  std::size_t dim() const { return dim_; }
  const Binding* find(const std::string& name) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Binding> table_;
};

namespace detail {
struct ExprNode;
}

class Expression {
 public:
  Expression();  // literal zero

  static Expression number(double v);
  static Expression symbol(const std::string& name);
  static Expression call(const std::string& fn, const Expression& arg);
  static Expression pow(const Expression& base, const Expression& exponent);

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

  bool is_literal_zero() const;
  std::string str() const;
  void collect_symbols(std::set<std::string>& out) const;

  double value(const EvalScope& scope, const Vec& x) const;
  ScalarJet jet(const EvalScope& scope, const Vec& x, int order = 2) const;

 private:
  explicit Expression(std::shared_ptr<const detail::ExprNode> node);
  friend Expression parse_expression(const std::string& text);
  std::shared_ptr<const detail::ExprNode> node_;
};

// Parses the expression grammar: + - * / ^ (right associative), unary minus,
// function calls {sin cos tan sinh cosh tanh exp log sqrt abs}, constant pi,
// parentheses, decimal literals, and '#' comments. Throws ParseError with
// line/column on malformed input.
Expression parse_expression(const std::string& text);

// Formats a double so that parsing the result recovers the exact bits.
std::string format_double(double v);

}  // namespace cartan
