#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cartan/expression.hpp"

using namespace cartan;

namespace {

EvalScope scope2() { return EvalScope({"x", "y"}, {{"m", 2.5}}); }

double fd_partial(const Expression& e, const EvalScope& s, Vec x, std::size_t i,
                  double h = 1e-6) {
  Vec xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (e.value(s, xp) - e.value(s, xm)) / (2.0 * h);
}

double fd_second(const Expression& e, const EvalScope& s, Vec x, std::size_t i,
                 std::size_t j, double h = 1e-4) {
  Vec xpp = x, xpm = x, xmp = x, xmm = x;
  xpp[i] += h; xpp[j] += h;
  xpm[i] += h; xpm[j] -= h;
  xmp[i] -= h; xmp[j] += h;
  xmm[i] -= h; xmm[j] -= h;
  return (e.value(s, xpp) - e.value(s, xpm) - e.value(s, xmp) + e.value(s, xmm)) /
         (4.0 * h * h);
}

// Jet derivatives must agree with central differences of the value path.
void check_jet_against_fd(const std::string& text, Vec x, double tol = 1e-5) {
  const EvalScope s = scope2();
  const Expression e = parse_expression(text);
  const ScalarJet j = e.jet(s, x);
  CHECK(j.value == doctest::Approx(e.value(s, x)).epsilon(1e-14));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(j.grad[i] == doctest::Approx(fd_partial(e, s, x, i)).epsilon(tol));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(j.hess(i, k) ==
            doctest::Approx(fd_second(e, s, x, i, k)).epsilon(tol).scale(1.0));
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  const EvalScope s = scope2();
  CHECK(parse_expression("1 + 2*3").value(s, {0, 0}) == 7.0);
  CHECK(parse_expression("(1 + 2)*3").value(s, {0, 0}) == 9.0);
  CHECK(parse_expression("2^3^2").value(s, {0, 0}) == 512.0);  // right assoc
  CHECK(parse_expression("-2^2").value(s, {0, 0}) == -4.0);    // ^ above unary -
  CHECK(parse_expression("2^-1").value(s, {0, 0}) == 0.5);
  CHECK(parse_expression("6/3/2").value(s, {0, 0}) == 1.0);    // left assoc
  CHECK(parse_expression("1 - 2 - 3").value(s, {0, 0}) == -4.0);
  CHECK(parse_expression("pi").value(s, {0, 0}) == doctest::Approx(M_PI));
  CHECK(parse_expression("m*x").value(s, {3.0, 0}) == 7.5);
  CHECK(parse_expression("2 # trailing comment").value(s, {0, 0}) == 2.0);
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_AS(parse_expression("1 +"), ParseError);
  CHECK_THROWS_AS(parse_expression("(1 + 2"), ParseError);
  CHECK_THROWS_AS(parse_expression("sin"), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(2)"), ParseError);
  CHECK_THROWS_AS(parse_expression("1 2"), ParseError);
  CHECK_THROWS_AS(parse_expression("$"), ParseError);
  try {
    parse_expression("1 +\n  @");
    CHECK(false);
  } catch (const ParseError& pe) {
    CHECK(pe.line == 2);
    CHECK(pe.col == 3);
  }
}

TEST_CASE("evaluation errors") {
  const EvalScope s = scope2();
  CHECK_THROWS_AS(parse_expression("1/x").value(s, {0, 0}), EvalError);
  CHECK_THROWS_AS(parse_expression("log(x)").value(s, {-1, 0}), EvalError);
  CHECK_THROWS_AS(parse_expression("log(x)").value(s, {0, 0}), EvalError);
  CHECK_THROWS_AS(parse_expression("sqrt(x)").value(s, {-1, 0}), EvalError);
  CHECK_THROWS_AS(parse_expression("x^0.5").value(s, {-1, 0}), EvalError);
  CHECK_THROWS_AS(parse_expression("x^-1").value(s, {0, 0}), EvalError);
  CHECK_THROWS_AS(parse_expression("z + 1").value(s, {0, 0}), EvalError);
  // sqrt(0): value fine, jet undefined
  CHECK(parse_expression("sqrt(x)").value(s, {0, 0}) == 0.0);
  CHECK_THROWS_AS(parse_expression("sqrt(x)").jet(s, {0, 0}), EvalError);
}

TEST_CASE("jets match finite differences") {
  check_jet_against_fd("x^2*y + 3*x", {1.3, -0.7});
  check_jet_against_fd("sin(x)*cos(y)", {0.4, 1.1});
  check_jet_against_fd("tan(x) + tanh(y)", {0.3, 0.8});
  check_jet_against_fd("sinh(x)*cosh(y)", {0.2, 0.5});
  check_jet_against_fd("exp(x*y)", {0.3, 0.6});
  check_jet_against_fd("log(x + 3)", {1.0, 0.0});
  check_jet_against_fd("sqrt(x^2 + y^2 + 1)", {0.7, -0.4});
  check_jet_against_fd("x/y", {1.2, 0.9});
  check_jet_against_fd("x^3", {-1.5, 0.0});       // integer power, negative base
  check_jet_against_fd("x^-2", {1.7, 0.0});       // negative integer power
  check_jet_against_fd("x^2.5", {1.9, 0.0});      // non-integer constant power
  check_jet_against_fd("x^y", {1.4, 0.8});        // variable power
  check_jet_against_fd("m*x^2 - y/m", {0.6, 2.0});
  check_jet_against_fd("abs(x)", {-2.0, 0.0});
}

TEST_CASE("integer power handles zero base") {
  const EvalScope s = scope2();
  const ScalarJet j = parse_expression("x^2").jet(s, {0.0, 0.0});
  CHECK(j.value == 0.0);
  CHECK(j.grad[0] == 0.0);
  CHECK(j.hess(0, 0) == 2.0);
  const ScalarJet j3 = parse_expression("x^3").jet(s, {0.0, 0.0});
  CHECK(j3.value == 0.0);
  CHECK(j3.grad[0] == 0.0);
  CHECK(j3.hess(0, 0) == 0.0);
}

TEST_CASE("order-limited jets skip higher terms") {
  const EvalScope s = scope2();
  const Expression e = parse_expression("sin(x*y)");
  const ScalarJet j0 = e.jet(s, {0.3, 0.4}, 0);
  CHECK(j0.grad.empty());
  CHECK(j0.value == doctest::Approx(std::sin(0.12)));
  const ScalarJet j1 = e.jet(s, {0.3, 0.4}, 1);
  CHECK(j1.grad.size() == 2);
  CHECK(j1.hess.rows() == 0);
}

TEST_CASE("printing round-trips") {
  const EvalScope s = scope2();
  const char* cases[] = {
      "x + y*2",       "(x + y)*2",    "-x^2",    "(-x)^2",  "x - (y - 1)",
      "x/(y*2)",       "sin(x + y)",   "2^x^2",   "(2^x)^2", "-(x + y)",
      "1/sqrt(x + 4)", "abs(x)*x",     "x^(y + 1)",
  };
  for (const char* c : cases) {
    const Expression e = parse_expression(c);
    const Expression r = parse_expression(e.str());
    CHECK_MESSAGE(e.value(s, {1.7, 2.3}) == doctest::Approx(r.value(s, {1.7, 2.3})),
                  c, " printed as ", e.str());
  }
}

TEST_CASE("format_double survives round trip") {
  for (double v : {1.0, -0.1, 1e-17, 3.141592653589793, 2.0 / 3.0, 1e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("programmatic construction") {
  const Expression x = Expression::symbol("x");
  const Expression e = Expression::pow(x, Expression::number(2)) +
                       Expression::call("sin", x) * Expression::number(3);
  const EvalScope s = scope2();
  CHECK(e.value(s, {2.0, 0.0}) == doctest::Approx(4.0 + 3.0 * std::sin(2.0)));
  CHECK(Expression().is_literal_zero());
  CHECK(!x.is_literal_zero());
  std::set<std::string> syms;
  (e / Expression::symbol("y")).collect_symbols(syms);
  CHECK(syms == std::set<std::string>{"x", "y"});
}
