#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pshcheck/common.hpp"
#include "pshcheck/expr.hpp"

using namespace psh;
using namespace psh::expr;

namespace {

// Random well-formed source text over the whole grammar.
std::string random_expr(std::mt19937& g, int depth) {
  auto pick = [&](int n) { return static_cast<int>(g() % static_cast<unsigned>(n)); };
  if (depth <= 0 || pick(4) == 0) {
    switch (pick(6)) {
      case 0: return "z" + std::to_string(1 + pick(3));
      case 1: return "x" + std::to_string(1 + pick(4));
      case 2: return std::to_string(pick(9)) + "." + std::to_string(pick(100));
      case 3: return "2.5i";
      case 4: return "pi";
      default: return "1e-3";
    }
  }
  const std::string a = random_expr(g, depth - 1), b = random_expr(g, depth - 1);
  switch (pick(14)) {
    case 0: return a + " + " + b;
    case 1: return a + " - " + b;
    case 2: return a + "*" + b;
    case 3: return "(" + a + ")/(" + b + " + 3)";
    case 4: return "(" + a + ")^" + std::to_string(pick(4));
    case 5: return "-" + a;
    case 6: return "conj(" + a + ")";
    case 7: return "re(" + a + ")";
    case 8: return "im(" + a + ")";
    case 9: return "abs(" + a + ")";
    case 10: return "log(abs(" + a + ") + 1)";
    case 11: return "exp(re(" + a + ")/10)";
    case 12: return "max(re(" + a + "), im(" + b + "), 0)";
    default: return "min(abs(" + a + "), 2)";
  }
}

}  // namespace

TEST_CASE("basic parse and evaluation") {
  const Expression e("abs(z1)^2 - abs(z2)^2");
  const std::vector<Complex> z{Complex(1.0, 1.0), Complex(0.5, 0.0)};
  CHECK(e(z) == doctest::Approx(2.0 - 0.25));
  CHECK(e.complex_dim() == 2);
  CHECK(e.real_dim() == 4);
  CHECK(Expression("re(z1^2)")(z) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(Expression("x1 + 10*x2 + 100*x3")(z) == doctest::Approx(1.0 + 10.0 + 50.0));
  CHECK(Expression("2^-2 + 1/4")(z) == 0.5);
  CHECK(Expression("-2^2")(z) == -4.0);
  CHECK(eval_constant("pi") == Complex(std::numbers::pi));
  CHECK(eval_constant("0.3+0.2*i") == Complex(0.3, 0.2));
}

TEST_CASE("log of zero is -inf and max absorbs it") {
  const Expression e("log(abs(z1))");
  const std::vector<Complex> zero{0.0};
  CHECK(e(zero) == kMinusInfinity);
  const Expression m("max(log(abs(z1)), log(abs(z2)))");
  const std::vector<Complex> z{0.0, Complex(std::exp(1.0), 0.0)};
  CHECK(m(z) == doctest::Approx(1.0));
  const std::vector<Complex> both{0.0, 0.0};
  CHECK(m(both) == kMinusInfinity);
}

TEST_CASE("evaluation errors") {
  const std::vector<Complex> zero{0.0};
  CHECK_THROWS_AS(Expression("1/re(z1)")(zero), EvaluationError);
  CHECK_THROWS_AS(Expression("0*log(abs(z1))")(zero), EvaluationError);
  CHECK_THROWS_AS(Expression("-log(abs(z1))")(zero), EvaluationError);
  CHECK_THROWS_AS(Expression("abs(z1*log(abs(z1)))")(zero), EvaluationError);
  CHECK_THROWS_AS(Expression("re(z2)")(zero), DomainError);
}

TEST_CASE("syntax errors carry offsets and expected tokens") {
  try {
    parse("re(z1*z2");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 8);
    CHECK(e.expected() == std::vector<std::string>{")"});
  }
  try {
    parse("abs(z1) + * 2");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 10);
  }
  CHECK_THROWS_AS(parse("z1^0.5"), SyntaxError);
  CHECK_THROWS_AS(parse("foo(z1)"), ExpressionError);
  CHECK_THROWS_AS(parse("max(z1)"), ExpressionError);
  CHECK_THROWS_AS(parse("y1"), ExpressionError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
  CHECK_THROWS_AS(parse("abs(z1))"), SyntaxError);
}

TEST_CASE("type errors name the offending subtree") {
  try {
    parse("log(z1)");
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.subtree() == "z1");
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("z1*z2"), TypeError);
  CHECK_NOTHROW(parse("z1*z2", ParseOptions{.require_real = false}));
  CHECK_THROWS_AS(parse("max(z1, 1)"), TypeError);
  CHECK_THROWS_AS(parse("z1", ParseOptions{.require_real = false, .allow_variables = false}), ExpressionError);
}

TEST_CASE("printer is canonical and parse/print round-trips") {
  CHECK(print(parse("abs( z1 ) ^2+abs(z2)^2")) == "abs(z1)^2 + abs(z2)^2");
  CHECK(print(parse("(x1 - x2) - (x3 - x4)")) == "x1 - x2 - (x3 - x4)");
  CHECK(print(parse("x1/(x2*x3)")) == "x1/(x2*x3)");
  CHECK(print(parse("(-x1)^2")) == "(-x1)^2");
  CHECK(print(parse("0.1 + x1")) == "0.1 + x1");

  std::mt19937 g(2024);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string src = random_expr(g, 4);
    Ast first;
    try {
      first = parse(src, ParseOptions{.require_real = false});
    } catch (const ExpressionError&) {
      continue;
    }
    const std::string text = print(first);
    const Ast second = parse(text, ParseOptions{.require_real = false});
    REQUIRE_MESSAGE(first.root == second.root, src << " -> " << text);
    REQUIRE(print(second) == text);
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("compiled program matches the tree walker bit for bit") {
  std::mt19937 g(7);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::string src = "re(" + random_expr(g, 4) + ")";
    Ast ast;
    try {
      ast = parse(src);
    } catch (const ExpressionError&) {
      continue;
    }
    const Expression compiled(ast);
    for (int k = 0; k < 5; ++k) {
      std::vector<Complex> z(3);
      for (auto& c : z) c = Complex(coord(g), coord(g));
      double tree = 0.0, prog = 0.0;
      bool tree_threw = false, prog_threw = false;
      try {
        tree = eval(ast, z);
      } catch (const EvaluationError&) {
        tree_threw = true;
      }
      try {
        prog = compiled(z);
      } catch (const EvaluationError&) {
        prog_threw = true;
      }
      REQUIRE(tree_threw == prog_threw);
      if (!tree_threw) {
        REQUIRE(std::bit_cast<std::uint64_t>(tree) == std::bit_cast<std::uint64_t>(prog));
        ++compared;
      }
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("real-space evaluation reads x_k from the embedding") {
  const Expression e("x1^2 - x2^2 + x3");
  const std::vector<double> x{1.0, 2.0, 5.0};
  CHECK(e.eval_real(x) == 1.0 - 4.0 + 5.0);
  CHECK(e.as_real_eval_fn()(x) == 2.0);
  CHECK_THROWS_AS(e.eval_real(std::vector<double>{1.0, 2.0}), DomainError);
}
