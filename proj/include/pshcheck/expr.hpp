#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pshcheck/common.hpp"
#include "pshcheck/integrate.hpp"

namespace psh::expr {

enum class NodeKind {
  Literal,
  ComplexVar,  // z_k
  RealVar,     // x_k = re z_{(k+1)/2} or im z_{k/2}
  Neg,
  Conj,
  Re,
  Im,
  Abs,
  Log,
  Exp,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Max,
  Min,
};

enum class ValueType { Real, Complex };

struct Node {
  NodeKind kind = NodeKind::Literal;
  ValueType type = ValueType::Real;
  Complex literal{};
  bool imaginary_literal = false;
  int index = 0;     // variable index (1-based)
  int exponent = 0;  // Pow
  std::size_t offset = 0;
  std::vector<Node> children;

  friend bool operator==(const Node&, const Node&);
};

struct Ast {
  Node root;
  /// Number of complex coordinates the expression reads.
  std::size_t complex_dim = 0;
  /// Number of real coordinates the expression reads under C^n = R^{2n}.
  std::size_t real_dim = 0;
};

/// Base class for all expression errors; carries a byte offset into the source.
class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& message, std::size_t offset)
      : std::invalid_argument(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class SyntaxError : public ExpressionError {
 public:
  SyntaxError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
      : ExpressionError(message, offset), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

/// A subtree has the wrong value type (complex where a real is required).
class TypeError : public ExpressionError {
 public:
  TypeError(const std::string& message, std::size_t offset, std::string subtree)
      : ExpressionError(message, offset), subtree_(std::move(subtree)) {}
  const std::string& subtree() const { return subtree_; }

 private:
  std::string subtree_;
};

struct ParseOptions {
  /// Reject expressions whose value is complex (the default for functions u).
  bool require_real = true;
  /// Reject variables (used for constant coordinates in grid specs).
  bool allow_variables = true;
};

Ast parse(std::string_view text, ParseOptions options = {});

/// Canonical text; parse(print(a)) reproduces a.
std::string print(const Node& node);
inline std::string print(const Ast& ast) { return print(ast.root); }

/// Reference tree-walking evaluator. log(0) = -inf; -inf propagates through
/// real arithmetic and is absorbed by max. Throws EvaluationError on NaN,
/// +inf results, division by zero, -inf * 0, and -inf entering complex
/// arithmetic; DomainError when z has too few coordinates.
double eval(const Ast& ast, std::span<const Complex> z);
double eval_real(const Ast& ast, std::span<const double> x);

/// Value of a variable-free expression (real or complex).
Complex eval_constant(std::string_view text);

class Program;

/// Parsed and compiled expression; evaluation is bit-identical to eval()
/// but runs on a flat instruction list. Immutable and thread-safe.
class Expression {
 public:
  explicit Expression(std::string_view text);
  explicit Expression(Ast ast);

  double operator()(std::span<const Complex> z) const;
  double eval_real(std::span<const double> x) const;

  const Ast& ast() const;
  std::string canonical() const { return print(ast()); }
  std::size_t complex_dim() const { return ast().complex_dim; }
  std::size_t real_dim() const { return ast().real_dim; }

  EvalFn as_eval_fn() const;
  RealEvalFn as_real_eval_fn() const;

 private:
  std::shared_ptr<const Program> program_;
};

}  // namespace psh::expr
