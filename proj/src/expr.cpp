#include "pshcheck/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>

namespace psh::expr {

bool operator==(const Node& a, const Node& b) {
  auto same_literal = [](const Complex& x, const Complex& y) {
    return std::bit_cast<std::uint64_t>(x.real()) == std::bit_cast<std::uint64_t>(y.real()) &&
           std::bit_cast<std::uint64_t>(x.imag()) == std::bit_cast<std::uint64_t>(y.imag());
  };
  return a.kind == b.kind && a.type == b.type && same_literal(a.literal, b.literal) &&
         a.imaginary_literal == b.imaginary_literal && a.index == b.index && a.exponent == b.exponent &&
         a.children == b.children;
}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
  bool imaginary = false;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          while (j < s.size() && is_digit(s[j])) ++j;
          i = j;
        }
      }
      Token t{Tok::Number, start, s.substr(start, i - start)};
      const auto res = std::from_chars(s.data() + start, s.data() + i, t.number);
      if (res.ec != std::errc() || !std::isfinite(t.number))
        throw SyntaxError("malformed number '" + std::string(t.text) + "'", start, {"number"});
      if (i < s.size() && s[i] == 'i' && !(i + 1 < s.size() && is_ident_char(s[i + 1]))) {
        t.imaginary = true;
        ++i;
        t.text = s.substr(start, i - start);
      } else if (i < s.size() && is_ident_char(s[i])) {
        throw SyntaxError("unexpected character '" + std::string(1, s[i]) + "' after number", i,
                          {"operator", ")"});
      }
      out.push_back(t);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident_char(s[i])) ++i;
      out.push_back(Token{Tok::Ident, start, s.substr(start, i - start)});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      default:
        throw SyntaxError("unexpected character '" + std::string(1, c) + "'", i,
                          {"number", "identifier", "operator", "(", ")"});
    }
    out.push_back(Token{kind, start, s.substr(start, 1)});
    ++i;
  }
  out.push_back(Token{Tok::End, s.size(), {}});
  return out;
}

// ---------------------------------------------------------------- parser

struct FunctionInfo {
  std::string_view name;
  NodeKind kind;
  std::size_t min_args;
  std::size_t max_args;
};

constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);

constexpr std::array<FunctionInfo, 9> kFunctions{{
    {"conj", NodeKind::Conj, 1, 1},
    {"re", NodeKind::Re, 1, 1},
    {"im", NodeKind::Im, 1, 1},
    {"abs", NodeKind::Abs, 1, 1},
    {"log", NodeKind::Log, 1, 1},
    {"exp", NodeKind::Exp, 1, 1},
    {"sqrt", NodeKind::Sqrt, 1, 1},
    {"max", NodeKind::Max, 2, kUnbounded},
    {"min", NodeKind::Min, 2, kUnbounded},
}};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

std::string_view function_name(NodeKind kind) {
  for (const auto& f : kFunctions)
    if (f.kind == kind) return f.name;
  return "?";
}

constexpr int kMaxVariableIndex = 64;

class Parser {
 public:
  Parser(std::string_view text, ParseOptions options) : tokens_(tokenize(text)), options_(options) {}

  Node parse_all() {
    Node root = additive();
    if (peek().kind != Tok::End) {
      if (peek().kind == Tok::RParen)
        throw SyntaxError("unbalanced ')'", peek().offset, {"end of input"});
      throw SyntaxError("unexpected token '" + std::string(peek().text) + "'", peek().offset,
                        {"operator", "end of input"});
    }
    return root;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  static Node make(NodeKind kind, std::size_t offset, std::vector<Node> children = {}) {
    Node n;
    n.kind = kind;
    n.offset = offset;
    n.children = std::move(children);
    return n;
  }

  Node additive() {
    Node lhs = multiplicative();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token op = advance();
      Node rhs = multiplicative();
      lhs = make(op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub, op.offset, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Node multiplicative() {
    Node lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token op = advance();
      Node rhs = unary();
      lhs = make(op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div, op.offset, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Node unary() {
    if (peek().kind == Tok::Minus) {
      const Token op = advance();
      return make(NodeKind::Neg, op.offset, {unary()});
    }
    if (peek().kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  Node power() {
    Node base = primary();
    while (peek().kind == Tok::Caret) {
      const Token op = advance();
      bool negative = false;
      if (peek().kind == Tok::Minus) {
        negative = true;
        advance();
      }
      const Token& t = peek();
      if (t.kind != Tok::Number || t.imaginary || t.number != std::floor(t.number) || t.number > 1024)
        throw SyntaxError("exponent must be an integer literal", t.offset, {"integer"});
      advance();
      Node n = make(NodeKind::Pow, op.offset, {std::move(base)});
      n.exponent = static_cast<int>(t.number) * (negative ? -1 : 1);
      base = std::move(n);
    }
    return base;
  }

  Node primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Number: {
        advance();
        Node n = make(NodeKind::Literal, t.offset);
        n.imaginary_literal = t.imaginary;
        n.literal = t.imaginary ? Complex(0.0, t.number) : Complex(t.number, 0.0);
        return n;
      }
      case Tok::LParen: {
        advance();
        Node inner = additive();
        expect(Tok::RParen, ")");
        return inner;
      }
      case Tok::Ident:
        return identifier();
      default:
        throw SyntaxError(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + std::string(t.text) + "'",
                          t.offset, {"number", "identifier", "("});
    }
  }

  Node identifier() {
    const Token t = advance();
    if (peek().kind == Tok::LParen) {
      const FunctionInfo* f = find_function(t.text);
      if (!f) throw ExpressionError("unknown function '" + std::string(t.text) + "'", t.offset);
      advance();
      std::vector<Node> args;
      args.push_back(additive());
      while (peek().kind == Tok::Comma) {
        advance();
        args.push_back(additive());
      }
      if (peek().kind != Tok::RParen) {
        std::vector<std::string> expected{")"};
        if (f->max_args > 1) expected.insert(expected.begin(), ",");
        throw SyntaxError("expected " + join(expected) + " at offset " + std::to_string(peek().offset),
                          peek().offset, expected);
      }
      advance();
      if (args.size() < f->min_args || args.size() > f->max_args)
        throw ExpressionError(std::string(f->name) + " takes " + arity_text(*f) + ", got " +
                                  std::to_string(args.size()),
                              t.offset);
      return make(f->kind, t.offset, std::move(args));
    }
    if (t.text == "i") {
      Node n = make(NodeKind::Literal, t.offset);
      n.imaginary_literal = true;
      n.literal = Complex(0.0, 1.0);
      return n;
    }
    if (t.text == "pi") {
      Node n = make(NodeKind::Literal, t.offset);
      n.literal = std::numbers::pi;
      return n;
    }
    if (t.text.size() >= 2 && (t.text[0] == 'z' || t.text[0] == 'x') &&
        std::all_of(t.text.begin() + 1, t.text.end(), is_digit)) {
      if (!options_.allow_variables)
        throw ExpressionError("variables are not allowed here ('" + std::string(t.text) + "')", t.offset);
      int index = 0;
      const auto res = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), index);
      if (res.ec != std::errc() || index < 1 || index > kMaxVariableIndex)
        throw ExpressionError("variable index out of range in '" + std::string(t.text) + "'", t.offset);
      Node n = make(t.text[0] == 'z' ? NodeKind::ComplexVar : NodeKind::RealVar, t.offset);
      n.index = index;
      return n;
    }
    if (find_function(t.text))
      throw SyntaxError("function '" + std::string(t.text) + "' needs an argument list", peek().offset, {"("});
    throw ExpressionError("unknown identifier '" + std::string(t.text) + "'", t.offset);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw SyntaxError(std::string("expected '") + what + "' at offset " + std::to_string(peek().offset),
                        peek().offset, {what});
    advance();
  }

  static std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? " or '" : "'") + items[i] + "'";
    return s;
  }

  static std::string arity_text(const FunctionInfo& f) {
    if (f.max_args == kUnbounded) return "at least " + std::to_string(f.min_args) + " arguments";
    return std::to_string(f.min_args) + (f.min_args == 1 ? " argument" : " arguments");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseOptions options_;
};

// ---------------------------------------------------------------- typing

void assign_types(Node& n, Ast& ast) {
  for (auto& c : n.children) assign_types(c, ast);
  auto all_real = [&] {
    return std::all_of(n.children.begin(), n.children.end(), [](const Node& c) { return c.type == ValueType::Real; });
  };
  auto require_real_children = [&](std::string_view what) {
    for (const auto& c : n.children)
      if (c.type != ValueType::Real)
        throw TypeError(std::string(what) + " requires a real argument; '" + print(c) + "' is complex", c.offset,
                        print(c));
  };
  switch (n.kind) {
    case NodeKind::Literal:
      n.type = n.imaginary_literal ? ValueType::Complex : ValueType::Real;
      break;
    case NodeKind::ComplexVar:
      n.type = ValueType::Complex;
      ast.complex_dim = std::max<std::size_t>(ast.complex_dim, n.index);
      ast.real_dim = std::max<std::size_t>(ast.real_dim, 2 * static_cast<std::size_t>(n.index));
      break;
    case NodeKind::RealVar:
      n.type = ValueType::Real;
      ast.complex_dim = std::max<std::size_t>(ast.complex_dim, (n.index + 1) / 2);
      ast.real_dim = std::max<std::size_t>(ast.real_dim, n.index);
      break;
    case NodeKind::Re:
    case NodeKind::Im:
    case NodeKind::Abs:
      n.type = ValueType::Real;
      break;
    case NodeKind::Log:
    case NodeKind::Sqrt:
      require_real_children(function_name(n.kind));
      n.type = ValueType::Real;
      break;
    case NodeKind::Max:
    case NodeKind::Min:
      require_real_children(function_name(n.kind));
      n.type = ValueType::Real;
      break;
    default:
      n.type = all_real() ? ValueType::Real : ValueType::Complex;
      break;
  }
}

// ---------------------------------------------------------------- arithmetic
//
// Values travel as Complex; real-typed nodes only use the real part, which
// may be -inf (or +inf in intermediates). Both evaluators below share these
// helpers so they agree bit for bit.

[[noreturn]] void fail(const char* what) { throw EvaluationError(what); }

double checked_real(double v) {
  if (std::isnan(v)) fail("undefined extended-real arithmetic (inf - inf)");
  return v;
}

Complex require_finite(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail("non-finite value in complex arithmetic");
  return v;
}

double real_mul(double a, double b) {
  if ((std::isinf(a) && b == 0.0) || (std::isinf(b) && a == 0.0)) fail("multiplication of -inf by 0");
  return checked_real(a * b);
}

double real_div(double a, double b) {
  if (b == 0.0) fail("division by zero");
  return checked_real(a / b);
}

Complex complex_div(Complex a, Complex b) {
  if (b == Complex(0.0)) fail("division by zero");
  return a / b;
}

double real_pow(double a, int k) {
  if (k < 0) {
    if (a == 0.0) fail("division by zero");
    return real_div(1.0, real_pow(a, -k));
  }
  double result = 1.0;
  double base = a;
  while (k > 0) {
    if (k & 1) result = real_mul(result, base);
    k >>= 1;
    if (k > 0) base = real_mul(base, base);
  }
  return result;
}

Complex complex_pow(Complex a, int k) {
  if (k < 0) return complex_div(1.0, complex_pow(a, -k));
  Complex result = 1.0;
  Complex base = a;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

// real_out: node type; real_in: operand type.
Complex apply_unary(NodeKind kind, bool real_in, int exponent, Complex a) {
  if (real_in) {
    const double x = a.real();
    switch (kind) {
      case NodeKind::Neg: return -x;
      case NodeKind::Conj: return x;
      case NodeKind::Re: return x;
      case NodeKind::Im: return 0.0;
      case NodeKind::Abs: return std::abs(x);
      case NodeKind::Log:
        if (x < 0.0) fail("log of a negative number");
        return x == 0.0 ? kMinusInfinity : std::log(x);
      case NodeKind::Exp: return std::exp(x);
      case NodeKind::Sqrt:
        if (x < 0.0) fail("sqrt of a negative number");
        return std::sqrt(x);
      case NodeKind::Pow: return real_pow(x, exponent);
      default: break;
    }
  } else {
    require_finite(a);
    switch (kind) {
      case NodeKind::Neg: return -a;
      case NodeKind::Conj: return std::conj(a);
      case NodeKind::Re: return a.real();
      case NodeKind::Im: return a.imag();
      case NodeKind::Abs: return std::abs(a);
      case NodeKind::Exp: return std::exp(a);
      case NodeKind::Pow: return complex_pow(a, exponent);
      default: break;
    }
  }
  fail("internal error: bad unary operator");
}

Complex apply_binary(NodeKind kind, bool real, Complex a, Complex b) {
  if (real) {
    switch (kind) {
      case NodeKind::Add: return checked_real(a.real() + b.real());
      case NodeKind::Sub: return checked_real(a.real() - b.real());
      case NodeKind::Mul: return real_mul(a.real(), b.real());
      case NodeKind::Div: return real_div(a.real(), b.real());
      default: break;
    }
  } else {
    require_finite(a);
    require_finite(b);
    switch (kind) {
      case NodeKind::Add: return a + b;
      case NodeKind::Sub: return a - b;
      case NodeKind::Mul: return a * b;
      case NodeKind::Div: return complex_div(a, b);
      default: break;
    }
  }
  fail("internal error: bad binary operator");
}

Complex load_var(NodeKind kind, int index, std::span<const Complex> z) {
  if (kind == NodeKind::ComplexVar) return z[index - 1];
  const Complex& c = z[(index - 1) / 2];
  return (index % 2 == 1) ? c.real() : c.imag();
}

double finish(Complex v) {
  const double x = v.real();
  if (std::isnan(x)) fail("expression evaluated to NaN");
  if (x == std::numeric_limits<double>::infinity()) fail("expression evaluated to +inf");
  return x;
}

Complex eval_node(const Node& n, std::span<const Complex> z) {
  switch (n.kind) {
    case NodeKind::Literal: return n.literal;
    case NodeKind::ComplexVar:
    case NodeKind::RealVar: return load_var(n.kind, n.index, z);
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      const Complex a = eval_node(n.children[0], z);
      const Complex b = eval_node(n.children[1], z);
      return apply_binary(n.kind, n.type == ValueType::Real, a, b);
    }
    case NodeKind::Max:
    case NodeKind::Min: {
      double acc = eval_node(n.children[0], z).real();
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const double v = eval_node(n.children[i], z).real();
        acc = n.kind == NodeKind::Max ? std::max(acc, v) : std::min(acc, v);
      }
      return acc;
    }
    default: {
      const Complex a = eval_node(n.children[0], z);
      return apply_unary(n.kind, n.children[0].type == ValueType::Real, n.exponent, a);
    }
  }
}

void require_dim(const Ast& ast, std::size_t have) {
  if (have < ast.complex_dim)
    throw DomainError("expression needs " + std::to_string(ast.complex_dim) + " complex coordinates, got " +
                      std::to_string(have));
}

// ---------------------------------------------------------------- printer

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Literal: return n.literal.real() < 0.0 || n.literal.imag() < 0.0 ? 0 : 5;
    default: return 5;
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void print_into(const Node& n, std::string& out);

void print_child(const Node& c, int min_prec, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    print_into(c, out);
    out += ')';
  } else {
    print_into(c, out);
  }
}

void print_into(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Literal:
      if (n.imaginary_literal) {
        out += format_double(n.literal.imag());
        out += 'i';
      } else {
        out += format_double(n.literal.real());
      }
      return;
    case NodeKind::ComplexVar: out += "z" + std::to_string(n.index); return;
    case NodeKind::RealVar: out += "x" + std::to_string(n.index); return;
    case NodeKind::Neg:
      out += '-';
      print_child(n.children[0], 3, out);
      return;
    case NodeKind::Pow:
      print_child(n.children[0], 5, out);
      out += '^';
      out += std::to_string(n.exponent);
      return;
    case NodeKind::Add:
    case NodeKind::Sub:
      print_child(n.children[0], 1, out);
      out += n.kind == NodeKind::Add ? " + " : " - ";
      print_child(n.children[1], 2, out);
      return;
    case NodeKind::Mul:
    case NodeKind::Div:
      print_child(n.children[0], 2, out);
      out += n.kind == NodeKind::Mul ? "*" : "/";
      print_child(n.children[1], 3, out);
      return;
    default:
      out += function_name(n.kind);
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        print_into(n.children[i], out);
      }
      out += ')';
      return;
  }
}

}  // namespace

// ---------------------------------------------------------------- public API

Ast parse(std::string_view text, ParseOptions options) {
  Ast ast;
  ast.root = Parser(text, options).parse_all();
  assign_types(ast.root, ast);
  if (options.require_real && ast.root.type != ValueType::Real)
    throw TypeError("expression is complex-valued; wrap it in re(), im() or abs(): '" + print(ast.root) + "'",
                    ast.root.offset, print(ast.root));
  return ast;
}

std::string print(const Node& node) {
  std::string out;
  print_into(node, out);
  return out;
}

double eval(const Ast& ast, std::span<const Complex> z) {
  require_dim(ast, z.size());
  return finish(eval_node(ast.root, z));
}

double eval_real(const Ast& ast, std::span<const double> x) {
  if (x.size() < ast.real_dim)
    throw DomainError("expression needs " + std::to_string(ast.real_dim) + " real coordinates, got " +
                      std::to_string(x.size()));
  const CPoint z = to_complex(x);
  return eval(ast, z.coords());
}

Complex eval_constant(std::string_view text) {
  const Ast ast = parse(text, ParseOptions{.require_real = false, .allow_variables = false});
  const Complex v = eval_node(ast.root, {});
  if (ast.root.type == ValueType::Real) return finish(v);
  return require_finite(v);
}

// ---------------------------------------------------------------- compiled form

namespace {

enum class Op : std::uint8_t { Push, Load, Unary, Binary, Max, Min };

struct Instr {
  Op op;
  NodeKind kind;
  bool real;  // operand type (Unary) or node type (Binary)
  int arg;    // variable index, exponent, or operand count
  Complex literal;
};

}  // namespace

class Program {
 public:
  explicit Program(Ast ast) : ast_(std::move(ast)) {
    std::size_t depth = 0;
    emit(ast_.root, depth);
  }

  const Ast& ast() const { return ast_; }

  double run(std::span<const Complex> z) const {
    require_dim(ast_, z.size());
    constexpr std::size_t kInline = 64;
    std::array<Complex, kInline> inline_stack;
    std::vector<Complex> heap;
    Complex* stack = inline_stack.data();
    if (max_depth_ > kInline) {
      heap.resize(max_depth_);
      stack = heap.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::Push: stack[sp++] = in.literal; break;
        case Op::Load: stack[sp++] = load_var(in.kind, in.arg, z); break;
        case Op::Unary: stack[sp - 1] = apply_unary(in.kind, in.real, in.arg, stack[sp - 1]); break;
        case Op::Binary:
          stack[sp - 2] = apply_binary(in.kind, in.real, stack[sp - 2], stack[sp - 1]);
          --sp;
          break;
        case Op::Max:
        case Op::Min: {
          const std::size_t base = sp - static_cast<std::size_t>(in.arg);
          double acc = stack[base].real();
          for (std::size_t i = base + 1; i < sp; ++i)
            acc = in.op == Op::Max ? std::max(acc, stack[i].real()) : std::min(acc, stack[i].real());
          sp = base;
          stack[sp++] = acc;
          break;
        }
      }
    }
    return finish(stack[0]);
  }

 private:
  void push(Instr in, std::size_t& depth, int delta) {
    code_.push_back(in);
    depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
    max_depth_ = std::max(max_depth_, depth);
  }

  void emit(const Node& n, std::size_t& depth) {
    switch (n.kind) {
      case NodeKind::Literal: push({Op::Push, n.kind, true, 0, n.literal}, depth, 1); return;
      case NodeKind::ComplexVar:
      case NodeKind::RealVar: push({Op::Load, n.kind, true, n.index, {}}, depth, 1); return;
      case NodeKind::Add:
      case NodeKind::Sub:
      case NodeKind::Mul:
      case NodeKind::Div:
        emit(n.children[0], depth);
        emit(n.children[1], depth);
        push({Op::Binary, n.kind, n.type == ValueType::Real, 0, {}}, depth, -1);
        return;
      case NodeKind::Max:
      case NodeKind::Min:
        for (const auto& c : n.children) emit(c, depth);
        push({n.kind == NodeKind::Max ? Op::Max : Op::Min, n.kind, true, static_cast<int>(n.children.size()), {}},
             depth, 1 - static_cast<int>(n.children.size()));
        return;
      default:
        emit(n.children[0], depth);
        push({Op::Unary, n.kind, n.children[0].type == ValueType::Real, n.exponent, {}}, depth, 0);
        return;
    }
  }

  Ast ast_;
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

Expression::Expression(std::string_view text) : Expression(parse(text)) {}

Expression::Expression(Ast ast) : program_(std::make_shared<const Program>(std::move(ast))) {
  if (program_->ast().root.type != ValueType::Real)
    throw TypeError("expression is complex-valued", program_->ast().root.offset, print(program_->ast().root));
}

double Expression::operator()(std::span<const Complex> z) const { return program_->run(z); }

double Expression::eval_real(std::span<const double> x) const {
  const Ast& a = program_->ast();
  if (x.size() < a.real_dim)
    throw DomainError("expression needs " + std::to_string(a.real_dim) + " real coordinates, got " +
                      std::to_string(x.size()));
  const std::size_t n = (x.size() + 1) / 2;
  std::array<Complex, 32> small;
  std::vector<Complex> big;
  Complex* z = small.data();
  if (n > small.size()) {
    big.resize(n);
    z = big.data();
  }
  for (std::size_t j = 0; j < n; ++j) z[j] = Complex(x[2 * j], 2 * j + 1 < x.size() ? x[2 * j + 1] : 0.0);
  return program_->run(std::span<const Complex>(z, n));
}

const Ast& Expression::ast() const { return program_->ast(); }

EvalFn Expression::as_eval_fn() const {
  return [program = program_](std::span<const Complex> z) { return program->run(z); };
}

RealEvalFn Expression::as_real_eval_fn() const {
  return [self = *this](std::span<const double> x) { return self.eval_real(x); };
}

}  // namespace psh::expr
