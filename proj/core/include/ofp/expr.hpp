#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofp/error.hpp"

namespace ofp {

/// Operations of the expression language. Unary ops come first.
enum class Op : std::uint8_t {
  Neg,
  Sin,
  Cos,
  Tan,
  Asin,
  Acos,
  Atan,
  Exp,
  Log,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

constexpr int arity(Op op) noexcept { return op >= Op::Add ? 2 : 1; }

/// DSL spelling: function name for unary ops ("neg" for negation), symbol for binary ops.
std::string_view op_name(Op op) noexcept;

/// Looks up a unary function by its DSL call name (sin, cos, ...). `neg` is not callable.
std::optional<Op> unary_function(std::string_view name) noexcept;

/// Applies `op` in binary64. `rhs` is ignored for unary ops.
double apply(Op op, double lhs, double rhs = 0.0) noexcept;

enum class NodeKind : std::uint8_t { Constant, Param, Unary, Binary };

struct Node;

/// Immutable expression handle. Subtrees may be shared between expressions;
/// semantically every expression is a tree.
class Expr {
 public:
  /// Empty placeholder handle; every accessor requires a non-empty handle.
  Expr() = default;

  /// Number node: non-negative values become a Constant, negative values
  /// become Neg(Constant(|v|)) so every number prints and re-parses to the same tree.
  static Expr number(double value);
  /// Constant with its source spelling. `value` must be finite and >= 0.
  static Expr literal(std::string text, double value);
  static Expr param(std::size_t index);
  static Expr unary(Op op, Expr child);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  NodeKind kind() const noexcept;
  /// Constant value; only valid on Constant nodes.
  double value() const;
  const std::string& text() const;
  std::size_t index() const;
  Op op() const;
  const Expr& child(std::size_t i) const;

  const Node* get() const noexcept { return node_.get(); }
  bool is_constant() const noexcept { return kind() == NodeKind::Constant; }
  bool is_param() const noexcept { return kind() == NodeKind::Param; }
  bool is_apply() const noexcept { return kind() == NodeKind::Unary || kind() == NodeKind::Binary; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind;
  Op op = Op::Neg;
  double value = 0.0;
  std::size_t index = 0;
  std::string text;
  std::array<Expr, 2> children{};
};

/// Number value of a Constant or Neg(Constant) node.
std::optional<double> as_number(const Expr& e) noexcept;
bool is_zero(const Expr& e) noexcept;
bool is_one(const Expr& e) noexcept;

/// Structural equality: same shape, same ops, bit-identical constant values.
/// Constant source spellings are not compared.
bool structurally_equal(const Expr& a, const Expr& b) noexcept;

/// Number of nodes, counting shared subtrees once per occurrence.
std::size_t tree_size(const Expr& e);

/// Number of Unary + Binary node occurrences.
std::size_t operation_count(const Expr& e);

bool depends_on(const Expr& e, std::size_t var);

/// Largest parameter index referenced plus one (0 if none).
std::size_t max_param_index(const Expr& e);

/// Replaces every Param(var) with `replacement`.
Expr substitute(const Expr& e, std::size_t var, const Expr& replacement);

/// Replaces the `occurrence`-th Constant node (pre-order) with `replacement`.
Expr replace_constant(const Expr& e, std::size_t occurrence, const Expr& replacement);

/// Constant nodes in pre-order.
std::vector<Expr> constants_preorder(const Expr& e);

struct Bound {
  double value;
  bool inclusive;
  bool operator==(const Bound&) const = default;
};

struct Interval {
  Bound lo{-std::numeric_limits<double>::infinity(), false};
  Bound hi{std::numeric_limits<double>::infinity(), false};

  static Interval closed(double lo, double hi) { return {{lo, true}, {hi, true}}; }
  static Interval unbounded() { return {}; }

  bool contains(double x) const noexcept;
  bool bounded() const noexcept;
  bool empty() const noexcept;
  bool operator==(const Interval&) const = default;
};

struct ParamDecl {
  std::string name;
  Interval domain;
};

/// A named function of ordered, domain-annotated parameters. Immutable.
class FunctionDef {
 public:
  /// Throws ofp::Error when parameter names repeat, a domain is empty or the
  /// body references an undeclared parameter.
  FunctionDef(std::string name, std::vector<ParamDecl> params, Expr body);

  const std::string& name() const noexcept { return name_; }
  const std::vector<ParamDecl>& params() const noexcept { return params_; }
  const Expr& body() const noexcept { return body_; }
  std::size_t arity() const noexcept { return params_.size(); }
  std::optional<std::size_t> param_index(std::string_view name) const noexcept;
  std::vector<std::string> param_names() const;
  bool in_domain(std::span<const double> point) const noexcept;

 private:
  std::string name_;
  std::vector<ParamDecl> params_;
  Expr body_;
};

bool structurally_equal(const FunctionDef& a, const FunctionDef& b) noexcept;

// ---------------------------------------------------------------------------
// Working-precision evaluation

/// One arithmetic node evaluation. `node` is the node's pre-order id.
struct TraceRecord {
  std::size_t node;
  Op op;
  std::array<double, 2> operands;
  double result;
  /// Result is NaN or infinite while the operands were finite (domain violation, overflow).
  bool flagged;

  int operand_count() const noexcept { return arity(op); }
};

struct EvalTrace {
  std::vector<TraceRecord> records;
  double result = 0.0;
  bool flagged = false;
};

struct Evaluation {
  double value;
  EvalTrace trace;
};

/// Strict left-to-right binary64 evaluation without a trace.
double evaluate(const Expr& e, std::span<const double> point);
double evaluate(const FunctionDef& f, std::span<const double> point);

/// Evaluation with one trace record per Unary/Binary node, in evaluation order.
/// Throws ofp::Error if the point has the wrong length or a non-finite coordinate.
Evaluation eval_working(const FunctionDef& f, std::span<const double> point);
EvalTrace trace_expr(const Expr& e, std::span<const double> point);

// ---------------------------------------------------------------------------
// DSL

/// Parses exactly one `func` declaration.
FunctionDef parse(std::string_view text);
/// Parses a `.fpdsl` file: any number of declarations and `#` comments.
std::vector<FunctionDef> parse_file(std::string_view text);

/// Shortest decimal that round-trips to the same binary64 value.
std::string format_number(double value);

std::string to_source(const Expr& e, std::span<const std::string> param_names);
std::string pretty_print(const FunctionDef& f);

}  // namespace ofp
