#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "ofp/expr.hpp"

namespace ofp {

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::Neg: return "neg";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Asin: return "asin";
    case Op::Acos: return "acos";
    case Op::Atan: return "atan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
  }
  return "?";
}

std::optional<Op> unary_function(std::string_view name) noexcept {
  for (Op op : {Op::Sin, Op::Cos, Op::Tan, Op::Asin, Op::Acos, Op::Atan, Op::Exp, Op::Log, Op::Sqrt}) {
    if (op_name(op) == name) return op;
  }
  return std::nullopt;
}

double apply(Op op, double a, double b) noexcept {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Tan: return std::tan(a);
    case Op::Asin: return std::asin(a);
    case Op::Acos: return std::acos(a);
    case Op::Atan: return std::atan(a);
    case Op::Exp: return std::exp(a);
    case Op::Log: return std::log(a);
    case Op::Sqrt: return std::sqrt(a);
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return std::pow(a, b);
  }
  return std::nan("");
}

Expr Expr::number(double value) {
  if (std::signbit(value)) return unary(Op::Neg, literal(format_number(-value), -value));
  return literal(format_number(value), value);
}

Expr Expr::literal(std::string text, double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value;
  n->text = std::move(text);
  return Expr(std::move(n));
}

Expr Expr::param(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Param;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr child) {
  if (arity(op) != 1) throw Error("unary node built with binary op");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Unary;
  n->op = op;
  n->children[0] = std::move(child);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (arity(op) != 2) throw Error("binary node built with unary op");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Binary;
  n->op = op;
  n->children[0] = std::move(lhs);
  n->children[1] = std::move(rhs);
  return Expr(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::text() const { return node_->text; }
std::size_t Expr::index() const { return node_->index; }
Op Expr::op() const { return node_->op; }
const Expr& Expr::child(std::size_t i) const { return node_->children[i]; }

std::optional<double> as_number(const Expr& e) noexcept {
  if (e.is_constant()) return e.value();
  if (e.kind() == NodeKind::Unary && e.op() == Op::Neg && e.child(0).is_constant()) {
    return -e.child(0).value();
  }
  return std::nullopt;
}

bool is_zero(const Expr& e) noexcept {
  auto v = as_number(e);
  return v && *v == 0.0;
}

bool is_one(const Expr& e) noexcept {
  auto v = as_number(e);
  return v && *v == 1.0;
}

bool structurally_equal(const Expr& a, const Expr& b) noexcept {
  if (a.get() == b.get()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Constant:
      return std::bit_cast<std::uint64_t>(a.value()) == std::bit_cast<std::uint64_t>(b.value());
    case NodeKind::Param:
      return a.index() == b.index();
    case NodeKind::Unary:
      return a.op() == b.op() && structurally_equal(a.child(0), b.child(0));
    case NodeKind::Binary:
      return a.op() == b.op() && structurally_equal(a.child(0), b.child(0)) &&
             structurally_equal(a.child(1), b.child(1));
  }
  return false;
}

namespace {

template <typename Leaf, typename Combine>
std::size_t fold_count(const Expr& e, std::unordered_map<const Node*, std::size_t>& memo, Leaf leaf,
                       Combine combine) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  std::size_t result = 0;
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Param:
      result = leaf(e);
      break;
    case NodeKind::Unary:
      result = combine(e, fold_count(e.child(0), memo, leaf, combine), 0);
      break;
    case NodeKind::Binary:
      result = combine(e, fold_count(e.child(0), memo, leaf, combine),
                       fold_count(e.child(1), memo, leaf, combine));
      break;
  }
  memo.emplace(e.get(), result);
  return result;
}

}  // namespace

std::size_t tree_size(const Expr& e) {
  std::unordered_map<const Node*, std::size_t> memo;
  return fold_count(
      e, memo, [](const Expr&) { return std::size_t{1}; },
      [](const Expr&, std::size_t l, std::size_t r) { return 1 + l + r; });
}

std::size_t operation_count(const Expr& e) {
  std::unordered_map<const Node*, std::size_t> memo;
  return fold_count(
      e, memo, [](const Expr&) { return std::size_t{0}; },
      [](const Expr&, std::size_t l, std::size_t r) { return 1 + l + r; });
}

std::size_t max_param_index(const Expr& e) {
  std::unordered_map<const Node*, std::size_t> memo;
  return fold_count(
      e, memo, [](const Expr& leaf) { return leaf.is_param() ? leaf.index() + 1 : std::size_t{0}; },
      [](const Expr&, std::size_t l, std::size_t r) { return std::max(l, r); });
}

bool depends_on(const Expr& e, std::size_t var) {
  std::unordered_map<const Node*, std::size_t> memo;
  return fold_count(
             e, memo,
             [var](const Expr& leaf) { return std::size_t{leaf.is_param() && leaf.index() == var}; },
             [](const Expr&, std::size_t l, std::size_t r) { return std::size_t{l || r}; }) != 0;
}

namespace {

Expr rebuild(const Expr& e, Expr lhs, Expr rhs) {
  if (e.kind() == NodeKind::Unary) {
    if (lhs.get() == e.child(0).get()) return e;
    return Expr::unary(e.op(), std::move(lhs));
  }
  if (lhs.get() == e.child(0).get() && rhs.get() == e.child(1).get()) return e;
  return Expr::binary(e.op(), std::move(lhs), std::move(rhs));
}

Expr substitute_impl(const Expr& e, std::size_t var, const Expr& replacement,
                     std::unordered_map<const Node*, Expr>& memo) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  Expr out;
  switch (e.kind()) {
    case NodeKind::Constant:
      out = e;
      break;
    case NodeKind::Param:
      out = e.index() == var ? replacement : e;
      break;
    case NodeKind::Unary:
      out = rebuild(e, substitute_impl(e.child(0), var, replacement, memo), {});
      break;
    case NodeKind::Binary:
      out = rebuild(e, substitute_impl(e.child(0), var, replacement, memo),
                    substitute_impl(e.child(1), var, replacement, memo));
      break;
  }
  memo.emplace(e.get(), out);
  return out;
}

// Occurrence-based rewrites cannot memoize on shared nodes.
Expr replace_constant_impl(const Expr& e, std::size_t& remaining, const Expr& replacement) {
  switch (e.kind()) {
    case NodeKind::Constant:
      if (remaining == 0) {
        remaining = static_cast<std::size_t>(-1);
        return replacement;
      }
      --remaining;
      return e;
    case NodeKind::Param:
      return e;
    case NodeKind::Unary:
      return rebuild(e, replace_constant_impl(e.child(0), remaining, replacement), {});
    case NodeKind::Binary: {
      Expr lhs = replace_constant_impl(e.child(0), remaining, replacement);
      Expr rhs = replace_constant_impl(e.child(1), remaining, replacement);
      return rebuild(e, std::move(lhs), std::move(rhs));
    }
  }
  return e;
}

void collect_constants(const Expr& e, std::vector<Expr>& out) {
  switch (e.kind()) {
    case NodeKind::Constant:
      out.push_back(e);
      break;
    case NodeKind::Param:
      break;
    case NodeKind::Unary:
      collect_constants(e.child(0), out);
      break;
    case NodeKind::Binary:
      collect_constants(e.child(0), out);
      collect_constants(e.child(1), out);
      break;
  }
}

}  // namespace

Expr substitute(const Expr& e, std::size_t var, const Expr& replacement) {
  std::unordered_map<const Node*, Expr> memo;
  return substitute_impl(e, var, replacement, memo);
}

Expr replace_constant(const Expr& e, std::size_t occurrence, const Expr& replacement) {
  std::size_t remaining = occurrence;
  return replace_constant_impl(e, remaining, replacement);
}

std::vector<Expr> constants_preorder(const Expr& e) {
  std::vector<Expr> out;
  collect_constants(e, out);
  return out;
}

bool Interval::contains(double x) const noexcept {
  bool above = lo.inclusive ? x >= lo.value : x > lo.value;
  bool below = hi.inclusive ? x <= hi.value : x < hi.value;
  return above && below;
}

bool Interval::bounded() const noexcept { return std::isfinite(lo.value) && std::isfinite(hi.value); }

bool Interval::empty() const noexcept {
  if (std::isnan(lo.value) || std::isnan(hi.value)) return true;
  if (lo.value > hi.value) return true;
  if (lo.value == hi.value) return !(lo.inclusive && hi.inclusive);
  return false;
}

FunctionDef::FunctionDef(std::string name, std::vector<ParamDecl> params, Expr body)
    : name_(std::move(name)), params_(std::move(params)), body_(std::move(body)) {
  std::unordered_set<std::string> seen;
  for (const auto& p : params_) {
    if (!seen.insert(p.name).second) throw Error("duplicate parameter '" + p.name + "' in " + name_);
    if (p.domain.empty()) throw Error("empty domain for parameter '" + p.name + "' in " + name_);
  }
  if (max_param_index(body_) > params_.size()) {
    throw Error("body of " + name_ + " references an undeclared parameter");
  }
}

std::optional<std::size_t> FunctionDef::param_index(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FunctionDef::param_names() const {
  std::vector<std::string> names;
  names.reserve(params_.size());
  for (const auto& p : params_) names.push_back(p.name);
  return names;
}

bool FunctionDef::in_domain(std::span<const double> point) const noexcept {
  if (point.size() != params_.size()) return false;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (!params_[i].domain.contains(point[i])) return false;
  }
  return true;
}

bool structurally_equal(const FunctionDef& a, const FunctionDef& b) noexcept {
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const auto& pa = a.params()[i];
    const auto& pb = b.params()[i];
    if (pa.name != pb.name) return false;
    if (pa.domain.lo.inclusive != pb.domain.lo.inclusive || pa.domain.hi.inclusive != pb.domain.hi.inclusive)
      return false;
    if (std::bit_cast<std::uint64_t>(pa.domain.lo.value) != std::bit_cast<std::uint64_t>(pb.domain.lo.value) ||
        std::bit_cast<std::uint64_t>(pa.domain.hi.value) != std::bit_cast<std::uint64_t>(pb.domain.hi.value))
      return false;
  }
  return structurally_equal(a.body(), b.body());
}

}  // namespace ofp
