#include <array>
#include <charconv>
#include <cmath>

#include "ofp/expr.hpp"

namespace ofp {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf.data(), ptr);
}

namespace {

// Binding strength, loosest first.
enum Prec : int { kAdditive = 1, kMultiplicative = 2, kPrefix = 3, kPower = 4, kAtom = 5 };

int precedence(const Expr& e) {
  if (e.kind() == NodeKind::Binary) {
    switch (e.op()) {
      case Op::Add:
      case Op::Sub: return kAdditive;
      case Op::Mul:
      case Op::Div: return kMultiplicative;
      default: return kPower;
    }
  }
  if (e.kind() == NodeKind::Unary && e.op() == Op::Neg) return kPrefix;
  return kAtom;
}

class Printer {
 public:
  explicit Printer(std::span<const std::string> names) : names_(names) {}

  void print(const Expr& e, std::string& out) const {
    switch (e.kind()) {
      case NodeKind::Constant:
        out += format_number(e.value());
        return;
      case NodeKind::Param:
        if (e.index() < names_.size()) {
          out += names_[e.index()];
        } else {
          out += "_p" + std::to_string(e.index());
        }
        return;
      case NodeKind::Unary:
        if (e.op() == Op::Neg) {
          out += '-';
          // "--x" would also re-parse, but reads as a decrement.
          const Expr& c = e.child(0);
          bool nested_neg = c.kind() == NodeKind::Unary && c.op() == Op::Neg;
          wrap(c, precedence(c) < kPrefix || nested_neg, out);
        } else {
          out += op_name(e.op());
          out += '(';
          print(e.child(0), out);
          out += ')';
        }
        return;
      case NodeKind::Binary:
        print_binary(e, out);
        return;
    }
  }

 private:
  void wrap(const Expr& e, bool parens, std::string& out) const {
    if (parens) out += '(';
    print(e, out);
    if (parens) out += ')';
  }

  void print_binary(const Expr& e, std::string& out) const {
    const int p = precedence(e);
    const Expr& lhs = e.child(0);
    const Expr& rhs = e.child(1);
    if (e.op() == Op::Pow) {
      // The base is a primary; the exponent is a prefix-level operand.
      wrap(lhs, precedence(lhs) <= kPower, out);
      out += '^';
      wrap(rhs, precedence(rhs) < kPrefix, out);
      return;
    }
    // Left-associative: the left operand binds at the same level, the right one strictly tighter.
    wrap(lhs, precedence(lhs) < p, out);
    out += ' ';
    out += op_name(e.op());
    out += ' ';
    wrap(rhs, precedence(rhs) <= p, out);
  }

  std::span<const std::string> names_;
};

std::string format_bound(double v) { return format_number(v); }

}  // namespace

std::string to_source(const Expr& e, std::span<const std::string> param_names) {
  std::string out;
  Printer(param_names).print(e, out);
  return out;
}

std::string pretty_print(const FunctionDef& f) {
  std::string out = "func " + f.name() + "(";
  for (std::size_t i = 0; i < f.arity(); ++i) {
    const auto& p = f.params()[i];
    if (i > 0) out += ", ";
    out += p.name;
    const Interval& d = p.domain;
    if (d != Interval::unbounded()) {
      out += " in ";
      out += d.lo.inclusive ? '[' : '(';
      out += format_bound(d.lo.value);
      out += ", ";
      out += format_bound(d.hi.value);
      out += d.hi.inclusive ? ']' : ')';
    }
  }
  out += ") = ";
  auto names = f.param_names();
  out += to_source(f.body(), names);
  return out;
}

}  // namespace ofp
