#include <cmath>

#include "ofp/expr.hpp"

namespace ofp {
namespace {

void check_point(std::size_t arity, std::span<const double> point) {
  if (point.size() != arity) {
    throw Error("point has " + std::to_string(point.size()) + " coordinates, function takes " +
                std::to_string(arity));
  }
  for (double x : point) {
    if (!std::isfinite(x)) throw Error("point coordinate is not finite");
  }
}

double eval_plain(const Expr& e, std::span<const double> point) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return e.value();
    case NodeKind::Param:
      return point[e.index()];
    case NodeKind::Unary:
      return apply(e.op(), eval_plain(e.child(0), point));
    case NodeKind::Binary: {
      // Sequenced: left operand strictly before right.
      double lhs = eval_plain(e.child(0), point);
      double rhs = eval_plain(e.child(1), point);
      return apply(e.op(), lhs, rhs);
    }
  }
  return std::nan("");
}

class Tracer {
 public:
  Tracer(std::span<const double> point, EvalTrace& trace) : point_(point), trace_(trace) {}

  double visit(const Expr& e) {
    const std::size_t id = next_id_++;
    switch (e.kind()) {
      case NodeKind::Constant:
        return e.value();
      case NodeKind::Param:
        return point_[e.index()];
      case NodeKind::Unary: {
        double u = visit(e.child(0));
        return record(id, e.op(), u, 0.0);
      }
      case NodeKind::Binary: {
        double u = visit(e.child(0));
        double v = visit(e.child(1));
        return record(id, e.op(), u, v);
      }
    }
    return std::nan("");
  }

 private:
  double record(std::size_t id, Op op, double u, double v) {
    const double r = apply(op, u, v);
    const bool finite_in = std::isfinite(u) && (arity(op) == 1 || std::isfinite(v));
    const bool flagged = finite_in && !std::isfinite(r);
    trace_.records.push_back({id, op, {u, v}, r, flagged});
    trace_.flagged = trace_.flagged || flagged || !std::isfinite(r);
    return r;
  }

  std::span<const double> point_;
  EvalTrace& trace_;
  std::size_t next_id_ = 0;
};

}  // namespace

double evaluate(const Expr& e, std::span<const double> point) { return eval_plain(e, point); }

double evaluate(const FunctionDef& f, std::span<const double> point) {
  check_point(f.arity(), point);
  return eval_plain(f.body(), point);
}

EvalTrace trace_expr(const Expr& e, std::span<const double> point) {
  EvalTrace trace;
  Tracer tracer(point, trace);
  trace.result = tracer.visit(e);
  return trace;
}

Evaluation eval_working(const FunctionDef& f, std::span<const double> point) {
  check_point(f.arity(), point);
  EvalTrace trace = trace_expr(f.body(), point);
  const double value = trace.result;
  return {value, std::move(trace)};
}

}  // namespace ofp
