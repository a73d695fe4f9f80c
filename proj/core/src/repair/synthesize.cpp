#include <cmath>
#include <optional>

#include "ofp/detect.hpp"
#include "ofp/repair.hpp"
#include "patch_internal.hpp"

namespace ofp {
namespace {

struct Series {
  std::vector<Expr> coeffs;
  bool degraded = false;
};

// Symbolic f⁽ᵏ⁾(at)/k! for k < count, stopping early at the node cap.
Series taylor_series(const Expr& body, std::size_t var, const Expr& at, int count, std::size_t cap) {
  Series out;
  Expr d = simplify(body);
  double factorial = 1.0;
  for (int k = 0; k < count; ++k) {
    if (k > 0) {
      d = derivative(d, var);
      if (tree_size(d) > cap) {
        out.degraded = true;
        break;
      }
      factorial *= k;
    }
    Expr c = simplify(substitute(d, var, at));
    if (factorial != 1.0) c = simplify(Expr::binary(Op::Div, c, Expr::number(factorial)));
    out.coeffs.push_back(std::move(c));
  }
  return out;
}

bool cancels(const Expr& e, std::span<const double> point, double theta) {
  return max_atomic_condition(trace_expr(e, point), true).value >= theta;
}

struct Built {
  std::vector<Coefficient> coefficients;
  ConstantMode mode = ConstantMode::Kept;
  bool degraded = false;
};

using Attempt = std::variant<Built, RepairFailure>;

RepairFailure divergence(const std::string& detail) {
  return {FailureReason::Divergence, "Taylor expansion inapplicable at expansion point: " + detail};
}

// Values of the coefficients at `point`, rejecting non-finite ones and
// coefficients whose own evaluation cancels.
std::optional<RepairFailure> settle(Built& b, const std::vector<Expr>& exprs, std::span<const double> point,
                                    double theta) {
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    const double v = evaluate(exprs[k], point);
    if (!std::isfinite(v)) return divergence("coefficient of degree " + std::to_string(k) + " is not finite");
    if (cancels(exprs[k], point, theta)) {
      return RepairFailure{FailureReason::IrreducibleConstant,
                           k == 0 ? "constant term irreducible in working precision"
                                  : "coefficient of degree " + std::to_string(k) +
                                        " cancels in working precision"};
    }
    b.coefficients.push_back({static_cast<int>(k), exprs[k], v});
  }
  return std::nullopt;
}

Attempt expand_direct(const Expr& body, std::size_t var, double a, std::span<const double> point, int terms,
                      const RepairOptions& options) {
  const Expr at = Expr::number(a);
  Series s = taylor_series(body, var, at, terms, options.node_cap);
  Built b;
  b.degraded = s.degraded;
  const Expr raw_constant = substitute(body, var, at);
  if (!std::isfinite(evaluate(raw_constant, point))) return divergence("f is undefined there");
  if (is_zero(s.coeffs.front()) && cancels(raw_constant, point, options.theta_atomic)) {
    b.mode = ConstantMode::AnalyticallyCancelled;
  }
  if (auto failure = settle(b, s.coeffs, point, options.theta_atomic)) return *failure;
  return b;
}

// N/D with D(a) structurally zero: divide the two power series.
std::optional<Attempt> expand_quotient(const Expr& body, std::size_t var, double a, std::span<const double> point,
                                       int terms, const RepairOptions& options) {
  if (body.kind() != NodeKind::Binary || body.op() != Op::Div) return std::nullopt;
  const Expr& num = body.child(0);
  const Expr& den = body.child(1);
  const Expr at = Expr::number(a);
  if (!depends_on(den, var) || !is_zero(simplify(substitute(den, var, at)))) return std::nullopt;

  constexpr int kMaxOrder = 8;
  Series d = taylor_series(den, var, at, terms + kMaxOrder, options.node_cap);
  std::size_t m = 0;
  while (m < d.coeffs.size() && is_zero(d.coeffs[m])) ++m;
  if (m == d.coeffs.size()) return divergence("denominator vanishes to every computed order");

  Series n = taylor_series(num, var, at, terms + static_cast<int>(m), options.node_cap);
  for (std::size_t k = 0; k < m && k < n.coeffs.size(); ++k) {
    if (!is_zero(n.coeffs[k])) return divergence("pole of order " + std::to_string(m - k));
  }
  if (n.coeffs.size() <= m) return divergence("numerator series too short");

  const std::size_t count = std::min(n.coeffs.size(), d.coeffs.size()) - m;
  std::vector<Expr> q;
  for (std::size_t k = 0; k < count; ++k) {
    Expr acc = n.coeffs[k + m];
    for (std::size_t j = 1; j <= k; ++j) {
      acc = Expr::binary(Op::Sub, acc, Expr::binary(Op::Mul, d.coeffs[j + m], q[k - j]));
    }
    q.push_back(simplify(Expr::binary(Op::Div, acc, d.coeffs[m])));
  }
  Built b;
  b.degraded = n.degraded || d.degraded || static_cast<int>(count) < terms;
  if (auto failure = settle(b, q, point, options.theta_atomic)) return Attempt{*failure};
  return Attempt{b};
}

bool magnitudes_decrease(const std::vector<Coefficient>& cs, double rho, ConstantMode mode) {
  std::optional<std::size_t> prev;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k == 0 && mode == ConstantMode::AnalyticallyCancelled) continue;
    if (cs[k].value == 0.0) continue;
    if (prev) {
      const double scaled = std::fabs(cs[k].value) * std::pow(rho, static_cast<double>(k - *prev));
      if (scaled > std::fabs(cs[*prev].value)) return false;
    }
    prev = k;
  }
  return true;
}

TaylorPatch assemble(const FunctionDef& f, std::span<const double> point, std::size_t var, double radius,
                     ExpansionRoute route, Built built, Expr delta, double rho) {
  TaylorPatch p;
  p.source_name = f.name();
  p.params = f.params();
  p.var = var;
  p.expansion_point.assign(point.begin(), point.end());
  p.radius = radius;
  p.route = route;
  p.delta = std::move(delta);
  p.terms = static_cast<int>(built.coefficients.size());
  p.coefficients = std::move(built.coefficients);
  p.mode = built.mode;
  p.degraded = built.degraded;
  p.magnitude_ok = magnitudes_decrease(p.coefficients, rho, p.mode);
  p.horner = detail::horner(p.coefficients, p.delta, p.mode);
  return p;
}

Expr offset_of(std::size_t var, double a) {
  if (a == 0.0) return Expr::param(var);
  return Expr::binary(Op::Sub, Expr::param(var), Expr::number(a));
}

std::optional<TaylorPatch> try_lift(const FunctionDef& f, std::span<const double> point, std::size_t var,
                                    double radius, const RepairOptions& options) {
  const std::size_t t = f.arity();
  std::vector<double> extended(point.begin(), point.end());
  extended.push_back(0.0);
  const Expr zero = Expr::number(0.0);
  auto constants = constants_preorder(f.body());
  for (std::size_t i = 0; i < constants.size(); ++i) {
    const double value = constants[i].value();
    if (value == 0.0) continue;
    Expr lifted = replace_constant(f.body(), i, Expr::param(t));
    if (!is_zero(simplify(substitute(lifted, t, zero)))) continue;
    const double rho = std::fabs(value);
    const int terms = options.terms.value_or(term_cap(rho));
    Attempt a = expand_direct(lifted, t, 0.0, extended, terms, options);
    auto* built = std::get_if<Built>(&a);
    if (built == nullptr) continue;
    TaylorPatch p = assemble(f, point, var, radius, ExpansionRoute::PerturbationLift, std::move(*built),
                             Expr::number(value), rho);
    if (!p.magnitude_ok) continue;
    p.lifted = LiftedLiteral{i, value};
    return p;
  }
  return std::nullopt;
}

}  // namespace

SynthesisResult synthesize_patch(const FunctionDef& f, std::span<const double> point, std::size_t var, double radius,
                                 const RepairOptions& options) {
  if (var >= f.arity()) throw Error("expansion variable out of range");
  if (point.size() != f.arity()) throw Error("expansion point has the wrong number of coordinates");
  for (double x : point) {
    if (!std::isfinite(x)) throw Error("expansion point coordinate is not finite");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("radius must be positive and finite");
  if (options.terms && (*options.terms < 1 || *options.terms > 20)) throw Error("term count must be in [1, 20]");

  const double a = point[var];
  const int terms = options.terms.value_or(term_cap(radius));
  Attempt direct = expand_direct(f.body(), var, a, point, terms, options);
  if (auto* built = std::get_if<Built>(&direct)) {
    return assemble(f, point, var, radius, ExpansionRoute::Direct, std::move(*built), offset_of(var, a), radius);
  }
  RepairFailure failure = std::get<RepairFailure>(direct);

  if (options.allow_series_division) {
    if (auto quotient = expand_quotient(f.body(), var, a, point, terms, options)) {
      if (auto* built = std::get_if<Built>(&*quotient)) {
        return assemble(f, point, var, radius, ExpansionRoute::SeriesDivision, std::move(*built), offset_of(var, a),
                        radius);
      }
      failure = std::get<RepairFailure>(*quotient);
    }
  }

  if (options.allow_lift && failure.reason == FailureReason::IrreducibleConstant) {
    if (auto lifted = try_lift(f, point, var, radius, options)) return std::move(*lifted);
  }
  return failure;
}

}  // namespace ofp
