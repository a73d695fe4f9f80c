#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ofp/oracle.hpp"

namespace ofp {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

long checked_bits(long bits) {
  if (bits < 64 || bits > MPFR_PREC_MAX) throw Error("precision must be at least 64 bits");
  return bits;
}

}  // namespace

BigFloat::BigFloat(long bits) {
  mpfr_init2(value_, checked_bits(bits));
  live_ = true;
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, long bits) : BigFloat(bits) { mpfr_set_d(value_, value, kRound); }

BigFloat::BigFloat(const BigFloat& other) : BigFloat(other.precision()) { mpfr_set(value_, other.value_, kRound); }

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  live_ = true;
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() {
  if (live_) mpfr_clear(value_);
}

BigFloat BigFloat::from_decimal(const std::string& text, long bits) {
  BigFloat out(bits);
  if (mpfr_set_str(out.value_, text.c_str(), 10, kRound) != 0) throw Error("malformed decimal '" + text + "'");
  return out;
}

long BigFloat::precision() const noexcept { return static_cast<long>(mpfr_get_prec(value_)); }

double BigFloat::to_double() const noexcept { return mpfr_get_d(value_, kRound); }

std::string BigFloat::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  char* buf = nullptr;
  const std::string format = "%." + std::to_string(digits > 1 ? digits - 1 : 0) + "Re";
  if (mpfr_asprintf(&buf, format.c_str(), value_) < 0) throw Error("formatting failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

bool BigFloat::is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
bool BigFloat::is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
int BigFloat::sign() const noexcept { return mpfr_sgn(value_); }

namespace {

class Extended {
 public:
  Extended(std::span<const double> point, long bits, InputInterpretation interpretation)
      : bits_(bits), interpretation_(interpretation) {
    for (double x : point) {
      if (!std::isfinite(x)) throw Error("point coordinate is not finite");
      inputs_.push_back(read(x, format_number(x)));
    }
  }

  BigFloat eval(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant:
        return read(e.value(), e.text().empty() ? format_number(e.value()) : e.text());
      case NodeKind::Param:
        if (e.index() >= inputs_.size()) throw Error("expression references a missing coordinate");
        return inputs_[e.index()];
      case NodeKind::Unary: {
        BigFloat u = eval(e.child(0));
        BigFloat r(bits_);
        unary(e.op(), r.raw(), u.raw());
        return checked(std::move(r), e.op());
      }
      case NodeKind::Binary: {
        BigFloat u = eval(e.child(0));
        BigFloat v = eval(e.child(1));
        BigFloat r(bits_);
        binary(e.op(), r.raw(), u.raw(), v.raw());
        return checked(std::move(r), e.op());
      }
    }
    throw Error("unknown node kind");
  }

 private:
  BigFloat read(double value, const std::string& text) const {
    if (interpretation_ == InputInterpretation::DecimalLiteral) return BigFloat::from_decimal(text, bits_);
    return BigFloat(value, bits_);
  }

  static BigFloat checked(BigFloat r, Op op) {
    if (!r.is_finite()) {
      throw OracleError("oracle: '" + std::string(op_name(op)) + "' is undefined or overflows at this point");
    }
    return r;
  }

  static void unary(Op op, mpfr_ptr r, mpfr_srcptr u) {
    switch (op) {
      case Op::Neg: mpfr_neg(r, u, kRound); return;
      case Op::Sin: mpfr_sin(r, u, kRound); return;
      case Op::Cos: mpfr_cos(r, u, kRound); return;
      case Op::Tan: mpfr_tan(r, u, kRound); return;
      case Op::Asin: mpfr_asin(r, u, kRound); return;
      case Op::Acos: mpfr_acos(r, u, kRound); return;
      case Op::Atan: mpfr_atan(r, u, kRound); return;
      case Op::Exp: mpfr_exp(r, u, kRound); return;
      case Op::Log: mpfr_log(r, u, kRound); return;
      case Op::Sqrt: mpfr_sqrt(r, u, kRound); return;
      default: throw Error("not a unary operation");
    }
  }

  static void binary(Op op, mpfr_ptr r, mpfr_srcptr u, mpfr_srcptr v) {
    switch (op) {
      case Op::Add: mpfr_add(r, u, v, kRound); return;
      case Op::Sub: mpfr_sub(r, u, v, kRound); return;
      case Op::Mul: mpfr_mul(r, u, v, kRound); return;
      case Op::Div:
        if (mpfr_zero_p(v)) throw OracleError("oracle: division by zero");
        mpfr_div(r, u, v, kRound);
        return;
      case Op::Pow: mpfr_pow(r, u, v, kRound); return;
      default: throw Error("not a binary operation");
    }
  }

  long bits_;
  InputInterpretation interpretation_;
  std::vector<BigFloat> inputs_;
};

}  // namespace

namespace {

// |a - b| <= 2^-bits |b|, with two zeros agreeing.
bool agree(const BigFloat& a, const BigFloat& b, long bits) {
  if (b.is_zero()) return a.is_zero();
  BigFloat diff(a.precision());
  mpfr_sub(diff.raw(), a.raw(), b.raw(), kRound);
  if (diff.is_zero()) return true;
  return mpfr_get_exp(diff.raw()) <= mpfr_get_exp(b.raw()) - bits;
}

}  // namespace

BigFloat eval_extended(const Expr& e, std::span<const double> point, long bits, InputInterpretation interpretation) {
  if (bits < 128) throw Error("oracle precision must be at least 128 bits");
  constexpr long kGuard = 32;
  constexpr long kStep = 64;
  const long ceiling = 4 * bits + 256;
  long working = bits + kGuard;
  BigFloat previous = Extended(point, working, interpretation).eval(e);
  BigFloat current(bits);
  while (true) {
    working += kStep;
    current = Extended(point, working, interpretation).eval(e);
    if (agree(previous, current, bits + 1) || working >= ceiling) break;
    previous = std::move(current);
  }
  BigFloat out(bits);
  mpfr_set(out.raw(), current.raw(), kRound);
  return out;
}

BigFloat eval_extended(const FunctionDef& f, std::span<const double> point, long bits,
                       InputInterpretation interpretation) {
  if (point.size() != f.arity()) throw Error("point has the wrong number of coordinates");
  return eval_extended(f.body(), point, bits, interpretation);
}

double absolute_error(double approx, const BigFloat& truth) {
  BigFloat diff(truth.precision() + 64);
  BigFloat a(approx, truth.precision() + 64);
  mpfr_sub(diff.raw(), a.raw(), truth.raw(), kRound);
  mpfr_abs(diff.raw(), diff.raw(), kRound);
  return diff.to_double();
}

ErrorMeasure relative_error(double approx, const BigFloat& truth) {
  if (!truth.is_finite()) throw Error("truth is not finite");
  if (!std::isfinite(approx)) return {std::numeric_limits<double>::infinity(), truth.is_zero()};
  if (truth.is_zero()) return {absolute_error(approx, truth), true};
  const long bits = truth.precision() + 64;
  BigFloat a(approx, bits);
  BigFloat diff(bits);
  mpfr_sub(diff.raw(), a.raw(), truth.raw(), kRound);
  mpfr_div(diff.raw(), diff.raw(), truth.raw(), kRound);
  mpfr_abs(diff.raw(), diff.raw(), kRound);
  return {diff.to_double(), false};
}

}  // namespace ofp
