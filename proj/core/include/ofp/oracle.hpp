#pragma once

#include <mpfr.h>

#include <span>
#include <string>

#include "ofp/expr.hpp"

namespace ofp {

/// Owning MPFR value with a fixed significand precision (≥ 64 bits).
class BigFloat {
 public:
  explicit BigFloat(long bits = 256);
  BigFloat(double value, long bits);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  /// Parses a decimal string, correctly rounded to `bits`.
  static BigFloat from_decimal(const std::string& text, long bits);

  long precision() const noexcept;
  double to_double() const noexcept;
  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits = 20) const;
  bool is_zero() const noexcept;
  bool is_finite() const noexcept;
  int sign() const noexcept;

  mpfr_ptr raw() noexcept { return value_; }
  mpfr_srcptr raw() const noexcept { return value_; }

 private:
  mpfr_t value_;
  bool live_ = false;
};

/// How binary64 inputs and literals are read by the oracle.
enum class InputInterpretation {
  /// Point coordinates and constants are the exact binary64 values.
  Binary64Exact,
  /// Point coordinates are read as their shortest round-trip decimal and
  /// constants as their source spelling.
  DecimalLiteral,
};

inline constexpr long kDefaultOracleBits = 256;

/// Raised on a domain violation or a non-finite intermediate.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Evaluates f to `bits` (≥ 128) significant bits. Intermediates carry guard
/// bits, raised until two successive evaluations agree to `bits`, so
/// cancellation inside f does not eat into the result's precision.
BigFloat eval_extended(const FunctionDef& f, std::span<const double> point, long bits = kDefaultOracleBits,
                       InputInterpretation interpretation = InputInterpretation::Binary64Exact);
BigFloat eval_extended(const Expr& e, std::span<const double> point, long bits = kDefaultOracleBits,
                       InputInterpretation interpretation = InputInterpretation::Binary64Exact);

struct ErrorMeasure {
  double value;
  /// True when the truth is zero and `value` is the absolute error.
  bool absolute;
};

/// |approx − truth| / |truth| in the truth's precision, rounded to binary64.
ErrorMeasure relative_error(double approx, const BigFloat& truth);

/// |approx − truth| rounded to binary64.
double absolute_error(double approx, const BigFloat& truth);

}  // namespace ofp
