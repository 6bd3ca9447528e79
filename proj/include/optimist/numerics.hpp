#pragma once

// Arbitrary-precision scalar used by every simulation in the library.
//
// A Real wraps an MPFR value whose precision is fixed at construction and
// derived from a Context (a number of significant decimal digits). There is
// no process-wide precision setting: every value carries its own precision,
// and arithmetic between values of different precision throws
// PrecisionMismatch instead of silently widening or narrowing.

#include <mpfr.h>

#include <compare>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace optimist {

class Real;

class PrecisionMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numeric context: a fixed number of significant decimal digits.
/// Immutable and cheap to copy; safe to share across threads.
class Context {
 public:
  static constexpr int kMinDigits = 16;

  /// Throws std::invalid_argument when digits < kMinDigits.
  explicit Context(int digits);

  int digits() const { return digits_; }
  mpfr_prec_t bits() const { return bits_; }

  Real zero() const;
  Real one() const;
  Real integer(long value) const;
  Real ratio(long num, long den) const;
  /// Parses a decimal string ("0.01", "-1.5e-3"); throws std::invalid_argument.
  Real parse(std::string_view text) const;
  /// 10^exponent, exact up to rounding at this precision.
  Real pow10(long exponent) const;

  friend bool operator==(const Context&, const Context&) = default;

 private:
  int digits_;
  mpfr_prec_t bits_;
};

Context make_context(int digits);

class Real {
 public:
  Real(const Context& ctx, long value);
  Real(const Context& ctx, std::string_view text);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Rounds toward -inf / +inf; throws std::overflow_error if out of range.
  long floor_long() const;
  long ceil_long() const;

  /// Canonical decimal form. significant == 0 emits enough digits for an
  /// exact round trip at this value's precision.
  std::string str(int significant = 0) const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);

  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator-(long a, const Real& b);
  friend Real operator*(const Real& a, long b);
  friend Real operator*(long a, const Real& b);
  friend Real operator/(const Real& a, long b);
  friend Real operator/(long a, const Real& b);

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b);
  friend std::partial_ordering operator<=>(const Real& a, long b);

  friend Real exp(const Real& a);
  friend Real log(const Real& a);
  friend Real sqrt(const Real& a);
  friend Real pow(const Real& base, const Real& exponent);
  friend Real abs(const Real& a);

  /// An integer at the precision of `ref`.
  friend Real like(const Real& ref, long value);

  const __mpfr_struct* raw() const { return value_; }

 private:
  friend class Context;
  explicit Real(mpfr_prec_t bits);
  void require_same(const Real& other) const;

  mpfr_t value_;
};

Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& value);

/// Absolute and relative thresholds used by equality assertions.
struct Tolerance {
  Real abs;
  Real rel;
};

/// abs = rel = 10^-(digits - 10).
Tolerance default_tolerance(const Context& ctx);

/// |a - b| <= max(tol.abs, tol.rel * max(|a|, |b|)).
bool approx_equal(const Real& a, const Real& b, const Tolerance& tol);

using RealVector = std::vector<Real>;

RealVector zeros(const Context& ctx, std::size_t n);
Real sum(const RealVector& v);
Real dot(const RealVector& a, const RealVector& b);

}  // namespace optimist
