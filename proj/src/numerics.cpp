#include "optimist/numerics.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace optimist {

namespace {

// log2(10); digits -> bits.
constexpr double kBitsPerDigit = 3.3219280948873623478703194294894;

struct MpfrStringDeleter {
  void operator()(char* p) const { mpfr_free_str(p); }
};

}  // namespace

Context::Context(int digits) : digits_(digits) {
  if (digits < kMinDigits) {
    throw std::invalid_argument("precision must be at least " +
                                std::to_string(kMinDigits) + " digits, got " +
                                std::to_string(digits));
  }
  bits_ = static_cast<mpfr_prec_t>(std::ceil(digits * kBitsPerDigit));
}

Context make_context(int digits) { return Context(digits); }

Real Context::zero() const { return Real(*this, 0L); }
Real Context::one() const { return Real(*this, 1L); }
Real Context::integer(long value) const { return Real(*this, value); }
Real Context::ratio(long num, long den) const { return Real(*this, num) / den; }
Real Context::parse(std::string_view text) const { return Real(*this, text); }

Real Context::pow10(long exponent) const {
  Real r(*this, 10L);
  mpfr_pow_si(r.value_, r.value_, exponent, MPFR_RNDN);
  return r;
}

Real::Real(mpfr_prec_t bits) { mpfr_init2(value_, bits); }

Real::Real(const Context& ctx, long value) : Real(ctx.bits()) {
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real like(const Real& ref, long value) {
  Real r(ref.bits());
  mpfr_set_si(r.value_, value, MPFR_RNDN);
  return r;
}

Real::Real(const Context& ctx, std::string_view text) : Real(ctx.bits()) {
  std::string buf(text);
  if (buf.empty() || mpfr_set_str(value_, buf.c_str(), 10, MPFR_RNDN) != 0 ||
      !is_finite()) {
    throw std::invalid_argument("not a finite decimal number: '" + buf + "'");
  }
}

Real::Real(const Real& other) : Real(other.bits()) {
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

// The moved-from value keeps a minimal-precision placeholder.
Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

void Real::require_same(const Real& other) const {
  if (bits() != other.bits()) {
    throw PrecisionMismatch("mixing reals of " + std::to_string(bits()) +
                            " and " + std::to_string(other.bits()) + " bits");
  }
}

long Real::floor_long() const {
  if (!mpfr_fits_slong_p(value_, MPFR_RNDD)) {
    throw std::overflow_error("value does not fit in long: " + str(20));
  }
  return mpfr_get_si(value_, MPFR_RNDD);
}

long Real::ceil_long() const {
  if (!mpfr_fits_slong_p(value_, MPFR_RNDU)) {
    throw std::overflow_error("value does not fit in long: " + str(20));
  }
  return mpfr_get_si(value_, MPFR_RNDU);
}

std::string Real::str(int significant) const {
  if (is_zero()) return "0.0";
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";

  mpfr_exp_t exp10 = 0;
  std::unique_ptr<char, MpfrStringDeleter> raw(
      mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant),
                   value_, MPFR_RNDN));
  std::string digits(raw.get());
  std::string out;
  if (digits.front() == '-') {
    out.push_back('-');
    digits.erase(0, 1);
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  // value = 0.d1d2d3... * 10^exp10
  const long point = static_cast<long>(exp10);
  if (point > -6 && point <= 21) {
    if (point <= 0) {
      out += "0.";
      out.append(static_cast<size_t>(-point), '0');
      out += digits;
    } else if (static_cast<size_t>(point) >= digits.size()) {
      out += digits;
      out.append(static_cast<size_t>(point) - digits.size(), '0');
      out += ".0";
    } else {
      out += digits.substr(0, static_cast<size_t>(point));
      out += '.';
      out += digits.substr(static_cast<size_t>(point));
    }
  } else {
    out += digits.front();
    out += '.';
    out += digits.size() > 1 ? digits.substr(1) : "0";
    out += 'e';
    const long e = point - 1;
    out += e < 0 ? '-' : '+';
    out += std::to_string(e < 0 ? -e : e);
  }
  return out;
}

Real& Real::operator+=(const Real& rhs) {
  require_same(rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  require_same(rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  require_same(rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  require_same(rhs);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  a.require_same(b);
  Real r(a.bits());
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  a.require_same(b);
  Real r(a.bits());
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  a.require_same(b);
  Real r(a.bits());
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  a.require_same(b);
  Real r(a.bits());
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a) {
  Real r(a.bits());
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, long b) {
  Real r(a.bits());
  mpfr_add_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r(a.bits());
  mpfr_sub_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}
Real operator-(long a, const Real& b) {
  Real r(b.bits());
  mpfr_si_sub(r.value_, a, b.value_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.bits());
  mpfr_mul_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(const Real& a, long b) {
  Real r(a.bits());
  mpfr_div_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}
Real operator/(long a, const Real& b) {
  Real r(b.bits());
  mpfr_si_div(r.value_, a, b.value_, MPFR_RNDN);
  return r;
}

bool operator==(const Real& a, const Real& b) {
  a.require_same(b);
  return mpfr_equal_p(a.value_, b.value_) != 0;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  a.require_same(b);
  if (mpfr_unordered_p(a.value_, b.value_)) {
    return std::partial_ordering::unordered;
  }
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater
                        : std::partial_ordering::equivalent);
}

bool operator==(const Real& a, long b) {
  return mpfr_cmp_si(a.value_, b) == 0 && !mpfr_nan_p(a.value_);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater
                        : std::partial_ordering::equivalent);
}

Real exp(const Real& a) {
  Real r(a.bits());
  mpfr_exp(r.value_, a.value_, MPFR_RNDN);
  return r;
}
Real log(const Real& a) {
  Real r(a.bits());
  mpfr_log(r.value_, a.value_, MPFR_RNDN);
  return r;
}
Real sqrt(const Real& a) {
  Real r(a.bits());
  mpfr_sqrt(r.value_, a.value_, MPFR_RNDN);
  return r;
}
Real pow(const Real& base, const Real& exponent) {
  base.require_same(exponent);
  Real r(base.bits());
  mpfr_pow(r.value_, base.value_, exponent.value_, MPFR_RNDN);
  return r;
}
Real abs(const Real& a) {
  Real r(a.bits());
  mpfr_abs(r.value_, a.value_, MPFR_RNDN);
  return r;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& value) {
  return os << value.str();
}

Tolerance default_tolerance(const Context& ctx) {
  Real t = ctx.pow10(-(ctx.digits() - 10));
  return Tolerance{t, t};
}

bool approx_equal(const Real& a, const Real& b, const Tolerance& tol) {
  const Real diff = abs(a - b);
  const Real scale = max(abs(a), abs(b));
  return diff <= max(tol.abs, tol.rel * scale);
}

RealVector zeros(const Context& ctx, std::size_t n) {
  return RealVector(n, ctx.zero());
}

Real sum(const RealVector& v) {
  if (v.empty()) throw std::invalid_argument("sum of an empty vector");
  Real s = v.front();
  for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
  return s;
}

Real dot(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  Real s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace optimist
