#include "rpm/numerics.hpp"

#include <cmath>
#include <cstring>
#include <utility>

namespace rpm {

namespace {

long result_prec(const BigReal& a, const BigReal& b) {
  return a.precision() > b.precision() ? a.precision() : b.precision();
}

}  // namespace

PrecisionCtx::PrecisionCtx(long bits) : bits_(bits) {
  if (bits < kMinPrecisionBits) {
    throw std::invalid_argument("precision below the 192-bit floor: " +
                                std::to_string(bits));
  }
}

long PrecisionCtx::decimal_digits(long bits) noexcept {
  return static_cast<long>(static_cast<long double>(bits) * 0.30103L);
}

BigReal PrecisionCtx::real(long value) const { return BigReal(bits_, value); }

BigReal PrecisionCtx::real(std::string_view decimal) const {
  return BigReal(bits_, decimal);
}

BigReal PrecisionCtx::real_from_double(double value) const {
  return BigReal::from_double(bits_, value);
}

PrecisionCtx with_precision(long bits) { return PrecisionCtx(bits); }

BigReal::BigReal() {
  mpfr_init2(v_, kMinPrecisionBits);
  mpfr_set_nan(v_);
}

BigReal::BigReal(long prec_bits) {
  mpfr_init2(v_, prec_bits);
  mpfr_set_nan(v_);
}

BigReal::BigReal(long prec_bits, long value) {
  mpfr_init2(v_, prec_bits);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

BigReal::BigReal(long prec_bits, std::string_view decimal) {
  mpfr_init2(v_, prec_bits);
  std::string s(decimal);
  if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::from_double(long prec_bits, double value) {
  BigReal r(prec_bits);
  mpfr_set_d(r.v_, value, MPFR_RNDN);
  return r;
}

long BigReal::precision() const noexcept { return mpfr_get_prec(v_); }

BigReal BigReal::with_precision(long bits) const {
  BigReal r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

int BigReal::sign() const noexcept {
  if (mpfr_nan_p(v_)) return 0;
  return mpfr_sgn(v_);
}

bool BigReal::is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
bool BigReal::is_nan() const noexcept { return mpfr_nan_p(v_) != 0; }
bool BigReal::is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
double BigReal::to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

long BigReal::exponent2() const {
  if (!is_finite() || is_zero()) {
    throw std::domain_error("exponent of zero or non-finite value");
  }
  return mpfr_get_exp(v_);
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::add_mul(const BigReal& a, const BigReal& b) {
  mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::sub_mul(const BigReal& a, const BigReal& b) {
  // v - a*b = -(a*b - v); fms keeps it to a single rounding.
  mpfr_fms(v_, a.v_, b.v_, v_, MPFR_RNDN);
  mpfr_neg(v_, v_, MPFR_RNDN);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(result_prec(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(result_prec(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(result_prec(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(result_prec(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator*(long a, const BigReal& b) { return b * a; }

BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator+(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

bool operator<(const BigReal& a, const BigReal& b) {
  return mpfr_less_p(a.v_, b.v_) != 0;
}
bool operator<=(const BigReal& a, const BigReal& b) {
  return mpfr_lessequal_p(a.v_, b.v_) != 0;
}
bool operator>(const BigReal& a, const BigReal& b) {
  return mpfr_greater_p(a.v_, b.v_) != 0;
}
bool operator>=(const BigReal& a, const BigReal& b) {
  return mpfr_greaterequal_p(a.v_, b.v_) != 0;
}
bool operator==(const BigReal& a, const BigReal& b) {
  return mpfr_equal_p(a.v_, b.v_) != 0;
}
bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }

BigReal abs(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal log2(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log2(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal log10(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log10(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal hypot(const BigReal& x, const BigReal& y) {
  BigReal r(result_prec(x, y));
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

BigReal ldexp2(const BigReal& x, long k) {
  BigReal r(x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

bool less_abs(const BigReal& a, const BigReal& b) {
  return mpfr_cmpabs(a.raw(), b.raw()) < 0;
}

BigReal ulp(const BigReal& x) {
  long prec = x.precision();
  long e = (x.is_finite() && !x.is_zero()) ? x.exponent2() : 1;
  BigReal r(prec, 1L);
  return ldexp2(r, e - prec);
}

std::string BigReal::to_decimal() const {
  if (is_nan()) return "nan";
  if (!is_finite()) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
  std::string mant(s);
  mpfr_free_str(s);
  std::string sgn;
  if (!mant.empty() && mant[0] == '-') {
    sgn = "-";
    mant.erase(0, 1);
  }
  // d.ddd...e<k> with k the exponent of the leading digit.
  std::string out = sgn + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

namespace {

std::string format_decimal(const BigReal& x, int digits, mpfr_rnd_t rnd) {
  if (digits < 1) throw std::invalid_argument("digits must be positive");
  if (x.is_nan()) return "nan";
  if (!x.is_finite()) return x.sign() < 0 ? "-inf" : "inf";

  std::string sgn = x.sign() < 0 ? "-" : "";
  std::string mant;
  long lead_exp = 0;  // exponent of the leading digit
  if (x.is_zero()) {
    mant.assign(static_cast<size_t>(digits), '0');
  } else {
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits),
                           x.raw(), rnd);
    mant.assign(s);
    mpfr_free_str(s);
    if (!mant.empty() && mant[0] == '-') mant.erase(0, 1);
    lead_exp = static_cast<long>(e) - 1;
  }

  if (lead_exp > 6 || lead_exp < -6) {
    std::string out = sgn + mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(lead_exp);
    return out;
  }

  // Plain positional form. The mantissa string has `digits` chars and the
  // value is 0.<mant> * 10^(lead_exp + 1).
  long point = lead_exp + 1;  // digits before the decimal point
  std::string out = sgn;
  if (point <= 0) {
    out += "0.";
    out.append(static_cast<size_t>(-point), '0');
    out += mant;
  } else if (static_cast<size_t>(point) >= mant.size()) {
    out += mant;
    out.append(static_cast<size_t>(point) - mant.size(), '0');
  } else {
    out += mant.substr(0, static_cast<size_t>(point));
    out += ".";
    out += mant.substr(static_cast<size_t>(point));
  }
  return out;
}

}  // namespace

std::string truncate_decimal(const BigReal& x, int digits) {
  return format_decimal(x, digits, MPFR_RNDZ);
}

std::string round_decimal(const BigReal& x, int digits) {
  return format_decimal(x, digits, MPFR_RNDN);
}

BigComplex BigComplex::with_precision(long bits) const {
  return BigComplex(re_.with_precision(bits), im_.with_precision(bits));
}

BigComplex BigComplex::conj() const { return BigComplex(re_, -im_); }

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

BigComplex& BigComplex::add_mul(const BigComplex& a, const BigComplex& b) {
  re_.add_mul(a.re_, b.re_);
  re_.sub_mul(a.im_, b.im_);
  im_.add_mul(a.re_, b.im_);
  im_.add_mul(a.im_, b.re_);
  return *this;
}

BigComplex& BigComplex::sub_mul(const BigComplex& a, const BigComplex& b) {
  re_.sub_mul(a.re_, b.re_);
  re_.add_mul(a.im_, b.im_);
  im_.sub_mul(a.re_, b.im_);
  im_.sub_mul(a.im_, b.re_);
  return *this;
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) {
  return BigComplex(a.re() + b.re(), a.im() + b.im());
}

BigComplex operator-(const BigComplex& a, const BigComplex& b) {
  return BigComplex(a.re() - b.re(), a.im() - b.im());
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  BigReal re = a.re() * b.re();
  re.sub_mul(a.im(), b.im());
  BigReal im = a.re() * b.im();
  im.add_mul(a.im(), b.re());
  return BigComplex(std::move(re), std::move(im));
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  BigReal den = norm2(b);
  BigReal re = a.re() * b.re();
  re.add_mul(a.im(), b.im());
  BigReal im = a.im() * b.re();
  im.sub_mul(a.re(), b.im());
  return BigComplex(re / den, im / den);
}

BigComplex operator-(const BigComplex& a) {
  return BigComplex(-a.re(), -a.im());
}

BigComplex operator*(const BigComplex& a, const BigReal& b) {
  return BigComplex(a.re() * b, a.im() * b);
}

BigComplex operator*(const BigReal& a, const BigComplex& b) { return b * a; }

BigComplex operator-(const BigComplex& a, const BigReal& b) {
  return BigComplex(a.re() - b, a.im());
}

BigComplex operator/(const BigComplex& a, long b) {
  return BigComplex(a.re() / b, a.im() / b);
}

bool operator==(const BigComplex& a, const BigComplex& b) {
  return a.re() == b.re() && a.im() == b.im();
}

BigReal abs(const BigComplex& z) { return hypot(z.re(), z.im()); }

BigReal norm2(const BigComplex& z) {
  BigReal r = z.re() * z.re();
  r.add_mul(z.im(), z.im());
  return r;
}

}  // namespace rpm
