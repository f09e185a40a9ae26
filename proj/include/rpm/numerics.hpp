#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpm {

// 192 bits is the floor needed to resolve 40 decimal digits with headroom.
inline constexpr long kMinPrecisionBits = 192;

class BigReal;

/// Working precision for a computation. Scalars carry their own precision;
/// the context is the factory that pins it. Contexts are immutable.
class PrecisionCtx {
 public:
  explicit PrecisionCtx(long bits);

  long bits() const noexcept { return bits_; }
  long decimal_digits() const noexcept { return decimal_digits(bits_); }

  /// floor(bits * log10(2)), the decimal capacity of a mantissa.
  static long decimal_digits(long bits) noexcept;

  BigReal real(long value = 0) const;
  BigReal real(std::string_view decimal) const;
  BigReal real_from_double(double value) const;

 private:
  long bits_;
};

/// Factory matching the library-level entry point: rejects bits < 192.
PrecisionCtx with_precision(long bits);

/// Immutable-by-convention arbitrary-precision real. Binary operations
/// produce a result at the larger of the two operand precisions, so a
/// computation seeded from one context stays at that context's precision.
class BigReal {
 public:
  BigReal();
  explicit BigReal(long prec_bits);
  BigReal(long prec_bits, long value);
  BigReal(long prec_bits, std::string_view decimal);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static BigReal from_double(long prec_bits, double value);

  long precision() const noexcept;
  /// Same value re-rounded at a new precision (exact when widening).
  BigReal with_precision(long bits) const;

  int sign() const noexcept;  // -1, 0, +1 (0 for NaN)
  bool is_finite() const noexcept;
  bool is_nan() const noexcept;
  bool is_zero() const noexcept;
  double to_double() const noexcept;
  /// Exponent e with |x| in [2^(e-1), 2^e); only valid for nonzero finite x.
  long exponent2() const;

  /// Full-precision decimal string; parsing it back at the same precision
  /// recovers the value exactly.
  std::string to_decimal() const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);

  /// *this += a * b, fused (single rounding).
  BigReal& add_mul(const BigReal& a, const BigReal& b);
  /// *this -= a * b, fused.
  BigReal& sub_mul(const BigReal& a, const BigReal& b);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);

  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator*(long a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, long b);
  friend BigReal operator+(const BigReal& a, long b);
  friend BigReal operator-(const BigReal& a, long b);

  friend bool operator<(const BigReal& a, const BigReal& b);
  friend bool operator<=(const BigReal& a, const BigReal& b);
  friend bool operator>(const BigReal& a, const BigReal& b);
  friend bool operator>=(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, const BigReal& b);
  friend bool operator!=(const BigReal& a, const BigReal& b);

  friend BigReal abs(const BigReal& x);
  friend BigReal sqrt(const BigReal& x);
  friend BigReal exp(const BigReal& x);
  friend BigReal log(const BigReal& x);
  friend BigReal log2(const BigReal& x);
  friend BigReal log10(const BigReal& x);
  friend BigReal hypot(const BigReal& x, const BigReal& y);
  /// x * 2^k, exact.
  friend BigReal ldexp2(const BigReal& x, long k);
  friend const BigReal& min(const BigReal& a, const BigReal& b);
  friend const BigReal& max(const BigReal& a, const BigReal& b);
  /// |a| < |b| (NaN-free inputs assumed).
  friend bool less_abs(const BigReal& a, const BigReal& b);

  /// Unit in the last place of x at x's own precision: 2^(exp(x) - prec).
  friend BigReal ulp(const BigReal& x);

  mpfr_srcptr raw() const noexcept { return v_; }
  mpfr_ptr raw() noexcept { return v_; }

 private:
  mpfr_t v_;
};

// Namespace-scope declarations of the named friends, so qualified calls work.
BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log2(const BigReal& x);
BigReal log10(const BigReal& x);
BigReal hypot(const BigReal& x, const BigReal& y);
BigReal ldexp2(const BigReal& x, long k);
const BigReal& min(const BigReal& a, const BigReal& b);
const BigReal& max(const BigReal& a, const BigReal& b);
bool less_abs(const BigReal& a, const BigReal& b);
BigReal ulp(const BigReal& x);

/// Decimal string with exactly `digits` significant digits, truncated toward
/// zero. Plain positional notation unless the decimal exponent's magnitude
/// exceeds 6, in which case d.ddd...e<exp> is used.
std::string truncate_decimal(const BigReal& x, int digits);

/// Same formatting as truncate_decimal but rounded to nearest (display
/// convention for published digit strings).
std::string round_decimal(const BigReal& x, int digits);

/// Complex scalar built from two BigReals of equal precision.
class BigComplex {
 public:
  BigComplex() = default;
  explicit BigComplex(long prec_bits)
      : re_(prec_bits, 0L), im_(prec_bits, 0L) {}
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BigComplex(BigReal re)
      : re_(std::move(re)), im_(re_.precision(), 0L) {}

  const BigReal& re() const noexcept { return re_; }
  const BigReal& im() const noexcept { return im_; }
  long precision() const noexcept { return re_.precision(); }
  BigComplex with_precision(long bits) const;

  bool is_finite() const noexcept {
    return re_.is_finite() && im_.is_finite();
  }
  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }

  BigComplex conj() const;

  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);

  /// *this += a * b with four fused real updates.
  BigComplex& add_mul(const BigComplex& a, const BigComplex& b);
  BigComplex& sub_mul(const BigComplex& a, const BigComplex& b);

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator-(const BigComplex& a);
  friend BigComplex operator*(const BigComplex& a, const BigReal& b);
  friend BigComplex operator*(const BigReal& a, const BigComplex& b);
  friend BigComplex operator-(const BigComplex& a, const BigReal& b);
  friend BigComplex operator/(const BigComplex& a, long b);
  friend bool operator==(const BigComplex& a, const BigComplex& b);

  friend BigReal abs(const BigComplex& z);
  /// re^2 + im^2 without the square root.
  friend BigReal norm2(const BigComplex& z);

 private:
  BigReal re_;
  BigReal im_;
};

BigReal abs(const BigComplex& z);
BigReal norm2(const BigComplex& z);

}  // namespace rpm
