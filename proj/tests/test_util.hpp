#pragma once

#include "rpm/numerics.hpp"

namespace testutil {

inline rpm::BigReal pow10(long prec, long k) {
  rpm::BigReal r(prec, 1L);
  rpm::BigReal ten(prec, 10L);
  long n = k < 0 ? -k : k;
  for (long i = 0; i < n; ++i) r *= ten;
  if (k < 0) return rpm::BigReal(prec, 1L) / r;
  return r;
}

/// |a - b| <= tol * max(|a|, |b|), with an absolute fallback when both sides
/// are tiny.
inline bool rel_close(const rpm::BigReal& a, const rpm::BigReal& b,
                      const rpm::BigReal& tol) {
  rpm::BigReal scale = max(abs(a), abs(b));
  if (scale.is_zero()) return true;
  return abs(a - b) <= tol * scale;
}

}  // namespace testutil
