#include "rpm/hankel.hpp"

#include <stdexcept>
#include <utility>

namespace rpm {

namespace {

BigReal pivot_weight(const BigReal& x) { return abs(x); }
BigReal pivot_weight(const BigComplex& z) { return norm2(z); }

template <typename T>
T typed_zero(long prec);

template <>
BigReal typed_zero<BigReal>(long prec) {
  return BigReal(prec, 0L);
}

template <>
BigComplex typed_zero<BigComplex>(long prec) {
  return BigComplex(prec);
}

template <typename T>
struct LuFactors {
  std::vector<T> a;      // L (unit diagonal, below) and U (on and above) packed
  std::vector<int> piv;  // row swapped with row k at elimination step k
  int swap_parity = 1;
  bool singular = false;
  int dim = 0;
};

template <typename T>
LuFactors<T> lu_factor(std::vector<T> m, int dim) {
  LuFactors<T> lu;
  lu.a = std::move(m);
  lu.dim = dim;
  lu.piv.assign(static_cast<size_t>(dim), 0);
  auto at = [&](int i, int j) -> T& {
    return lu.a[static_cast<size_t>(i) * static_cast<size_t>(dim) +
                static_cast<size_t>(j)];
  };
  for (int k = 0; k < dim; ++k) {
    int best = k;
    BigReal best_w = pivot_weight(at(k, k));
    for (int i = k + 1; i < dim; ++i) {
      BigReal w = pivot_weight(at(i, k));
      if (best_w < w) {
        best_w = std::move(w);
        best = i;
      }
    }
    lu.piv[static_cast<size_t>(k)] = best;
    if (best != k) {
      for (int j = 0; j < dim; ++j) std::swap(at(k, j), at(best, j));
      lu.swap_parity = -lu.swap_parity;
    }
    if (at(k, k).is_zero()) {
      lu.singular = true;
      return lu;
    }
    for (int i = k + 1; i < dim; ++i) {
      T mult = at(i, k) / at(k, k);
      for (int j = k + 1; j < dim; ++j) at(i, j).sub_mul(mult, at(k, j));
      at(i, k) = std::move(mult);
    }
  }
  return lu;
}

template <typename T>
long working_precision(const std::vector<T>& m) {
  long prec = kMinPrecisionBits;
  for (const auto& e : m) {
    if (e.precision() > prec) prec = e.precision();
  }
  return prec;
}

/// Exponent of the product of row maxima, the crude upper bound the
/// cancellation estimate compares against. Returns false if a row is
/// entirely zero (determinant is zero anyway).
template <typename T>
bool row_bound_exponent(const std::vector<T>& m, int dim, long* out) {
  long sum = 0;
  for (int i = 0; i < dim; ++i) {
    BigReal row_max = abs(m[static_cast<size_t>(i) * static_cast<size_t>(dim)]);
    for (int j = 1; j < dim; ++j) {
      BigReal w = abs(m[static_cast<size_t>(i) * static_cast<size_t>(dim) +
                       static_cast<size_t>(j)]);
      if (row_max < w) row_max = std::move(w);
    }
    if (row_max.is_zero()) return false;
    sum += row_max.exponent2();
  }
  *out = sum;
  return true;
}

template <typename T>
DetResult<T> det_from_lu(const LuFactors<T>& lu, long prec, bool have_bound,
                         long bound_exp) {
  DetResult<T> out;
  out.precision_bits = prec;
  if (lu.singular) {
    out.value = typed_zero<T>(prec);
    out.log_abs = log(BigReal(prec, 0L));
    out.bits_lost = prec;
    return out;
  }
  const int dim = lu.dim;
  auto diag = [&](int k) -> const T& {
    return lu.a[static_cast<size_t>(k) * static_cast<size_t>(dim) +
                static_cast<size_t>(k)];
  };
  T prod = diag(0);
  BigReal lg = log(abs(diag(0)));
  for (int k = 1; k < dim; ++k) {
    prod = prod * diag(k);
    lg += log(abs(diag(k)));
  }
  if (lu.swap_parity < 0) prod = -prod;
  out.log_abs = std::move(lg);
  if (prod.is_zero() || !have_bound) {
    out.bits_lost = prec;
  } else {
    long lost = bound_exp - abs(prod).exponent2();
    out.bits_lost = lost > 0 ? lost : 0;
  }
  out.value = std::move(prod);
  return out;
}

/// Solve A x = b through the packed LU factors, overwriting b with x.
template <typename T>
void lu_solve(const LuFactors<T>& lu, std::vector<T>& b) {
  const int dim = lu.dim;
  auto at = [&](int i, int j) -> const T& {
    return lu.a[static_cast<size_t>(i) * static_cast<size_t>(dim) +
                static_cast<size_t>(j)];
  };
  for (int k = 0; k < dim; ++k) {
    int p = lu.piv[static_cast<size_t>(k)];
    if (p != k) std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(p)]);
  }
  for (int i = 1; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      b[static_cast<size_t>(i)].sub_mul(at(i, j), b[static_cast<size_t>(j)]);
    }
  }
  for (int i = dim - 1; i >= 0; --i) {
    for (int j = i + 1; j < dim; ++j) {
      b[static_cast<size_t>(i)].sub_mul(at(i, j), b[static_cast<size_t>(j)]);
    }
    b[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] / at(i, i);
  }
}

}  // namespace

long required_coefficients(int dim, int offset) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  if (offset < 0) throw std::invalid_argument("offset must be >= 0");
  return static_cast<long>(offset) + 2L * dim;
}

template <typename T>
std::vector<T> hankel_matrix(const std::vector<T>& f, int dim, int offset) {
  const long need = required_coefficients(dim, offset);
  if (static_cast<long>(f.size()) < need) {
    throw std::invalid_argument("series too short for requested matrix");
  }
  std::vector<T> m;
  m.reserve(static_cast<size_t>(dim) * static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      m.push_back(f[static_cast<size_t>(offset + 1 + i + j)]);
    }
  }
  return m;
}

template <typename T>
DetResult<T> determinant(std::vector<T> matrix, int dim) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  if (matrix.size() !=
      static_cast<size_t>(dim) * static_cast<size_t>(dim)) {
    throw std::invalid_argument("matrix storage does not match dimension");
  }
  const long prec = working_precision(matrix);
  long bound_exp = 0;
  const bool have_bound = row_bound_exponent(matrix, dim, &bound_exp);
  auto lu = lu_factor(std::move(matrix), dim);
  return det_from_lu(lu, prec, have_bound, bound_exp);
}

template <typename T>
DetResult<T> hankel_det(const std::vector<T>& f, int dim, int offset) {
  return determinant(hankel_matrix(f, dim, offset), dim);
}

template <typename T>
DetWithDerivative<T> hankel_det_derivative(const std::vector<T>& f,
                                           const std::vector<T>& df, int dim,
                                           int offset) {
  if (df.size() < f.size()) {
    throw std::invalid_argument("derivative series shorter than series");
  }
  std::vector<T> a = hankel_matrix(f, dim, offset);
  std::vector<T> da = hankel_matrix(df, dim, offset);
  const long prec = working_precision(a);
  long bound_exp = 0;
  const bool have_bound = row_bound_exponent(a, dim, &bound_exp);
  auto lu = lu_factor(a, dim);

  DetWithDerivative<T> out;
  out.det = det_from_lu(lu, prec, have_bound, bound_exp);

  if (!lu.singular) {
    // Jacobi's formula: det' = det * tr(A^-1 A').
    T trace = typed_zero<T>(prec);
    std::vector<T> col(static_cast<size_t>(dim), trace);
    for (int c = 0; c < dim; ++c) {
      for (int i = 0; i < dim; ++i) {
        col[static_cast<size_t>(i)] =
            da[static_cast<size_t>(i) * static_cast<size_t>(dim) +
               static_cast<size_t>(c)];
      }
      lu_solve(lu, col);
      trace += col[static_cast<size_t>(c)];
    }
    out.derivative = out.det.value * trace;
    return out;
  }

  // Singular at working precision: sum of determinants with one column of A
  // swapped for the matching column of A'. Each term stays finite at a root.
  T deriv = typed_zero<T>(prec);
  for (int c = 0; c < dim; ++c) {
    std::vector<T> m = a;
    for (int i = 0; i < dim; ++i) {
      m[static_cast<size_t>(i) * static_cast<size_t>(dim) +
        static_cast<size_t>(c)] =
          da[static_cast<size_t>(i) * static_cast<size_t>(dim) +
             static_cast<size_t>(c)];
    }
    deriv += determinant(std::move(m), dim).value;
  }
  out.derivative = std::move(deriv);
  return out;
}

template std::vector<BigReal> hankel_matrix<BigReal>(
    const std::vector<BigReal>&, int, int);
template std::vector<BigComplex> hankel_matrix<BigComplex>(
    const std::vector<BigComplex>&, int, int);
template DetResult<BigReal> determinant<BigReal>(std::vector<BigReal>, int);
template DetResult<BigComplex> determinant<BigComplex>(std::vector<BigComplex>,
                                                       int);
template DetResult<BigReal> hankel_det<BigReal>(const std::vector<BigReal>&,
                                                int, int);
template DetResult<BigComplex> hankel_det<BigComplex>(
    const std::vector<BigComplex>&, int, int);
template DetWithDerivative<BigReal> hankel_det_derivative<BigReal>(
    const std::vector<BigReal>&, const std::vector<BigReal>&, int, int);
template DetWithDerivative<BigComplex> hankel_det_derivative<BigComplex>(
    const std::vector<BigComplex>&, const std::vector<BigComplex>&, int, int);

}  // namespace rpm
