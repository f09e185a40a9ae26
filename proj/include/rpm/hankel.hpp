#pragma once

#include <vector>

#include "rpm/numerics.hpp"

namespace rpm {

/// Number of series coefficients f_0..f_{n-1} needed to fill the dim x dim
/// Hankel matrix at the given offset: the largest entry index is
/// offset + 2*dim - 1.
long required_coefficients(int dim, int offset);

/// Row-major dim x dim matrix with entry(i, j) = f[offset + 1 + i + j].
template <typename T>
std::vector<T> hankel_matrix(const std::vector<T>& f, int dim, int offset);

/// Determinant plus the diagnostics the adaptive-precision loop feeds on.
template <typename T>
struct DetResult {
  T value;
  /// Natural log of |value|; -inf when the determinant is exactly zero at
  /// working precision.
  BigReal log_abs;
  /// Working precision the evaluation ran at.
  long precision_bits = 0;
  /// Cancellation estimate: exponent of the row-max product bound minus the
  /// exponent of the result, clamped at zero. Equals precision_bits when the
  /// determinant vanished.
  long bits_lost = 0;
};

/// LU factorization with partial pivoting; a zero pivot column means the
/// matrix is singular at working precision and the value comes back exactly
/// zero. The input is consumed as scratch space.
template <typename T>
DetResult<T> determinant(std::vector<T> matrix, int dim);

template <typename T>
DetResult<T> hankel_det(const std::vector<T>& f, int dim, int offset);

template <typename T>
struct DetWithDerivative {
  DetResult<T> det;
  /// d(det)/dp for the parameter behind df.
  T derivative;
};

/// Determinant and its parameter derivative in one pass. The derivative uses
/// det' = det * tr(A^-1 A') through the shared LU factors; when the matrix is
/// singular at working precision it falls back to the column-replacement sum
/// det' = sum_j det(A with column j replaced by A' column j), which stays
/// finite at the root. df must hold the derivatives of the same coefficient
/// range as f.
template <typename T>
DetWithDerivative<T> hankel_det_derivative(const std::vector<T>& f,
                                           const std::vector<T>& df, int dim,
                                           int offset);

}  // namespace rpm
