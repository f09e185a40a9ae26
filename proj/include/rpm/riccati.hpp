#pragma once

#include <vector>

#include "rpm/numerics.hpp"

namespace rpm {

/// Even polynomial potential V(x) = sum_j c[j-1] x^(2j), j = 1..degree/2.
/// The constant term is always zero; the leading coefficient must be
/// positive for a confining well (not enforced here, resonance runs flip it).
struct EvenPolynomial {
  std::vector<BigReal> coeffs;

  int half_degree() const { return static_cast<int>(coeffs.size()); }

  /// V(x) by Horner's rule in x^2.
  BigReal value(const BigReal& x) const;

  /// Coefficients converted to double for low-precision cross-checks.
  std::vector<double> as_double() const;
};

/// Coefficients f_0..f_{count-1} of the odd-series ansatz
///   f(x) = sum_n f_n x^(2n+1)
/// for the regularized logarithmic derivative at parity `parity` (0 even
/// states, 1 odd states). Defined by
///   f_0 = E / (2s+1),
///   (2n+2s+1) f_n = sum_{j=0}^{n-1} f_j f_{n-1-j} - V_n   (n >= 1),
/// with V_n = 0 past the polynomial degree. T is BigReal or BigComplex.
template <typename T>
std::vector<T> symmetric_series(const EvenPolynomial& pot, const T& energy,
                                int parity, int count);

template <typename T>
struct SeriesWithDerivative {
  std::vector<T> f;
  std::vector<T> df;
};

/// Series plus its derivative with respect to the energy, obtained by
/// differentiating the recurrence term by term.
template <typename T>
SeriesWithDerivative<T> symmetric_series_denergy(const EvenPolynomial& pot,
                                                 const T& energy, int parity,
                                                 int count);

/// Series plus its derivative with respect to potential coefficient
/// c[coeff_index] (0-based, multiplying x^(2(coeff_index+1))).
SeriesWithDerivative<BigReal> symmetric_series_dcoeff(
    const EvenPolynomial& pot, const BigReal& energy, int parity, int count,
    int coeff_index);

/// Taylor coefficients U_0..U_{2J} of V(x0 + y) about x0:
///   U_n = sum_j c[j-1] * C(2j, n) * x0^(2j-n).
/// U_1 vanishes when x0 is a stationary point of V.
std::vector<BigReal> shifted_potential(const EvenPolynomial& pot,
                                       const BigReal& x0);

/// Series about a shifted origin for states with no parity symmetry. With
/// f = -psi'/psi expanded as f(y) = sum f_n y^n, the Riccati equation gives
///   (n+1) f_{n+1} = sum_{j=0}^{n} f_j f_{n-j} - U_n + E * delta_{n0},
/// where U_n includes the constant U_0 = V(x0) and E stays in the original
/// energy scale. Both f_0 = f(x0) and E are free, so their derivative
/// arrays are carried along for two-dimensional Newton steps.
struct NonSymSeries {
  std::vector<BigReal> f;
  std::vector<BigReal> dE;
  std::vector<BigReal> df0;
};

NonSymSeries nonsym_series(const std::vector<BigReal>& shifted_pot,
                           const BigReal& energy, const BigReal& f0,
                           int count);

}  // namespace rpm
