#include "rpm/riccati.hpp"

#include <stdexcept>

namespace rpm {

namespace {

template <typename T>
T zero_like(long prec);

template <>
BigReal zero_like<BigReal>(long prec) {
  return BigReal(prec, 0L);
}

template <>
BigComplex zero_like<BigComplex>(long prec) {
  return BigComplex(prec);
}

template <typename T>
T one_like(long prec);

template <>
BigReal one_like<BigReal>(long prec) {
  return BigReal(prec, 1L);
}

template <>
BigComplex one_like<BigComplex>(long prec) {
  return BigComplex(BigReal(prec, 1L), BigReal(prec, 0L));
}

void check_parity(int parity) {
  if (parity != 0 && parity != 1) {
    throw std::invalid_argument("parity must be 0 or 1");
  }
}

void check_count(int count) {
  if (count < 1) throw std::invalid_argument("need at least one coefficient");
}

}  // namespace

BigReal EvenPolynomial::value(const BigReal& x) const {
  if (coeffs.empty()) return BigReal(x.precision(), 0L);
  BigReal x2 = x * x;
  BigReal acc = coeffs.back();
  for (int j = static_cast<int>(coeffs.size()) - 2; j >= 0; --j) {
    acc *= x2;
    acc += coeffs[static_cast<size_t>(j)];
  }
  return acc * x2;
}

std::vector<double> EvenPolynomial::as_double() const {
  std::vector<double> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(c.to_double());
  return out;
}

template <typename T>
std::vector<T> symmetric_series(const EvenPolynomial& pot, const T& energy,
                                int parity, int count) {
  check_parity(parity);
  check_count(count);
  const long prec = energy.precision();
  const int half_deg = pot.half_degree();

  std::vector<T> f;
  f.reserve(static_cast<size_t>(count));
  f.push_back(energy / static_cast<long>(2 * parity + 1));
  for (int n = 1; n < count; ++n) {
    T acc = zero_like<T>(prec);
    for (int j = 0; j < n; ++j) {
      acc.add_mul(f[static_cast<size_t>(j)], f[static_cast<size_t>(n - 1 - j)]);
    }
    if (n <= half_deg) acc = acc - pot.coeffs[static_cast<size_t>(n - 1)];
    f.push_back(acc / static_cast<long>(2 * n + 2 * parity + 1));
  }
  return f;
}

template <typename T>
SeriesWithDerivative<T> symmetric_series_denergy(const EvenPolynomial& pot,
                                                 const T& energy, int parity,
                                                 int count) {
  check_parity(parity);
  check_count(count);
  const long prec = energy.precision();
  const int half_deg = pot.half_degree();

  SeriesWithDerivative<T> out;
  out.f.reserve(static_cast<size_t>(count));
  out.df.reserve(static_cast<size_t>(count));
  out.f.push_back(energy / static_cast<long>(2 * parity + 1));
  out.df.push_back(one_like<T>(prec) / static_cast<long>(2 * parity + 1));

  for (int n = 1; n < count; ++n) {
    T acc = zero_like<T>(prec);
    T dacc = zero_like<T>(prec);
    for (int j = 0; j < n; ++j) {
      const auto& fj = out.f[static_cast<size_t>(j)];
      const auto& fk = out.f[static_cast<size_t>(n - 1 - j)];
      acc.add_mul(fj, fk);
      dacc.add_mul(out.df[static_cast<size_t>(j)], fk);
      dacc.add_mul(fj, out.df[static_cast<size_t>(n - 1 - j)]);
    }
    if (n <= half_deg) acc = acc - pot.coeffs[static_cast<size_t>(n - 1)];
    long div = 2 * n + 2 * parity + 1;
    out.f.push_back(acc / div);
    out.df.push_back(dacc / div);
  }
  return out;
}

SeriesWithDerivative<BigReal> symmetric_series_dcoeff(
    const EvenPolynomial& pot, const BigReal& energy, int parity, int count,
    int coeff_index) {
  check_parity(parity);
  check_count(count);
  if (coeff_index < 0 || coeff_index >= pot.half_degree()) {
    throw std::invalid_argument("coefficient index out of range");
  }
  const long prec = energy.precision();
  const int half_deg = pot.half_degree();
  const int dv_n = coeff_index + 1;  // dV_n/dc is 1 exactly at n = index+1

  SeriesWithDerivative<BigReal> out;
  out.f.reserve(static_cast<size_t>(count));
  out.df.reserve(static_cast<size_t>(count));
  out.f.push_back(energy / static_cast<long>(2 * parity + 1));
  out.df.emplace_back(prec, 0L);

  for (int n = 1; n < count; ++n) {
    BigReal acc(prec, 0L);
    BigReal dacc(prec, 0L);
    for (int j = 0; j < n; ++j) {
      const auto& fj = out.f[static_cast<size_t>(j)];
      const auto& fk = out.f[static_cast<size_t>(n - 1 - j)];
      acc.add_mul(fj, fk);
      dacc.add_mul(out.df[static_cast<size_t>(j)], fk);
      dacc.add_mul(fj, out.df[static_cast<size_t>(n - 1 - j)]);
    }
    if (n <= half_deg) acc -= pot.coeffs[static_cast<size_t>(n - 1)];
    if (n == dv_n) dacc -= BigReal(prec, 1L);
    long div = 2 * n + 2 * parity + 1;
    out.f.push_back(acc / div);
    out.df.push_back(dacc / div);
  }
  return out;
}

std::vector<BigReal> shifted_potential(const EvenPolynomial& pot,
                                       const BigReal& x0) {
  const int half_deg = pot.half_degree();
  if (2 * half_deg > 62) {
    throw std::invalid_argument("polynomial degree too large to shift");
  }
  long prec = x0.precision();
  for (const auto& c : pot.coeffs) {
    if (c.precision() > prec) prec = c.precision();
  }

  std::vector<BigReal> powers;  // x0^k for k = 0..2J
  powers.reserve(static_cast<size_t>(2 * half_deg + 1));
  powers.emplace_back(prec, 1L);
  for (int k = 1; k <= 2 * half_deg; ++k) powers.push_back(powers.back() * x0);

  std::vector<BigReal> shifted(static_cast<size_t>(2 * half_deg + 1),
                               BigReal(prec, 0L));
  for (int j = 1; j <= half_deg; ++j) {
    const int m = 2 * j;
    const BigReal& c = pot.coeffs[static_cast<size_t>(j - 1)];
    long binom = 1;
    for (int n = 0; n <= m; ++n) {
      shifted[static_cast<size_t>(n)].add_mul(
          c * binom, powers[static_cast<size_t>(m - n)]);
      if (n < m) binom = binom * (m - n) / (n + 1);
    }
  }
  return shifted;
}

NonSymSeries nonsym_series(const std::vector<BigReal>& shifted_pot,
                           const BigReal& energy, const BigReal& f0,
                           int count) {
  check_count(count);
  const long prec = energy.precision();
  const auto usize = static_cast<int>(shifted_pot.size());

  NonSymSeries out;
  out.f.reserve(static_cast<size_t>(count));
  out.dE.reserve(static_cast<size_t>(count));
  out.df0.reserve(static_cast<size_t>(count));
  out.f.push_back(f0);
  out.dE.emplace_back(prec, 0L);
  out.df0.emplace_back(prec, 1L);

  for (int n = 0; n + 1 < count; ++n) {
    BigReal acc(prec, 0L);
    BigReal daccE(prec, 0L);
    BigReal dacc0(prec, 0L);
    for (int j = 0; j <= n; ++j) {
      const auto& fj = out.f[static_cast<size_t>(j)];
      const auto& fk = out.f[static_cast<size_t>(n - j)];
      acc.add_mul(fj, fk);
      daccE.add_mul(out.dE[static_cast<size_t>(j)], fk);
      daccE.add_mul(fj, out.dE[static_cast<size_t>(n - j)]);
      dacc0.add_mul(out.df0[static_cast<size_t>(j)], fk);
      dacc0.add_mul(fj, out.df0[static_cast<size_t>(n - j)]);
    }
    if (n < usize) acc -= shifted_pot[static_cast<size_t>(n)];
    if (n == 0) {
      acc += energy;
      daccE += BigReal(prec, 1L);
    }
    long div = n + 1;
    out.f.push_back(acc / div);
    out.dE.push_back(daccE / div);
    out.df0.push_back(dacc0 / div);
  }
  return out;
}

template std::vector<BigReal> symmetric_series<BigReal>(const EvenPolynomial&,
                                                        const BigReal&, int,
                                                        int);
template std::vector<BigComplex> symmetric_series<BigComplex>(
    const EvenPolynomial&, const BigComplex&, int, int);
template SeriesWithDerivative<BigReal> symmetric_series_denergy<BigReal>(
    const EvenPolynomial&, const BigReal&, int, int);
template SeriesWithDerivative<BigComplex> symmetric_series_denergy<BigComplex>(
    const EvenPolynomial&, const BigComplex&, int, int);

}  // namespace rpm
