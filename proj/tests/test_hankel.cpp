#include "rpm/hankel.hpp"

#include <random>
#include <vector>

#include "doctest.h"
#include "rpm/riccati.hpp"
#include "test_util.hpp"

using rpm::BigReal;
using rpm::EvenPolynomial;
using rpm::PrecisionCtx;

namespace {

/// Reference determinant by cofactor expansion along the first row.
BigReal cofactor_det(const std::vector<BigReal>& m, int dim) {
  if (dim == 1) return m[0];
  BigReal acc(m[0].precision(), 0L);
  for (int c = 0; c < dim; ++c) {
    std::vector<BigReal> minor;
    minor.reserve(static_cast<size_t>((dim - 1) * (dim - 1)));
    for (int i = 1; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (j == c) continue;
        minor.push_back(m[static_cast<size_t>(i * dim + j)]);
      }
    }
    BigReal term = m[static_cast<size_t>(c)] * cofactor_det(minor, dim - 1);
    if (c % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

std::vector<BigReal> random_matrix(const PrecisionCtx& ctx, int dim,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  std::vector<BigReal> m;
  m.reserve(static_cast<size_t>(dim * dim));
  for (int i = 0; i < dim * dim; ++i) {
    m.push_back(ctx.real_from_double(entry(rng)));
  }
  return m;
}

}  // namespace

TEST_CASE("coefficient demand matches the farthest matrix entry") {
  CHECK(rpm::required_coefficients(2, 0) == 4);
  CHECK(rpm::required_coefficients(30, 1) == 61);
  CHECK_THROWS_AS(rpm::required_coefficients(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(rpm::required_coefficients(2, -1), std::invalid_argument);
}

TEST_CASE("matrix assembly follows the anti-diagonal layout") {
  PrecisionCtx ctx(256);
  std::vector<BigReal> f;
  for (long i = 0; i < 8; ++i) f.push_back(ctx.real(i));
  auto m = rpm::hankel_matrix(f, 3, 1);
  // entry(i, j) = f[2 + i + j]
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m[static_cast<size_t>(i * 3 + j)] == ctx.real(2 + i + j));
    }
  }
  CHECK_THROWS_AS(rpm::hankel_matrix(f, 4, 1), std::invalid_argument);
}

TEST_CASE("two by two determinant is the closed form") {
  PrecisionCtx ctx(256);
  std::vector<BigReal> f = {ctx.real(0), ctx.real(1) / 3, ctx.real("-0.07"),
                            ctx.real(1) / 63};
  auto det = rpm::hankel_det(f, 2, 0);
  BigReal expect = f[1] * f[3] - f[2] * f[2];
  CHECK(testutil::rel_close(det.value, expect, testutil::pow10(256, -70)));
  // (1/3)(1/63) = 1/189 > 0.07^2, so the determinant is positive
  CHECK(det.value.sign() > 0);
  CHECK(det.precision_bits == 256);
}

TEST_CASE("lu determinant agrees with cofactor expansion on random input") {
  PrecisionCtx ctx(256);
  std::mt19937_64 rng(77140u);
  std::uniform_int_distribution<int> dim_pick(1, 4);
  BigReal tol = testutil::pow10(256, -(ctx.decimal_digits() - 8));
  for (int trial = 0; trial < 100; ++trial) {
    int dim = dim_pick(rng);
    auto m = random_matrix(ctx, dim, rng);
    BigReal reference = cofactor_det(m, dim);
    auto got = rpm::determinant(m, dim);
    CHECK(testutil::rel_close(got.value, reference, tol));
  }
}

TEST_CASE("row swap flips the determinant sign") {
  PrecisionCtx ctx(256);
  std::mt19937_64 rng(4242u);
  auto m = random_matrix(ctx, 3, rng);
  auto swapped = m;
  for (int j = 0; j < 3; ++j) std::swap(swapped[j], swapped[3 + j]);
  auto d1 = rpm::determinant(m, 3);
  auto d2 = rpm::determinant(swapped, 3);
  CHECK(testutil::rel_close(d1.value, -d2.value, testutil::pow10(256, -70)));
}

TEST_CASE("scaling one row scales the determinant linearly") {
  PrecisionCtx ctx(256);
  std::mt19937_64 rng(999u);
  auto m = random_matrix(ctx, 3, rng);
  auto scaled = m;
  for (int j = 0; j < 3; ++j) scaled[6 + j] *= ctx.real(3);
  auto d1 = rpm::determinant(m, 3);
  auto d2 = rpm::determinant(scaled, 3);
  CHECK(testutil::rel_close(d2.value, d1.value * 3,
                            testutil::pow10(256, -70)));
}

TEST_CASE("singular matrix reports an exact zero with full loss") {
  PrecisionCtx ctx(256);
  std::vector<BigReal> m = {ctx.real(1), ctx.real(2), ctx.real(2),
                            ctx.real(4)};
  auto det = rpm::determinant(m, 2);
  CHECK(det.value.is_zero());
  CHECK(!det.log_abs.is_finite());
  CHECK(det.bits_lost == 256);
}

TEST_CASE("log magnitude tracks the raw value") {
  PrecisionCtx ctx(256);
  std::mt19937_64 rng(5150u);
  auto m = random_matrix(ctx, 4, rng);
  auto det = rpm::determinant(m, 4);
  REQUIRE(!det.value.is_zero());
  BigReal expect = log(abs(det.value));
  CHECK(testutil::rel_close(det.log_abs, expect, testutil::pow10(256, -60)));
}

TEST_CASE("cancellation estimate grows when a determinant nearly vanishes") {
  PrecisionCtx ctx(256);
  // nearly dependent rows
  BigReal eps = testutil::pow10(256, -30);
  std::vector<BigReal> m = {ctx.real(1), ctx.real(2), ctx.real(1) + eps,
                            ctx.real(2)};
  auto det = rpm::determinant(m, 2);
  CHECK(det.bits_lost > 90);
  std::vector<BigReal> well = {ctx.real(1), ctx.real(0), ctx.real(0),
                               ctx.real(1)};
  CHECK(rpm::determinant(well, 2).bits_lost < 4);
}

TEST_CASE("energy derivative of a determinant matches finite differences") {
  PrecisionCtx ctx(256);
  EvenPolynomial pot{{ctx.real(-1), ctx.real("0.5")}};
  BigReal e = ctx.real("0.8");
  const int dim = 5;
  const int offset = 1;
  const int count = static_cast<int>(rpm::required_coefficients(dim, offset));

  auto wd = rpm::symmetric_series_denergy(pot, e, 0, count);
  auto both = rpm::hankel_det_derivative(wd.f, wd.df, dim, offset);

  BigReal h = testutil::pow10(256, -25);
  auto up = rpm::symmetric_series(pot, e + h, 0, count);
  auto dn = rpm::symmetric_series(pot, e - h, 0, count);
  BigReal fd = (rpm::hankel_det(up, dim, offset).value -
                rpm::hankel_det(dn, dim, offset).value) /
               (2 * h);
  BigReal tol = testutil::pow10(256, -(ctx.decimal_digits() / 2));
  CHECK(testutil::rel_close(both.derivative, fd, tol));
  // value must equal the plain evaluation
  auto plain = rpm::hankel_det(wd.f, dim, offset);
  CHECK(both.det.value == plain.value);
}

TEST_CASE("derivative survives a matrix that is singular at working precision") {
  PrecisionCtx ctx(256);
  // f chosen so the 2x2 determinant f1 f3 - f2^2 is exactly zero, with
  // entries that eliminate exactly in binary so the LU sees a true zero
  std::vector<BigReal> f = {ctx.real(0), ctx.real(1), ctx.real(2),
                            ctx.real(4)};
  std::vector<BigReal> df = {ctx.real(0), ctx.real(1), ctx.real(1),
                             ctx.real(1)};
  auto both = rpm::hankel_det_derivative(f, df, 2, 0);
  CHECK(both.det.value.is_zero());
  // d/dp (f1 f3 - f2^2) = f1' f3 + f1 f3' - 2 f2 f2' = 4 + 1 - 4 = 1
  CHECK(testutil::rel_close(both.derivative, ctx.real(1),
                            testutil::pow10(256, -70)));
}

TEST_CASE("complex determinants reduce to real ones on real input") {
  PrecisionCtx ctx(256);
  std::mt19937_64 rng(31337u);
  auto m = random_matrix(ctx, 3, rng);
  std::vector<rpm::BigComplex> mc;
  mc.reserve(m.size());
  for (const auto& x : m) mc.emplace_back(x, ctx.real(0));
  auto dr = rpm::determinant(m, 3);
  auto dc = rpm::determinant(mc, 3);
  CHECK(dc.value.im().is_zero());
  // complex elimination divides through |pivot|^2, so rounding differs by ulps
  CHECK(testutil::rel_close(dc.value.re(), dr.value,
                            testutil::pow10(256, -70)));
}
