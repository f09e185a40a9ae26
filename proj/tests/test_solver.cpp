#include "rpm/solver.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "golden_tables.hpp"
#include "rpm/rootfind.hpp"
#include "test_util.hpp"

using rpm::BigReal;
using rpm::DetResult;
using rpm::EvenPolynomial;
using rpm::PrecisionCtx;
using rpm::SolveConfig;

namespace {

DetResult<BigReal> det_of(long bits, long num, long den) {
  DetResult<BigReal> d;
  d.value = BigReal(bits, num) / BigReal(bits, den);
  d.log_abs = d.value.is_zero() ? BigReal(bits, 0L) : log(abs(d.value));
  d.precision_bits = bits;
  return d;
}

}  // namespace

TEST_CASE("escalate_precision accepts an immediately stable evaluation") {
  auto eval = [](long bits) { return det_of(bits, 355L, 113L); };
  auto r = rpm::escalate_precision(eval, 256);
  CHECK(r.trusted);
  CHECK(r.precision_used == 320);  // the higher member of the first pair
  CHECK(r.det.value > BigReal(256, 3L));
}

TEST_CASE("escalate_precision doubles past a sign flip at low precision") {
  // Below 300 bits the evaluation reports the wrong sign, so the first
  // checked pair (256, 320) disagrees and forces a doubling.
  auto eval = [](long bits) {
    return bits < 300 ? det_of(bits, -1L, 1L) : det_of(bits, 1L, 1L);
  };
  auto r = rpm::escalate_precision(eval, 256);
  CHECK(r.trusted);
  CHECK(r.precision_used >= 512);
  CHECK(r.det.value.sign() > 0);
}

TEST_CASE("escalate_precision treats exact zero at both precisions as stable") {
  auto eval = [](long bits) { return det_of(bits, 0L, 1L); };
  auto r = rpm::escalate_precision(eval, 256);
  CHECK(r.trusted);
  CHECK(r.det.value.is_zero());
}

TEST_CASE("escalate_precision gives up at the cap when nothing agrees") {
  // Sign alternates with the 64-bit rung, so no pair ever agrees.
  auto eval = [](long bits) {
    return det_of(bits, (bits / 64) % 2 == 0 ? 1L : -1L, 1L);
  };
  auto r = rpm::escalate_precision(eval, 256, 1024);
  CHECK(!r.trusted);
}

TEST_CASE("fit_log_linear recovers a clean exponential decay") {
  PrecisionCtx ctx(256);
  std::vector<std::pair<int, BigReal>> widths;
  // width(D) = 3 * 10^(-2D): rate = 2 ln 10, amplitude 3.
  for (int dim = 4; dim <= 14; ++dim) {
    widths.emplace_back(dim, ctx.real(3L) * testutil::pow10(256, -2 * dim));
  }
  auto fit = rpm::fit_log_linear(widths, 4, 14);
  REQUIRE(fit.valid);
  CHECK(fit.rate == doctest::Approx(2 * 2.302585092994046).epsilon(1e-9));
  CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("fit_log_linear refuses ranges with fewer than three points") {
  PrecisionCtx ctx(256);
  std::vector<std::pair<int, BigReal>> widths;
  widths.emplace_back(4, ctx.real(1L));
  widths.emplace_back(5, ctx.real(1L) / 10L);
  auto fit = rpm::fit_log_linear(widths, 4, 5);
  CHECK(!fit.valid);
}

TEST_CASE("trust-region Newton solves a smooth 2x2 system") {
  PrecisionCtx ctx(512);
  // x^2 + y^2 = 4, x = y  ->  x = y = sqrt(2).
  rpm::Fn2d fn = [&](const BigReal& x, const BigReal& y) {
    rpm::Eval2d e;
    e.r1 = x * x + y * y - 4L;
    e.j11 = x * 2L;
    e.j12 = y * 2L;
    e.r2 = x - y;
    e.j21 = BigReal(512, 1L);
    e.j22 = BigReal(512, -1L);
    return e;
  };
  auto r = rpm::newton_2d_tr(fn, ctx.real(2L), ctx.real(1L),
                             testutil::pow10(512, -100), 100);
  REQUIRE(r.converged);
  CHECK(!r.oscillatory);
  BigReal root = sqrt(ctx.real(2L));
  CHECK(testutil::rel_close(r.x, root, testutil::pow10(512, -90)));
  CHECK(testutil::rel_close(r.y, root, testutil::pow10(512, -90)));
}

TEST_CASE("trust-region Newton flags a genuine two-cycle as oscillatory") {
  PrecisionCtx ctx(512);
  // x^3 - 2x + 2 cycles 0 <-> 1 under Newton; the second equation just
  // pins y. The revisit rule should fire and report the orbit centroid.
  rpm::Fn2d fn = [&](const BigReal& x, const BigReal& y) {
    rpm::Eval2d e;
    e.r1 = x * x * x - x * 2L + 2L;
    e.j11 = x * x * 3L - 2L;
    e.j12 = BigReal(512, 0L);
    e.r2 = y;
    e.j21 = BigReal(512, 0L);
    e.j22 = BigReal(512, 1L);
    return e;
  };
  auto r = rpm::newton_2d_tr(fn, ctx.real(0L), ctx.real(1L),
                             testutil::pow10(512, -80), 60);
  CHECK(!r.converged);
  REQUIRE(r.oscillatory);
  // Centroid of an orbit alternating between x = 0 and x = 1.
  CHECK(testutil::rel_close(r.x, ctx.real(1L) / 2L, ctx.real(1L) / 4L));
}

TEST_CASE("harmonic oscillator bounds collapse onto the exact level") {
  EvenPolynomial pot{{BigReal(320, 1L)}};  // V = x^2
  SolveConfig cfg;
  cfg.dim_min = 2;
  cfg.dim_max = 7;
  cfg.initial_bits = 256;
  cfg.target_digits = 30;
  auto rep = rpm::eigenvalue_bounds(pot, 0, 0, cfg);
  REQUIRE(rep.converged);
  // Lowest even level of -psi'' + x^2 psi = E psi.
  CHECK(rep.converged_value.substr(0, 8) == "1.000000");
  auto rep1 = rpm::eigenvalue_bounds(pot, 1, 0, cfg);
  REQUIRE(rep1.converged);
  CHECK(rep1.converged_value.substr(0, 8) == "3.000000");
}

TEST_CASE("deep-well bounds reproduce published head rows and shrink") {
  PrecisionCtx ctx(320);
  EvenPolynomial pot{{ctx.real(-20L), ctx.real(2L)}};
  SolveConfig cfg;
  cfg.dim_min = 2;
  cfg.dim_max = 10;
  cfg.initial_bits = 256;
  auto rep = rpm::eigenvalue_bounds(pot, 0, 0, cfg);
  CHECK(rep.order_violations == 0);

  int checked = 0;
  for (const auto& row : golden::deepwell_e0) {
    if (row.D > cfg.dim_max) break;
    auto lo = rep.lower.entries.find(row.D);
    auto hi = rep.upper.entries.find(row.D);
    REQUIRE(lo != rep.lower.entries.end());
    REQUIRE(hi != rep.upper.entries.end());
    CHECK(rpm::round_decimal(lo->second.value, 40) == row.d0);
    CHECK(rpm::round_decimal(hi->second.value, 40) == row.d1);
    ++checked;
  }
  CHECK(checked >= 5);

  // Interval widths shrink monotonically over the published range.
  REQUIRE(rep.widths.size() >= 4);
  for (size_t i = 1; i < rep.widths.size(); ++i) {
    CHECK(rep.widths[i].second < rep.widths[i - 1].second);
  }
}

TEST_CASE("critical-parameter head rows match the published values") {
  SolveConfig cfg;
  cfg.dim_min = 2;
  cfg.dim_max = 6;
  cfg.initial_bits = 256;
  auto reports = rpm::critical_parameters(0, cfg);
  REQUIRE(reports.size() == 1);
  const auto& rep = reports[0];
  CHECK(rep.order_violations == 0);
  int checked = 0;
  for (const auto& row : golden::critical_k0) {
    if (row.D > cfg.dim_max) break;
    // Critical pairing: d = 0 bounds from above, d = 1 from below.
    auto up = rep.upper.entries.find(row.D);
    auto lo = rep.lower.entries.find(row.D);
    if (up != rep.upper.entries.end()) {
      CHECK(rpm::round_decimal(up->second.value, 40) == row.d0);
      ++checked;
    }
    if (lo != rep.lower.entries.end()) {
      CHECK(rpm::round_decimal(lo->second.value, 40) == row.d1);
      ++checked;
    }
  }
  CHECK(checked >= 8);
}

TEST_CASE("shifted-origin streams track the published rows") {
  PrecisionCtx ctx(320);
  EvenPolynomial pot{{ctx.real(-20L), ctx.real(2L)}};
  SolveConfig cfg;
  cfg.dim_min = 3;
  cfg.dim_max = 5;  // d=1 stream ends at 4 under the coefficient budget
  cfg.initial_bits = 256;
  auto rows = rpm::nonsym_eigenvalue(pot, cfg);

  auto find = [&](int dim, int d) -> const rpm::NonsymEntry* {
    for (const auto& e : rows) {
      if (e.dim == dim && e.offset == d) return &e;
    }
    return nullptr;
  };
  auto expect = [&](int dim, int d, const golden::PairRow& row) {
    const auto* e = find(dim, d);
    REQUIRE(e != nullptr);
    CHECK(e->converged);
    CHECK(rpm::round_decimal(e->energy, 40) == row.first);
    CHECK(rpm::round_decimal(e->f0, 40) == row.second);
  };
  expect(3, 1, golden::nonsym_d1[0]);
  expect(4, 1, golden::nonsym_d1[1]);
  expect(3, 0, golden::nonsym_d0[0]);
  expect(4, 0, golden::nonsym_d0[1]);
  expect(5, 0, golden::nonsym_d0[2]);
  CHECK(find(5, 1) == nullptr);  // beyond the d=1 stream's budget
}
