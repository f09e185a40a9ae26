#include "rpm/rootfind.hpp"

#include <utility>

#include "doctest.h"
#include "test_util.hpp"

using rpm::BigComplex;
using rpm::BigReal;
using rpm::PrecisionCtx;
using rpm::SignLog;

namespace {

/// Probe for a plain function: sign and ln|value|.
rpm::RealProbe probe_of(std::function<BigReal(const BigReal&)> f) {
  return [f = std::move(f)](const BigReal& x) {
    BigReal v = f(x);
    SignLog s;
    s.sign = v.sign();
    s.log_abs = log(abs(v));
    return s;
  };
}

}  // namespace

TEST_CASE("scan finds the sign change of a simple quadratic") {
  PrecisionCtx ctx(256);
  auto probe = probe_of([&](const BigReal& x) { return x * x - 2; });
  std::vector<BigReal> grid;
  for (long i = 1; i <= 8; ++i) grid.push_back(ctx.real(i) / 4);
  auto scan = rpm::scan_real(probe, grid);
  REQUIRE(scan.sign_changes.size() == 1);
  CHECK(scan.sign_changes[0].lo < sqrt(ctx.real(2)));
  CHECK(scan.sign_changes[0].hi > sqrt(ctx.real(2)));
  CHECK(scan.dips.empty());
}

TEST_CASE("scan reports a dip for an even-multiplicity root") {
  PrecisionCtx ctx(256);
  auto probe = probe_of([&](const BigReal& x) {
    BigReal d = x - 1;
    return d * d + testutil::pow10(256, -60);
  });
  std::vector<BigReal> grid;
  for (long i = 0; i <= 20; ++i) grid.push_back(ctx.real(i) / 10);
  auto scan = rpm::scan_real(probe, grid);
  CHECK(scan.sign_changes.empty());
  REQUIRE(scan.dips.size() == 1);
  CHECK(scan.dips[0] == ctx.real(1));
}

TEST_CASE("scan flags an exact zero as a degenerate bracket") {
  PrecisionCtx ctx(256);
  auto probe = probe_of([&](const BigReal& x) { return x - 1; });
  std::vector<BigReal> grid = {ctx.real(0), ctx.real(1), ctx.real(2)};
  auto scan = rpm::scan_real(probe, grid);
  REQUIRE(!scan.sign_changes.empty());
  CHECK(scan.sign_changes[0].lo == scan.sign_changes[0].hi);
}

TEST_CASE("log grid covers the interval with exact endpoints") {
  PrecisionCtx ctx(256);
  auto g = rpm::log_grid(ctx.real("0.01"), ctx.real(100), 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == ctx.real("0.01"));
  CHECK(g.back() == ctx.real(100));
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1] < g[i]);
  // middle point of a symmetric decade span sits at 1
  CHECK(testutil::rel_close(g[4], ctx.real(1), testutil::pow10(256, -70)));
  CHECK_THROWS_AS(rpm::log_grid(ctx.real(0), ctx.real(1), 4),
                  std::invalid_argument);
}

TEST_CASE("refine drives a bracket to fifty digits") {
  PrecisionCtx ctx(256);
  auto probe = probe_of([&](const BigReal& x) { return x * x - 2; });
  BigReal tol = testutil::pow10(256, -50);
  auto r = rpm::refine_real(probe, {ctx.real(1), ctx.real(2)}, tol);
  REQUIRE(r.converged);
  CHECK(testutil::rel_close(r.root, sqrt(ctx.real(2)), tol * 10));
  CHECK(r.evaluations < 180);
}

TEST_CASE("refine respects its evaluation budget") {
  PrecisionCtx ctx(256);
  int calls = 0;
  rpm::RealProbe probe = [&](const BigReal& x) {
    ++calls;
    BigReal v = x * x - 2;
    return SignLog{v.sign(), log(abs(v))};
  };
  auto r = rpm::refine_real(probe, {ctx.real(1), ctx.real(2)},
                            testutil::pow10(256, -60), 12);
  CHECK(calls <= 12);
  CHECK(!r.converged);
}

TEST_CASE("refine rejects a bracket without a sign change") {
  PrecisionCtx ctx(256);
  auto probe = probe_of([&](const BigReal& x) { return x * x + 1; });
  CHECK_THROWS_AS(
      rpm::refine_real(probe, {ctx.real(1), ctx.real(2)},
                       testutil::pow10(256, -40)),
      std::invalid_argument);
}

TEST_CASE("refine handles huge magnitude swings through the log channel") {
  PrecisionCtx ctx(256);
  // f(x) = exp(400 (x - r)) - 1 has values spanning e^400 across [0, 2]
  BigReal root = ctx.real("1.25");
  auto probe = probe_of([&](const BigReal& x) {
    return exp((x - root) * 400) - 1;
  });
  BigReal tol = testutil::pow10(256, -45);
  auto r = rpm::refine_real(probe, {ctx.real(0), ctx.real(2)}, tol);
  REQUIRE(r.converged);
  CHECK(testutil::rel_close(r.root, root, tol * 10));
}

TEST_CASE("complex newton lands on the imaginary unit") {
  PrecisionCtx ctx(256);
  rpm::ComplexEval fn = [&](const BigComplex& z) {
    BigComplex one(ctx.real(1), ctx.real(0));
    return std::make_pair(z * z + one, z * ctx.real(2));
  };
  BigComplex start(ctx.real("0.2"), ctx.real("0.8"));
  auto r = rpm::newton_complex(fn, start, testutil::pow10(256, -50));
  REQUIRE(r.converged);
  BigReal tol = testutil::pow10(256, -45);
  CHECK(abs(r.root.re()) < tol);
  CHECK(testutil::rel_close(r.root.im(), ctx.real(1), tol));
}

TEST_CASE("complex newton falls back to differences when the slope lies") {
  PrecisionCtx ctx(256);
  // derivative reported as zero; the finite-difference fallback must carry it
  rpm::ComplexEval fn = [&](const BigComplex& z) {
    BigComplex one(ctx.real(1), ctx.real(0));
    return std::make_pair(z * z - one, BigComplex(ctx.real(0), ctx.real(0)));
  };
  BigComplex start(ctx.real("1.3"), ctx.real("0.1"));
  auto r = rpm::newton_complex(fn, start, testutil::pow10(256, -40), 200);
  REQUIRE(r.converged);
  CHECK(testutil::rel_close(r.root.re(), ctx.real(1),
                            testutil::pow10(256, -35)));
}

TEST_CASE("two dimensional newton solves a coupled pair") {
  PrecisionCtx ctx(256);
  rpm::Fn2d fn = [&](const BigReal& x, const BigReal& y) {
    rpm::Eval2d e;
    e.r1 = x * x + y * y - 4;
    e.r2 = x - y;
    e.j11 = 2 * x;
    e.j12 = 2 * y;
    e.j21 = ctx.real(1);
    e.j22 = ctx.real(-1);
    return e;
  };
  auto r = rpm::newton_2d(fn, ctx.real("1.5"), ctx.real("0.9"),
                          testutil::pow10(256, -50));
  REQUIRE(r.converged);
  CHECK(!r.oscillatory);
  BigReal tol = testutil::pow10(256, -45);
  CHECK(testutil::rel_close(r.x, sqrt(ctx.real(2)), tol));
  CHECK(testutil::rel_close(r.y, sqrt(ctx.real(2)), tol));
}

TEST_CASE("two dimensional newton reports a two cycle as oscillatory") {
  PrecisionCtx ctx(256);
  // synthetic map engineered to bounce between x = 0 and x = 1 forever:
  // the residual never improves, so the full step is taken each time
  rpm::Fn2d fn = [&](const BigReal& x, const BigReal& y) {
    rpm::Eval2d e;
    BigReal half = ctx.real(1) / 2;
    e.r1 = x < half ? ctx.real(1) : ctx.real(-1);
    e.r2 = y;
    e.j11 = ctx.real(-1);
    e.j12 = ctx.real(0);
    e.j21 = ctx.real(0);
    e.j22 = ctx.real(1);
    return e;
  };
  auto r = rpm::newton_2d(fn, ctx.real(0), ctx.real("0.125"),
                          testutil::pow10(256, -40), 40);
  CHECK(!r.converged);
  CHECK(r.oscillatory);
}
