#include "rpm/numerics.hpp"

#include <string>

#include "doctest.h"
#include "test_util.hpp"

using rpm::BigComplex;
using rpm::BigReal;
using rpm::PrecisionCtx;
using rpm::truncate_decimal;

TEST_CASE("precision context enforces the floor and reports digit capacity") {
  CHECK_THROWS_AS(rpm::with_precision(191), std::invalid_argument);
  CHECK_THROWS_AS(rpm::with_precision(0), std::invalid_argument);
  CHECK(rpm::with_precision(192).decimal_digits() == 57);
  CHECK(rpm::with_precision(512).decimal_digits() == 154);
  CHECK(rpm::with_precision(256).decimal_digits() == 77);
}

TEST_CASE("decimal parsing round-trips through to_decimal exactly") {
  PrecisionCtx ctx(256);
  const char* samples[] = {
      "1",
      "-0.5",
      "3.14159265358979323846264338327950288419716939937510582097494",
      "-43.77931656698899598232218728840475695571",
      "1e-30",
      "123456789.000000000000000000000001",
  };
  for (const char* s : samples) {
    BigReal x = ctx.real(s);
    BigReal y = ctx.real(x.to_decimal());
    CHECK(x == y);
  }
  BigReal r = sqrt(ctx.real(2));
  CHECK(ctx.real(r.to_decimal()) == r);
}

TEST_CASE("invalid decimal strings are rejected") {
  PrecisionCtx ctx(256);
  CHECK_THROWS_AS(ctx.real("not-a-number"), std::invalid_argument);
  CHECK_THROWS_AS(ctx.real("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(ctx.real(""), std::invalid_argument);
}

TEST_CASE("truncation keeps exactly the requested digits and never rounds") {
  PrecisionCtx ctx(256);
  CHECK(truncate_decimal(ctx.real(1), 5) == "1.0000");
  CHECK(truncate_decimal(ctx.real("1.99999999999"), 5) == "1.9999");
  CHECK(truncate_decimal(ctx.real("-1.99999999999"), 5) == "-1.9999");
  CHECK(truncate_decimal(
            ctx.real("0.00669328087580013026927187508131824112295099"), 40) ==
        "0.006693280875800130269271875081318241122950");
  CHECK(truncate_decimal(
            ctx.real("-43.779316566988995982322187288404756955719"), 40) ==
        "-43.77931656698899598232218728840475695571");
}

TEST_CASE("truncation switches to scientific form past six orders") {
  PrecisionCtx ctx(256);
  CHECK(truncate_decimal(ctx.real("1234567.89"), 4) == "1234000");
  CHECK(truncate_decimal(ctx.real("12345678.9"), 4) == "1.234e7");
  CHECK(truncate_decimal(ctx.real("0.000001234"), 4) == "0.000001234");
  CHECK(truncate_decimal(ctx.real("0.0000001234"), 4) == "1.234e-7");
  CHECK(truncate_decimal(ctx.real("-9.87654e12"), 3) == "-9.87e12");
  CHECK(truncate_decimal(ctx.real(0), 4) == "0.000");
  CHECK(truncate_decimal(ctx.real(1000000), 4) == "1000000");
}

TEST_CASE("mixed-precision arithmetic widens to the larger operand") {
  BigReal narrow(192, 3L);
  BigReal wide(512, 7L);
  CHECK((narrow * wide).precision() == 512);
  CHECK((wide - narrow).precision() == 512);
  CHECK(narrow.with_precision(512).precision() == 512);
  // widening is exact
  CHECK(narrow.with_precision(512) == narrow);
}

TEST_CASE("fused accumulate matches the plain product within one rounding") {
  PrecisionCtx ctx(256);
  BigReal a = ctx.real("1.3") / 7;
  BigReal b = sqrt(ctx.real(3));
  BigReal acc = ctx.real("0.25");
  BigReal expect = acc + a * b;
  acc.add_mul(a, b);
  CHECK(abs(acc - expect) <= ulp(expect) * 2);
  BigReal acc2 = ctx.real("0.25");
  BigReal expect2 = acc2 - a * b;
  acc2.sub_mul(a, b);
  CHECK(abs(acc2 - expect2) <= ulp(expect2) * 2);
}

TEST_CASE("ulp scales with the exponent") {
  PrecisionCtx ctx(256);
  BigReal one = ctx.real(1);
  BigReal big = ctx.real("1e40");
  CHECK(ulp(one) < ulp(big));
  CHECK(ulp(one) > ctx.real(0));
  // adding half an ulp to 1 is absorbed
  CHECK(one + rpm::ldexp2(ulp(one), -2) == one);
}

TEST_CASE("sign, comparisons and exponent behave") {
  PrecisionCtx ctx(256);
  CHECK(ctx.real(-3).sign() == -1);
  CHECK(ctx.real(0).sign() == 0);
  CHECK(ctx.real(5).sign() == 1);
  CHECK(ctx.real(8).exponent2() == 4);  // 8 = 0.5 * 2^4
  CHECK(less_abs(ctx.real(-2), ctx.real(3)));
  CHECK(!less_abs(ctx.real(-4), ctx.real(3)));
  CHECK(max(ctx.real(2), ctx.real(-5)) == ctx.real(2));
  CHECK(min(ctx.real(2), ctx.real(-5)) == ctx.real(-5));
}

TEST_CASE("complex product against its conjugate gives the squared modulus") {
  PrecisionCtx ctx(256);
  BigComplex z(ctx.real("1.25"), ctx.real("-0.75"));
  BigComplex prod = z * z.conj();
  BigReal expect = norm2(z);
  CHECK(prod.im().is_zero());
  CHECK(abs(prod.re() - expect) <= ulp(expect) * 4);
}

TEST_CASE("complex division undoes multiplication") {
  PrecisionCtx ctx(256);
  BigComplex a(ctx.real("0.3"), ctx.real("1.7"));
  BigComplex b(ctx.real("-2.1"), ctx.real("0.4"));
  BigComplex q = (a * b) / b;
  BigReal tol = testutil::pow10(256, -70);
  CHECK(testutil::rel_close(q.re(), a.re(), tol));
  CHECK(testutil::rel_close(q.im(), a.im(), tol));
}

TEST_CASE("complex fused accumulate matches expanded arithmetic") {
  PrecisionCtx ctx(256);
  BigComplex a(ctx.real("0.5"), ctx.real("0.25"));
  BigComplex b(ctx.real("1.5"), ctx.real("-2.0"));
  BigComplex acc(ctx.real("1"), ctx.real("1"));
  BigComplex expect = acc + a * b;
  acc.add_mul(a, b);
  BigReal tol = testutil::pow10(256, -70);
  CHECK(testutil::rel_close(acc.re(), expect.re(), tol));
  CHECK(testutil::rel_close(acc.im(), expect.im(), tol));
}
