#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "smm/fxp.hpp"

using namespace smm;

TEST_CASE("construction validates the declared range") {
  CHECK(FxpScalar(7, 4).value == 7);
  CHECK(FxpScalar(-8, 4).value == -8);
  CHECK_THROWS_AS(FxpScalar(8, 4), OverflowError);
  CHECK_THROWS_AS(FxpScalar(-9, 4), OverflowError);

  CHECK(FxpScalar(15, 4, false).value == 15);
  CHECK_THROWS_AS(FxpScalar(16, 4, false), OverflowError);
  CHECK_THROWS_AS(FxpScalar(-1, 4, false), OverflowError);

  CHECK_THROWS_AS(FxpScalar(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(FxpScalar(0, kMaxWidth + 1), std::invalid_argument);
  CHECK(FxpScalar(0, kMaxWidth).width == kMaxWidth);
}

TEST_CASE("representable range endpoints") {
  CHECK(fxp_min_value(8, true) == -128);
  CHECK(fxp_max_value(8, true) == 127);
  CHECK(fxp_min_value(8, false) == 0);
  CHECK(fxp_max_value(8, false) == 255);
  CHECK(fxp_max_value(1, false) == 1);
  CHECK(fxp_min_value(1, true) == -1);
}

TEST_CASE("addition widens by one bit over the wider operand") {
  const FxpScalar s = fxp_add(FxpScalar(3, 4), FxpScalar(-2, 4));
  CHECK(s.value == 1);
  CHECK(s.width == 5);
  CHECK(s.is_signed);

  const FxpScalar z = fxp_add(FxpScalar(0, 8), FxpScalar(0, 8));
  CHECK(z.value == 0);
  CHECK(z.width == 9);

  const FxpScalar big = fxp_add(FxpScalar(127, 8), FxpScalar(127, 8));
  CHECK(big.value == 254);
  CHECK(big.width == 9);

  const FxpScalar mixed = fxp_add(FxpScalar(100, 8), FxpScalar(3, 3));
  CHECK(mixed.width == 9);

  const FxpScalar u = fxp_add(FxpScalar(200, 8, false), FxpScalar(100, 8, false));
  CHECK(u.value == 300);
  CHECK(u.width == 9);
  CHECK_FALSE(u.is_signed);

  CHECK_THROWS_AS(fxp_add(FxpScalar(1, 4), FxpScalar(1, 4, false)),
                  std::invalid_argument);
}

TEST_CASE("subtraction is signed-only and widens like addition") {
  const FxpScalar d = fxp_sub(FxpScalar(-8, 4), FxpScalar(7, 4));
  CHECK(d.value == -15);
  CHECK(d.width == 5);
  CHECK_THROWS_AS(fxp_sub(FxpScalar(1, 4, false), FxpScalar(1, 4, false)),
                  std::invalid_argument);
}

TEST_CASE("multiplication adds the operand widths") {
  const FxpScalar x = fxp_mul(FxpScalar(1, 8), FxpScalar(93, 8));
  CHECK(x.value == 93);
  CHECK(x.width == 16);

  const FxpScalar y = fxp_mul(FxpScalar(-5, 4), FxpScalar(7, 4));
  CHECK(y.value == -35);
  CHECK(y.width == 8);

  const FxpScalar z = fxp_mul(FxpScalar(0, 6), FxpScalar(-32, 6));
  CHECK(z.value == 0);
  CHECK(z.width == 12);

  CHECK_THROWS_AS(fxp_mul(FxpScalar(1, 32), FxpScalar(1, 31)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fxp_mul(FxpScalar(1, 4), FxpScalar(1, 4, false)),
                  std::invalid_argument);
}

TEST_CASE("promotion keeps the value and refuses to narrow") {
  const FxpScalar p = fxp_promote(FxpScalar(-3, 4), 9);
  CHECK(p.value == -3);
  CHECK(p.width == 9);
  CHECK_THROWS_AS(fxp_promote(FxpScalar(0, 8), 7), std::invalid_argument);
}

TEST_CASE("unsigned values become signed one bit wider") {
  const FxpScalar s = fxp_to_signed(FxpScalar(255, 8, false));
  CHECK(s.value == 255);
  CHECK(s.width == 9);
  CHECK(s.is_signed);
  const FxpScalar already = fxp_to_signed(FxpScalar(-4, 4));
  CHECK(already.width == 4);
}

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(48) == 6);
  CHECK(ceil_log2(1024) == 10);
  CHECK_THROWS_AS(ceil_log2(0), std::invalid_argument);
}

TEST_CASE("arithmetic results always fit their computed widths") {
  // The constructor re-validates every result, so surviving this loop is the
  // property; widths 2..18 cover every datapath entry width in the project.
  std::mt19937_64 eng(12345);
  for (int iter = 0; iter < 20000; ++iter) {
    const int wa = 2 + int(eng() % 17);
    const int wb = 2 + int(eng() % 17);
    const bool sign = (eng() & 1) != 0;
    const auto draw = [&eng](int w, bool s) {
      const int64_t lo = fxp_min_value(w, s);
      const int64_t hi = fxp_max_value(w, s);
      return FxpScalar(lo + int64_t(eng() % uint64_t(hi - lo + 1)), w, s);
    };
    const FxpScalar a = draw(wa, sign);
    const FxpScalar b = draw(wb, sign);
    const FxpScalar sum = fxp_add(a, b);
    CHECK(sum.width == std::max(wa, wb) + 1);
    const FxpScalar prod = fxp_mul(a, b);
    CHECK(prod.width == wa + wb);
    if (sign) {
      CHECK(fxp_sub(a, b).width == std::max(wa, wb) + 1);
    }
  }
}

TEST_CASE("a chain of r additions grows the width by exactly r") {
  FxpScalar acc(1, 8);
  for (int i = 0; i < 5; ++i) acc = fxp_add(acc, FxpScalar(1, 8));
  CHECK(acc.width == 13);
  CHECK(acc.value == 6);
}

TEST_CASE("range checks are counted, not compiled away") {
  const uint64_t before = fxp_checks_performed();
  (void)fxp_add(FxpScalar(1, 4), FxpScalar(1, 4));
  CHECK(fxp_checks_performed() > before);
  const uint64_t mid = fxp_checks_performed();
  CHECK_THROWS_AS(fxp_check_range(9, -8, 7, "test register"),
                  OverflowError);
  CHECK(fxp_checks_performed() == mid + 1);
  fxp_check_range(7, -8, 7, "test register");
  CHECK(fxp_checks_performed() == mid + 2);
}
