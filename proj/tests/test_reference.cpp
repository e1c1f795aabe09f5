#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "smm/matrix.hpp"
#include "smm/random.hpp"
#include "smm/reference.hpp"

using namespace smm;

namespace {

Matrix identity(int n, int width) {
  Matrix m(n, n, width);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

const Matrix kSmall = Matrix::from_values(2, 2, {1, 2, 3, 4}, 4);

}  // namespace

TEST_CASE("naive matmul on hand-checked inputs") {
  const Matrix c = matmul_naive(kSmall, kSmall);
  CHECK(c.value_at(0, 0) == 7);
  CHECK(c.value_at(0, 1) == 10);
  CHECK(c.value_at(1, 0) == 15);
  CHECK(c.value_at(1, 1) == 22);
  CHECK(c.elem_width == 4 + 4 + 1);

  const Matrix b = Matrix::from_values(2, 3, {5, -6, 7, -8, 9, 1}, 5);
  CHECK(same_values(matmul_naive(identity(2, 5), b), b));

  const Matrix zero(3, 2, 6);
  const Matrix az = matmul_naive(Matrix::from_values(2, 3, {1, 2, 3, 4, 5, 6}, 6), zero);
  for (const auto& e : az.elems) CHECK(e.value == 0);

  CHECK_THROWS_AS(matmul_naive(kSmall, Matrix(3, 2, 4)), std::invalid_argument);
}

TEST_CASE("blocked recursion matches naive") {
  CHECK(same_values(matmul_blocked(kSmall, kSmall, 0), matmul_naive(kSmall, kSmall)));
  CHECK(same_values(matmul_blocked(kSmall, kSmall, 1), matmul_naive(kSmall, kSmall)));

  std::mt19937_64 eng(99);
  const Matrix a = random_matrix(eng, 8, 8, 8, true);
  const Matrix b = random_matrix(eng, 8, 8, 8, true);
  const Matrix want = matmul_naive(a, b);
  for (int levels : {1, 2, 3}) {
    CHECK(same_values(matmul_blocked(a, b, levels), want));
  }
  CHECK_THROWS_AS(matmul_blocked(a, b, 4), std::invalid_argument);

  const Matrix rect_a = random_matrix(eng, 4, 8, 8, true);
  const Matrix rect_b = random_matrix(eng, 8, 12, 8, true);
  CHECK(same_values(matmul_blocked(rect_a, rect_b, 2), matmul_naive(rect_a, rect_b)));
}

TEST_CASE("strassen recursion matches naive on hand-checked input") {
  // Quadrants (1,2,3,4) squared: the child products are
  // (25, 7, -2, 8, 12, 6, -14) and recombine to [[7,10],[15,22]].
  const Matrix c = matmul_strassen(kSmall, kSmall, 1);
  CHECK(c.value_at(0, 0) == 7);
  CHECK(c.value_at(0, 1) == 10);
  CHECK(c.value_at(1, 0) == 15);
  CHECK(c.value_at(1, 1) == 22);
}

TEST_CASE("strassen recursion matches naive and counts leaf multiplications") {
  std::mt19937_64 eng(7);
  const Matrix a16 = random_matrix(eng, 16, 16, 8, true);
  const Matrix b16 = random_matrix(eng, 16, 16, 8, true);
  uint64_t mults = 0;
  CHECK(same_values(matmul_strassen(a16, b16, 1, &mults), matmul_naive(a16, b16)));
  CHECK(mults == 7 * 8 * 8 * 8);

  const Matrix a24 = random_matrix(eng, 24, 24, 8, true);
  const Matrix b24 = random_matrix(eng, 24, 24, 8, true);
  CHECK(same_values(matmul_strassen(a24, b24, 2, &mults), matmul_naive(a24, b24)));
  CHECK(mults == 49 * 6 * 6 * 6);  // 10584

  const Matrix ar = random_matrix(eng, 8, 16, 7, true);
  const Matrix br = random_matrix(eng, 16, 4, 7, true);
  CHECK(same_values(matmul_strassen(ar, br, 2, &mults), matmul_naive(ar, br)));
  CHECK(mults == 49 * 2 * 4 * 1);

  CHECK_THROWS_AS(matmul_strassen(a16, b16, 5), std::invalid_argument);
}

TEST_CASE("instrumented strassen counts follow 7^r (n/2^r)^3") {
  std::mt19937_64 eng(21);
  for (int n : {16, 24, 32}) {
    for (int r : {1, 2}) {
      const Matrix a = random_matrix(eng, n, n, 6, true);
      const Matrix b = random_matrix(eng, n, n, 6, true);
      uint64_t mults = 0;
      CHECK(same_values(matmul_strassen(a, b, r, &mults), matmul_naive(a, b)));
      uint64_t want = 1;
      for (int i = 0; i < r; ++i) want *= 7;
      const uint64_t half = uint64_t(n) >> r;
      CHECK(mults == want * half * half * half);
    }
  }
}

TEST_CASE("conventional operation counts") {
  CHECK(ops_conventional(1).mults == 1);
  CHECK(ops_conventional(1).adds == 0);
  const OpCount c16 = ops_conventional(16);
  CHECK(c16.mults == 4096);
  CHECK(c16.adds == 3840);
  CHECK(c16.total == 7936);
  CHECK(ops_conventional(15).total == 6525);
  CHECK_THROWS_AS(ops_conventional(0), std::invalid_argument);
}

TEST_CASE("one-level strassen operation counts") {
  const OpCount s16 = ops_strassen_1(16);
  CHECK(s16.mults == 3584);
  CHECK(s16.adds == 3136 + 1152);
  CHECK(s16.total == 7872);
  CHECK(s16.total < ops_conventional(16).total);

  CHECK(ops_strassen_1(14).total == 5341);
  CHECK(ops_conventional(14).total == 5292);
  CHECK(ops_strassen_1(14).total > ops_conventional(14).total);

  CHECK_THROWS_AS(ops_strassen_1(15), std::invalid_argument);
}

TEST_CASE("one-level winograd operation counts") {
  CHECK(ops_winograd_1(12).total == 3312);
  CHECK(ops_conventional(12).total == 3312);
  CHECK(ops_winograd_1(14).total < ops_conventional(14).total);
  CHECK(ops_winograd_1(16).total == 7680);
  CHECK(ops_winograd_1(16).total < ops_strassen_1(16).total);
  CHECK_THROWS_AS(ops_winograd_1(13), std::invalid_argument);
}

TEST_CASE("crossover thresholds") {
  // Totals scaled by 8 stay integral for every n, so the odd-n equality
  // points can be checked exactly: conventional 16n^3 - 8n^2, strassen
  // 14n^3 + 22n^2, winograd 14n^3 + 16n^2.
  const auto conv8 = [](int64_t n) { return 16 * n * n * n - 8 * n * n; };
  const auto str8 = [](int64_t n) { return 14 * n * n * n + 22 * n * n; };
  const auto win8 = [](int64_t n) { return 14 * n * n * n + 16 * n * n; };

  int first_strassen_win = 0;
  for (int n = 2; n <= 64 && first_strassen_win == 0; n += 2) {
    if (ops_strassen_1(n).total < ops_conventional(n).total) {
      first_strassen_win = n;
    }
  }
  CHECK(first_strassen_win == 16);
  CHECK(str8(15) == conv8(15));  // exact tie one below the threshold

  int first_winograd_win = 0;
  for (int n = 2; n <= 64 && first_winograd_win == 0; n += 2) {
    if (ops_winograd_1(n).total < ops_conventional(n).total) {
      first_winograd_win = n;
    }
  }
  CHECK(first_winograd_win == 14);
  CHECK(win8(13) < conv8(13));  // wins from 13 on, including odd sizes
  CHECK(win8(12) == conv8(12));

  for (int n = 16; n <= 256; n += 2) {
    CHECK(ops_strassen_1(n).total < ops_conventional(n).total);
  }
}
