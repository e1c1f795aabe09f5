#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "smm/layout.hpp"
#include "smm/random.hpp"

using namespace smm;

namespace {

// a_ij = cols * i + j, the worked example tile.
Matrix iota(int rows, int cols, int width) {
  Matrix m(rows, cols, width);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m.set(i, j, int64_t(i) * cols + j);
  }
  return m;
}

std::vector<int64_t> values(const Vec& v) {
  std::vector<int64_t> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.value);
  return out;
}

Matrix transposed(const Matrix& m) {
  Matrix t(m.cols, m.rows, m.elem_width, m.is_signed);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) t.set(j, i, m.value_at(i, j));
  }
  return t;
}

}  // namespace

TEST_CASE("pack_a interleaves every m-th row") {
  const Matrix tile = iota(4, 4, 6);
  const PackedStream s = pack_a(tile, 1);
  REQUIRE(s.addresses.size() == 2);
  CHECK(s.vec_len == 8);
  CHECK(values(s.addresses[0]) == std::vector<int64_t>{0, 1, 2, 3, 8, 9, 10, 11});
  CHECK(values(s.addresses[1]) == std::vector<int64_t>{4, 5, 6, 7, 12, 13, 14, 15});

  const PackedStream s0 = pack_a(tile, 0);
  REQUIRE(s0.addresses.size() == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(s0.addresses[size_t(i)][size_t(j)].value == tile.value_at(i, j));
    }
  }

  const PackedStream s2 = pack_a(iota(8, 8, 8), 2);
  REQUIRE(s2.addresses.size() == 2);
  std::vector<int64_t> want;
  for (int row : {0, 2, 4, 6}) {
    for (int j = 0; j < 8; ++j) want.push_back(8 * row + j);
  }
  CHECK(values(s2.addresses[0]) == want);

  CHECK_THROWS_AS(pack_a(iota(6, 4, 6), 2), std::invalid_argument);
}

TEST_CASE("pack_b interleaves every n'-th column and mirrors pack_a") {
  const Matrix tile = iota(4, 4, 6);
  const PackedStream s = pack_b(tile, 1);
  REQUIRE(s.addresses.size() == 2);
  CHECK(values(s.addresses[0]) == std::vector<int64_t>{0, 4, 8, 12, 2, 6, 10, 14});

  const PackedStream s0 = pack_b(tile, 0);
  REQUIRE(s0.addresses.size() == 4);
  CHECK(values(s0.addresses[1]) == std::vector<int64_t>{1, 5, 9, 13});

  std::mt19937_64 eng(5);
  const Matrix m = random_matrix(eng, 8, 4, 7, true);
  const PackedStream viaB = pack_b(m, 2);
  const PackedStream viaA = pack_a(transposed(m), 2);
  REQUIRE(viaB.addresses.size() == viaA.addresses.size());
  for (size_t i = 0; i < viaB.addresses.size(); ++i) {
    CHECK(values(viaB.addresses[i]) == values(viaA.addresses[i]));
  }
}

TEST_CASE("unpack_c inverts the row-interleaved packing") {
  const Matrix tile = iota(4, 4, 6);
  PackedStream s = pack_a(tile, 1);
  CHECK(same_values(unpack_c(s), tile));

  std::mt19937_64 eng(11);
  for (int r : {0, 1, 2}) {
    const Matrix m = random_matrix(eng, 8, 12, 9, true);
    CHECK(same_values(unpack_c(pack_a(m, r)), m));
  }

  PackedStream b = pack_b(tile, 1);
  CHECK_THROWS_AS(unpack_c(b), std::invalid_argument);

  s.addresses[0].pop_back();
  CHECK_THROWS_WITH_AS(unpack_c(s), doctest::Contains("malformed"),
                       std::invalid_argument);
}

TEST_CASE("split_quadrants slices the worked example") {
  const Matrix tile = iota(4, 4, 6);
  const PackedStream s = pack_a(tile, 1);
  const QuadrantSlices q = split_quadrants(s.addresses[0], 1, StreamSide::A);
  CHECK(values(q.q11) == std::vector<int64_t>{0, 1});
  CHECK(values(q.q12) == std::vector<int64_t>{2, 3});
  CHECK(values(q.q21) == std::vector<int64_t>{8, 9});
  CHECK(values(q.q22) == std::vector<int64_t>{10, 11});

  const QuadrantSlices qs = split_quadrants(s.addresses[0], 1, 4, 4, StreamSide::A);
  CHECK(values(qs.q11) == values(q.q11));
  CHECK_THROWS_AS(split_quadrants(s.addresses[0], 1, 4, 6, StreamSide::A),
                  std::invalid_argument);
}

TEST_CASE("quadrant slices are the packed vectors of the quadrant sub-tiles") {
  std::mt19937_64 eng(17);
  const int r = 2;
  const Matrix m = random_matrix(eng, 16, 8, 8, true);
  const Matrix q11 = m.cropped(8, 4);
  const PackedStream parent = pack_a(m, r);
  const PackedStream child = pack_a(q11, r - 1);
  for (size_t i = 0; i < parent.addresses.size(); ++i) {
    const QuadrantSlices q = split_quadrants(parent.addresses[i], r, StreamSide::A);
    CHECK(values(q.q11) == values(child.addresses[i]));
  }
}

TEST_CASE("an address vector holds one row of every lowest-level sub-block") {
  const int r = 2;
  const Matrix m = iota(8, 8, 8);
  const PackedStream s = pack_a(m, r);
  // Sub-block (p, q) of the 4x4 grid of 2x2 sub-blocks: rows {p, p+2, p+4, p+6}
  // restricted to columns {2q, 2q+1}. Address i must contain exactly row i of
  // every one of them.
  for (size_t i = 0; i < s.addresses.size(); ++i) {
    const Vec& v = s.addresses[i];
    // Segment t of the vector is tile row i + t * 2 (every m-th row, m = 2).
    for (int t = 0; t < 4; ++t) {
      for (int j = 0; j < 8; ++j) {
        CHECK(v[size_t(t * 8 + j)].value == m.value_at(int(i) + 2 * t, j));
      }
    }
  }
}

TEST_CASE("merge_quadrants inverts split_quadrants") {
  std::mt19937_64 eng(23);
  for (int level : {1, 2, 3}) {
    const int rows = 4 << level, cols = 2 << level;
    const Matrix m = random_matrix(eng, rows, cols, 8, true);
    const PackedStream s = pack_a(m, level);
    for (const Vec& v : s.addresses) {
      const QuadrantSlices q = split_quadrants(v, level, StreamSide::A);
      CHECK(values(merge_quadrants(q.q11, q.q12, q.q21, q.q22, level)) == values(v));
    }
  }
}

TEST_CASE("stream dump is one line per address") {
  const PackedStream s = pack_a(iota(4, 2, 5), 1);
  std::ostringstream out;
  dump_stream_csv(s, out);
  const std::string text = out.str();
  CHECK(text.find("0,0,1,4,5") != std::string::npos);
  CHECK(text.find("1,2,3,6,7") != std::string::npos);
}
