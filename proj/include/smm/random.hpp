#pragma once
// Seeded operand generation. The mapping from generator output to values is
// pinned (not delegated to distribution classes, whose results vary between
// standard libraries): take the low `width` bits of one mt19937_64 draw;
// signed values subtract the half-range offset. 2^64 is divisible by every
// 2^width, so the result is exactly uniform over the full declared range.

#include <cstdint>
#include <random>

#include "smm/matrix.hpp"

namespace smm {

inline int64_t random_fxp_value(std::mt19937_64& eng, int width,
                                bool is_signed) {
  const uint64_t raw = eng() & ((uint64_t{1} << width) - 1);
  return is_signed ? int64_t(raw) - (int64_t{1} << (width - 1)) : int64_t(raw);
}

inline Matrix random_matrix(std::mt19937_64& eng, int rows, int cols,
                            int width, bool is_signed) {
  Matrix m(rows, cols, width, is_signed);
  for (auto& e : m.elems) {
    e = FxpScalar(random_fxp_value(eng, width, is_signed), width, is_signed);
  }
  return m;
}

}  // namespace smm
