#include "smm/fxp.hpp"

#include <algorithm>

namespace smm {

namespace detail {
thread_local uint64_t fxp_check_count = 0;
}  // namespace detail

uint64_t fxp_checks_performed() { return detail::fxp_check_count; }

int64_t fxp_min_value(int width, bool is_signed) {
  return is_signed ? -(int64_t{1} << (width - 1)) : 0;
}

int64_t fxp_max_value(int width, bool is_signed) {
  return is_signed ? (int64_t{1} << (width - 1)) - 1
                   : (int64_t{1} << width) - 1;
}

FxpScalar::FxpScalar(int64_t value_, int width_, bool is_signed_)
    : value(value_), width(width_), is_signed(is_signed_) {
  if (width < 1 || width > kMaxWidth) {
    throw std::invalid_argument("fxp width out of supported range [1, " +
                                std::to_string(kMaxWidth) +
                                "]: " + std::to_string(width));
  }
  ++detail::fxp_check_count;
  if (value < fxp_min_value(width, is_signed) ||
      value > fxp_max_value(width, is_signed)) {
    throw OverflowError("value " + std::to_string(value) + " does not fit " +
                        std::to_string(width) +
                        (is_signed ? " signed" : " unsigned") + " bits");
  }
}

FxpScalar fxp_add(const FxpScalar& a, const FxpScalar& b) {
  if (a.is_signed != b.is_signed) {
    throw std::invalid_argument("fxp_add operands disagree on signedness");
  }
  return FxpScalar(a.value + b.value, std::max(a.width, b.width) + 1,
                   a.is_signed);
}

FxpScalar fxp_sub(const FxpScalar& a, const FxpScalar& b) {
  if (!a.is_signed || !b.is_signed) {
    throw std::invalid_argument("fxp_sub requires signed operands");
  }
  return FxpScalar(a.value - b.value, std::max(a.width, b.width) + 1, true);
}

FxpScalar fxp_mul(const FxpScalar& a, const FxpScalar& b) {
  if (a.is_signed != b.is_signed) {
    throw std::invalid_argument("fxp_mul operands disagree on signedness");
  }
  if (a.width + b.width > kMaxWidth) {
    throw std::invalid_argument("fxp_mul result width exceeds supported max");
  }
  // Operands fit their widths, so the product fits width a.width+b.width and
  // in particular never overflows int64 (widths sum to <= 62).
  return FxpScalar(a.value * b.value, a.width + b.width, a.is_signed);
}

FxpScalar fxp_promote(const FxpScalar& a, int width) {
  if (width < a.width) {
    throw std::invalid_argument("fxp_promote cannot narrow a value");
  }
  return FxpScalar(a.value, width, a.is_signed);
}

FxpScalar fxp_to_signed(const FxpScalar& a) {
  if (a.is_signed) return a;
  return FxpScalar(a.value, a.width + 1, true);
}

int ceil_log2(int64_t n) {
  if (n < 1) throw std::invalid_argument("ceil_log2 requires n >= 1");
  int bits = 0;
  int64_t reach = 1;
  while (reach < n) {
    reach <<= 1;
    ++bits;
  }
  return bits;
}

}  // namespace smm
