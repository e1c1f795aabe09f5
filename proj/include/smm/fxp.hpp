#pragma once
// Integer-exact fixed-point scalars with explicit register widths.
//
// Every value travelling through the simulated datapath is an FxpScalar: an
// integer plus the width (in bits) of the bus or register holding it.
// Arithmetic grows widths the way RTL sizing does — add/sub widen by one bit,
// multiply produces the sum of the operand widths — and a value that does not
// fit its declared width raises OverflowError instead of wrapping. A test run
// that completes has therefore proven every modeled register wide enough.
//
// Values are stored in int64_t. Widths above 62 bits are rejected up front as
// configuration errors so the range checks themselves can never overflow;
// every datapath reachable at supported sizes stays far below that.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smm {

inline constexpr int kMaxWidth = 62;

/// Raised when a value lands outside the range of its declared width.
/// This is the simulator's "hardware would have overflowed" assertion.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest / largest value representable in `width` bits.
int64_t fxp_min_value(int width, bool is_signed);
int64_t fxp_max_value(int width, bool is_signed);

/// Number of range checks performed on this thread since start. Lets tests
/// show the overflow checking was actually exercised, not compiled away.
uint64_t fxp_checks_performed();

namespace detail {
extern thread_local uint64_t fxp_check_count;
}

/// Range check for raw accumulator loops that bypass FxpScalar construction
/// for speed. Counts like every other width check and throws OverflowError
/// when the value falls outside the declared register range [lo, hi].
inline void fxp_check_range(int64_t value, int64_t lo, int64_t hi,
                            const char* what) {
  ++detail::fxp_check_count;
  if (value < lo || value > hi) {
    throw OverflowError(std::string(what) + ": value " +
                        std::to_string(value) + " outside declared range");
  }
}

struct FxpScalar {
  FxpScalar() = default;

  /// Validates that `value` fits `width` under the given signedness.
  /// Throws std::invalid_argument for an unusable width, OverflowError for a
  /// value outside the representable range.
  FxpScalar(int64_t value, int width, bool is_signed = true);

  int64_t value = 0;
  int width = 1;
  bool is_signed = true;
};

/// Sum at width max(a,b)+1. Operands must agree on signedness.
FxpScalar fxp_add(const FxpScalar& a, const FxpScalar& b);

/// Difference at width max(a,b)+1, signed semantics (subtraction is modeled
/// as negate-and-add, which never overflows at the widened width).
FxpScalar fxp_sub(const FxpScalar& a, const FxpScalar& b);

/// Product at width a.width + b.width.
FxpScalar fxp_mul(const FxpScalar& a, const FxpScalar& b);

/// Same value on a wider bus. `width` must be >= the current width.
FxpScalar fxp_promote(const FxpScalar& a, int width);

/// Reinterpret an unsigned value as signed, one bit wider. Signed values
/// pass through unchanged.
FxpScalar fxp_to_signed(const FxpScalar& a);

/// ceil(log2(n)) for n >= 1; the extra accumulator bits needed to sum n terms.
int ceil_log2(int64_t n);

}  // namespace smm
