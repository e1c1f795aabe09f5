#pragma once
// Cycle-level model of recursive multisystolic matrix-multiply units.
//
// Geometry. A leaf array is a weight-stationary X x Y grid of MACs: it holds
// an X x Y operand tile B (one element per PE, with a shadow copy for
// latency-hidden reloads), consumes one X-wide row vector of A per cycle and
// emits one Y-wide row vector of A*B per cycle once full. A depth-r unit is
// built recursively: the conventional family (MM) instantiates 8 children per
// level and sums their outputs pairwise per output quadrant; the Strassen
// family (SMM) instantiates 7 children fed by quadrant sum/difference banks
//
//   T = (A11+A22, A21+A22, A11, A22, A11+A12, A21-A11, A12-A22)
//   S = (B11+B22, B11, B12-B22, B21-B11, B22, B11+B12, B21+B22)
//
// and recombines the child products Q_i = T_i S_i through an output addition
// bank (C11 = Q1+Q4-Q5+Q7, C12 = Q3+Q5, C21 = Q2+Q4, C22 = Q1-Q2+Q3+Q6).
// Both families consume and produce the packed address-vector layout from
// layout.hpp, and the quadrant slicing at every level is pure wiring.
//
// Widths. Each SMM level adds one bit on the way in (sums of quadrants) and
// two bits on the way out (four-term combination); MM adds none in and one
// out. Leaf multiplier inputs are therefore exactly input_width + r wide for
// SMM and input_width for MM, leaf accumulators carry 2*leaf_input_width +
// ceil(log2(X)) bits, and every register on the way is checked by the fxp
// layer — a completed run is a proof the declared widths suffice.
//
// Timing. One address vector in and one out per cycle in steady state, any
// mix of valid vectors and bubbles. Vectors cross a triangular skew buffer
// pair at the array boundary (lane k of each X-wide chunk delayed k cycles,
// then the complement), per-level register stages, and the leaf pipeline;
// the resulting fill latency is deterministic and reported, see
// MxuConfig::fill_latency(). B tiles stream on their own port into shadow
// registers and take effect at the next tile boundary on the A stream, so
// back-to-back tiles never stall.

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>

#include "smm/layout.hpp"
#include "smm/matrix.hpp"

namespace smm {

enum class MxuFamily { MM, SMM };

struct MxuConfig {
  MxuFamily family = MxuFamily::SMM;
  int r = 1;               // recursion depth; 0 = single leaf array
  int leaf_x = 16;         // a/b vector width of each leaf
  int leaf_y = 16;         // c vector width of each leaf
  int input_width = 8;     // signed element width at the top-level a/b ports
  bool q_add_pipeline = false;  // extra register per level on the output banks

  /// Throws std::invalid_argument for unusable parameter combinations
  /// (including datapaths wider than the fxp layer can check).
  void validate() const;

  bool strassen() const { return family == MxuFamily::SMM; }
  int leaf_count() const;
  int leaf_input_width() const { return input_width + (strassen() ? r : 0); }
  int acc_extra_bits() const { return ceil_log2(leaf_x); }
  int leaf_acc_width() const { return 2 * leaf_input_width() + acc_extra_bits(); }
  /// Element width of c vectors leaving the top level.
  int output_width() const { return leaf_acc_width() + (strassen() ? 2 * r : r); }

  /// Smallest (rows, cols) square-tile operands the unit runs at full
  /// utilization: height 2^r * leaf_y, width 2^r * leaf_x.
  int min_rows() const { return (1 << r) * leaf_y; }
  int min_cols() const { return (1 << r) * leaf_x; }

  int a_vec_len() const { return (1 << (2 * r)) * leaf_x; }
  int b_vec_len() const { return a_vec_len(); }
  int c_vec_len() const { return (1 << (2 * r)) * leaf_y; }

  /// Cycles from an a vector entering to its c vector leaving:
  /// boundary skew (X-1) + per-level input registers (r) + leaf pipeline
  /// (X+Y) + per-level output registers (r, doubled by q_add_pipeline) +
  /// boundary deskew (Y-1).
  int fill_latency() const {
    return 2 * (leaf_x + leaf_y - 1) + r * (2 + (q_add_pipeline ? 1 : 0));
  }
  int a_input_latency() const { return (leaf_x - 1) + r; }
};

/// Totals of one simulated run (or one tile pass).
struct CycleReport {
  uint64_t cycles_total = 0;
  uint64_t fill_latency = 0;
  uint64_t mult_activations = 0;          // physical multiplier firings
  uint64_t useful_conventional_mults = 0; // m*k*n of the unpadded problem
  uint64_t a_vectors_in = 0;
  uint64_t c_vectors_out = 0;
};

/// Static structure of a built unit, counted by walking the instance tree.
struct MxuStructure {
  int64_t leaves = 0;
  int64_t multipliers = 0;
  int64_t adders = 0;                 // scalar adders in the addition banks
  int64_t adders_block_phrasing = 0;  // alternative per-block-width reading
};

/// One level of the left-operand addition bank: seven T terms from four
/// equal-length quadrant slices. Sums and differences come out one bit wider
/// than the slices; the two pass-throughs are promoted to match.
std::array<Vec, 7> a_addition_bank(const QuadrantSlices& q);

/// Right-operand bank: S terms, same width rule.
std::array<Vec, 7> b_addition_bank(const QuadrantSlices& q);

/// Output bank: four C quadrants from seven equal-length child products,
/// realized as eight elementwise adder vectors (3 + 1 + 1 + 3). All four
/// come out two bits wider than the inputs (the three-term quadrants grow
/// two bits through a balanced add tree; the two-term ones are promoted).
std::array<Vec, 4> q_addition_bank(const std::array<Vec, 7>& q);

/// Triangular shift-register bank: lane k delays its element by depths[k]
/// cycles (depth 0 passes through). Used in complementary pairs at the array
/// boundary to form and dissolve the diagonal wavefront.
class SkewBuffer {
 public:
  SkewBuffer(std::vector<int> depths, FxpScalar fill);
  Vec shift(const Vec& in);
  int lanes() const { return int(lanes_.size()); }

 private:
  std::vector<std::deque<FxpScalar>> lanes_;
};

struct SimCounters {
  uint64_t mult_activations = 0;
};

/// One weight-stationary leaf array (the depth-0 unit), usable standalone.
class LeafArray {
 public:
  /// `counters` may be null; the unit then counts into private storage.
  LeafArray(int x, int y, int input_width, SimCounters* counters = nullptr);

  /// Loads a full X x Y operand tile into the shadow bank. The active bank
  /// is untouched until the next tile boundary on the a stream.
  void load_b(const Matrix& b_tile);
  /// Streams one shadow column (X elements, column index col in [0, Y)).
  void load_b_column(int col, const Vec& column);

  /// Advances one cycle. `a` is one X-wide row vector (exact element width
  /// required) or a bubble; tile_start promotes shadow to active before the
  /// vector is used. Returns the vector due this cycle, if any: row j of
  /// A_tile * B_active emerges latency() cycles after row j entered.
  std::optional<Vec> step(const std::optional<Vec>& a, bool tile_start = false);

  int latency() const { return x_ + y_; }
  int x() const { return x_; }
  int y() const { return y_; }
  int input_width() const { return input_width_; }
  int acc_width() const { return acc_width_; }
  uint64_t mult_activations() const { return counters_->mult_activations; }

 private:
  int x_, y_, input_width_, acc_width_;
  int64_t in_min_, in_max_, acc_min_, acc_max_;
  std::vector<int64_t> b_active_, b_shadow_;  // row-major [i * y_ + j]
  std::deque<std::optional<Vec>> out_pipe_;
  SimCounters own_{};
  SimCounters* counters_;
};

namespace detail {
class Node;
}

/// A complete depth-r unit with its boundary buffering. Deterministic: equal
/// configs fed equal cycle-by-cycle inputs produce identical outputs, cycle
/// for cycle.
class Mxu {
 public:
  explicit Mxu(const MxuConfig& cfg);
  ~Mxu();
  Mxu(Mxu&&) noexcept;
  Mxu& operator=(Mxu&&) noexcept;

  /// Advances one cycle. `a` is one packed address vector (or bubble) with
  /// tile_start marking the first vector of a tile; `b` is one packed
  /// operand-tile vector with its address index, streaming into the shadow
  /// banks. Returns the c vector leaving this cycle, if any.
  std::optional<Vec> step(const std::optional<Vec>& a, bool tile_start,
                          const std::optional<std::pair<int, Vec>>& b);

  const MxuConfig& config() const { return cfg_; }
  MxuStructure structure() const;
  uint64_t cycles() const { return cycle_; }
  uint64_t mult_activations() const { return counters_.mult_activations; }
  uint64_t a_vectors_in() const { return a_in_; }
  uint64_t c_vectors_out() const { return c_out_; }

  /// Per-cycle port log (CSV rows: cycle,unit,port,value). Null disables.
  void set_trace(std::ostream* out) { trace_ = out; }

  /// Test hook: flips the low bit of the first element of the first child
  /// product at the top-level output bank, modeling a wiring fault.
  void set_output_fault(bool on);

 private:
  template <typename T>
  class DelayLine {
   public:
    DelayLine() = default;
    DelayLine(size_t depth, T fill) : slots_(depth, fill) {}
    T shift(T in) {
      if (slots_.empty()) return in;
      std::swap(slots_[head_], in);  // in picks up the element written depth shifts ago
      head_ = (head_ + 1) % slots_.size();
      return in;
    }

   private:
    std::vector<T> slots_;
    size_t head_ = 0;
  };

  struct PortFlags {
    bool valid = false;
    bool tile_start = false;
  };

  void trace_vec(const char* port, const Vec& v);

  MxuConfig cfg_;
  SimCounters counters_;
  std::unique_ptr<detail::Node> root_;
  SkewBuffer a_skew_, a_deskew_;
  DelayLine<PortFlags> a_flags_;
  DelayLine<std::optional<std::pair<int, Vec>>> b_delay_;
  DelayLine<std::optional<Vec>> c_delay_;
  uint64_t cycle_ = 0, a_in_ = 0, c_out_ = 0;
  std::ostream* trace_ = nullptr;
};

/// Builds a unit after validating the config.
Mxu build_mxu(const MxuConfig& cfg);

/// Streams one full tile product through the unit: loads the B tile, streams
/// the A tile, drains. Narrower stream elements are promoted to the port
/// width on the way in.
std::pair<PackedStream, CycleReport> mxu_run_tile(Mxu& mxu,
                                                  const PackedStream& a,
                                                  const PackedStream& b);

}  // namespace smm
