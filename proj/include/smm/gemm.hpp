#pragma once
// Whole-problem GEMM on top of one simulated unit.
//
// Arbitrary m x k times k x n products are zero-padded to a grid of
// tile_m x tile_k by tile_k x tile_n passes (tile_k/tile_n are fixed by the
// array geometry, tile_m is chosen square to them), streamed tile by tile
// with the next operand tile loading behind the current one, and accumulated
// across the k grid axis in fixed ascending order outside the unit. Padding
// is stripped from the result; the cycle report covers the entire run with
// the padded work counted as non-useful.

#include <cstdint>
#include <iosfwd>

#include "smm/matrix.hpp"
#include "smm/mxu.hpp"

namespace smm {

struct TilePlan {
  int tile_m = 0, tile_k = 0, tile_n = 0;
  int grid_m = 0, grid_k = 0, grid_n = 0;
  int pad_m = 0, pad_k = 0, pad_n = 0;
};

/// Smallest grid of unit-sized tiles covering an m x k x n product.
/// Deterministic; tile_k = 2^r * leaf_x, tile_m = tile_n = 2^r * leaf_y.
TilePlan plan_tiles(int m, int k, int n, const MxuConfig& cfg);

struct GemmResult {
  Matrix c;
  CycleReport report;
};

struct GemmOptions {
  /// > 1 streams the same product back-to-back that many times on the one
  /// instance (for steady-state measurements); the returned matrix is the
  /// first repetition's result and the report spans all of them.
  int reps = 1;
  /// Optionally receives the per-cycle port log.
  std::ostream* trace = nullptr;
  /// Test hook: flip one bit in one block product so downstream checks can
  /// prove they would catch a datapath fault.
  bool output_fault = false;
};

/// Runs a * b on a freshly built unit. Unsigned operands are promoted to
/// signed one bit wider; the promoted width must not exceed the configured
/// port width.
GemmResult run_gemm(const Matrix& a, const Matrix& b, const MxuConfig& cfg,
                    const GemmOptions& opt);
GemmResult run_gemm(const Matrix& a, const Matrix& b, const MxuConfig& cfg,
                    int reps = 1, std::ostream* trace = nullptr);

}  // namespace smm
