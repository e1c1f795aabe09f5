#pragma once
// Address-vector packing between plain matrices and the accelerator memories.
//
// A tile enters the machine as a sequence of wide address vectors. For an A
// tile split r levels deep, memory address i holds every m-th row of the tile
// starting at row i, concatenated (m = tile_rows / 2^r addresses in total).
// B memories hold the transposed construction: address j holds every n'-th
// column starting at column j (n' = tile_cols / 2^r). C tiles use the A
// layout, which is what lets a result feed a later product unchanged.
//
// The payoff of this interleaving is that one address vector contains exactly
// one row (or column) of each of the 4^r lowest-level sub-blocks, and the
// four quadrant slices of a vector are, element for element, the packed
// vectors of the quadrant sub-tiles one level down. Recursive hardware can
// therefore split a vector into quadrant streams with pure wiring.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "smm/matrix.hpp"

namespace smm {

using Vec = std::vector<FxpScalar>;

enum class StreamSide { A, B, C };

struct PackedStream {
  StreamSide side = StreamSide::A;
  int r = 0;
  int tile_rows = 0;
  int tile_cols = 0;
  int vec_len = 0;    // tile_rows * tile_cols / addresses.size()
  int elem_width = 1;
  bool is_signed = true;
  std::vector<Vec> addresses;
};

/// Row-interleaved packing for A (and C) tiles. tile.rows must be divisible
/// by 2^r; yields tile.rows / 2^r addresses of 2^r * tile.cols elements.
PackedStream pack_a(const Matrix& tile, int r);

/// Column-interleaved packing for B tiles. tile.cols must be divisible by
/// 2^r; yields tile.cols / 2^r addresses of 2^r * tile.rows elements.
PackedStream pack_b(const Matrix& tile, int r);

/// Inverse of the row-interleaved packing. Accepts A- or C-side streams
/// (the layouts are identical); rejects B-side streams and malformed shapes.
Matrix unpack_c(const PackedStream& stream);

struct QuadrantSlices {
  Vec q11, q12, q21, q22;  // matrix quadrants: (row half, column half)
};

/// Splits one packed vector into its four quadrant slices, preserving packed
/// order, so each slice is the level-(level-1) packed vector of that
/// quadrant sub-tile. `level` >= 1 is the recursion depth the vector was
/// packed for; `side` picks the row- or column-interleaved geometry.
QuadrantSlices split_quadrants(const Vec& vec, int level, StreamSide side);

/// Shape-checking overload that also validates the vector length against
/// the tile shape it claims to carry.
QuadrantSlices split_quadrants(const Vec& vec, int r, int tile_rows,
                               int tile_cols, StreamSide side);

/// Inverse of the A/C-side split: reassembles a parent vector from four
/// child-level quadrant slices.
Vec merge_quadrants(const Vec& q11, const Vec& q12, const Vec& q21,
                    const Vec& q22, int level);

/// Debug dump, one address per line: index followed by the element values.
void dump_stream_csv(const PackedStream& stream, std::ostream& out);

}  // namespace smm
