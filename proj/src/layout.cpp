#include "smm/layout.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace smm {

namespace {

void check_depth(int r) {
  if (r < 0 || r > 16) throw std::invalid_argument("recursion depth out of range");
}

void check_divisible(int dim, int r, const char* what) {
  if (dim % (1 << r)) {
    throw std::invalid_argument(std::string(what) +
                                " not divisible by 2^r for packing");
  }
}

}  // namespace

PackedStream pack_a(const Matrix& tile, int r) {
  check_depth(r);
  check_divisible(tile.rows, r, "tile rows");
  const int groups = 1 << r;
  const int m = tile.rows / groups;
  PackedStream s{StreamSide::A, r,       tile.rows,      tile.cols,
                 groups * tile.cols,     tile.elem_width, tile.is_signed,
                 {}};
  s.addresses.reserve(m);
  for (int i = 0; i < m; ++i) {
    Vec v;
    v.reserve(size_t(s.vec_len));
    for (int t = 0; t < groups; ++t) {
      const int row = i + t * m;
      for (int j = 0; j < tile.cols; ++j) v.push_back(tile.at(row, j));
    }
    s.addresses.push_back(std::move(v));
  }
  return s;
}

PackedStream pack_b(const Matrix& tile, int r) {
  check_depth(r);
  check_divisible(tile.cols, r, "tile cols");
  const int groups = 1 << r;
  const int n = tile.cols / groups;
  PackedStream s{StreamSide::B, r,       tile.rows,      tile.cols,
                 groups * tile.rows,     tile.elem_width, tile.is_signed,
                 {}};
  s.addresses.reserve(n);
  for (int j = 0; j < n; ++j) {
    Vec v;
    v.reserve(size_t(s.vec_len));
    for (int t = 0; t < groups; ++t) {
      const int col = j + t * n;
      for (int i = 0; i < tile.rows; ++i) v.push_back(tile.at(i, col));
    }
    s.addresses.push_back(std::move(v));
  }
  return s;
}

Matrix unpack_c(const PackedStream& stream) {
  if (stream.side == StreamSide::B) {
    throw std::invalid_argument("unpack_c expects a row-interleaved (A/C) stream");
  }
  check_depth(stream.r);
  const int groups = 1 << stream.r;
  const int m = int(stream.addresses.size());
  if (m < 1 || stream.tile_rows != m * groups ||
      stream.vec_len != groups * stream.tile_cols) {
    throw std::invalid_argument("malformed stream: shape fields disagree");
  }
  Matrix tile(stream.tile_rows, stream.tile_cols, stream.elem_width,
              stream.is_signed);
  for (int i = 0; i < m; ++i) {
    const Vec& v = stream.addresses[i];
    if (int(v.size()) != stream.vec_len) {
      throw std::invalid_argument("malformed stream: address length mismatch");
    }
    for (int t = 0; t < groups; ++t) {
      for (int j = 0; j < stream.tile_cols; ++j) {
        tile.at(i + t * m, j) = v[size_t(t) * stream.tile_cols + j];
      }
    }
  }
  return tile;
}

QuadrantSlices split_quadrants(const Vec& vec, int level, StreamSide side) {
  if (level < 1) throw std::invalid_argument("split needs level >= 1");
  const int segments = 1 << level;
  if (vec.size() % size_t(segments * 2)) {
    throw std::invalid_argument("vector length not splittable at this level");
  }
  const size_t seg_len = vec.size() / segments;
  const size_t half = seg_len / 2;
  const int seg_split = segments / 2;

  QuadrantSlices q;
  const size_t slice = vec.size() / 4;
  q.q11.reserve(slice);
  q.q12.reserve(slice);
  q.q21.reserve(slice);
  q.q22.reserve(slice);

  for (int t = 0; t < segments; ++t) {
    const FxpScalar* seg = vec.data() + size_t(t) * seg_len;
    // A/C vectors interleave rows: the segment index picks the row half and
    // the position within a segment picks the column half. B vectors
    // interleave columns, so the roles swap.
    const bool seg_first = t < seg_split;
    Vec& lo = side == StreamSide::B ? (seg_first ? q.q11 : q.q12)
                                    : (seg_first ? q.q11 : q.q21);
    Vec& hi = side == StreamSide::B ? (seg_first ? q.q21 : q.q22)
                                    : (seg_first ? q.q12 : q.q22);
    lo.insert(lo.end(), seg, seg + half);
    hi.insert(hi.end(), seg + half, seg + seg_len);
  }
  return q;
}

QuadrantSlices split_quadrants(const Vec& vec, int r, int tile_rows,
                               int tile_cols, StreamSide side) {
  check_depth(r);
  const int groups = 1 << r;
  const int expect = side == StreamSide::B ? groups * tile_rows
                                           : groups * tile_cols;
  if (int(vec.size()) != expect || tile_rows % groups || tile_cols % groups) {
    throw std::invalid_argument("vector does not match claimed tile shape");
  }
  return split_quadrants(vec, r, side);
}

Vec merge_quadrants(const Vec& q11, const Vec& q12, const Vec& q21,
                    const Vec& q22, int level) {
  if (level < 1) throw std::invalid_argument("merge needs level >= 1");
  const size_t slice = q11.size();
  if (q12.size() != slice || q21.size() != slice || q22.size() != slice) {
    throw std::invalid_argument("quadrant slices must have equal length");
  }
  const int child_segments = 1 << (level - 1);
  if (slice % size_t(child_segments)) {
    throw std::invalid_argument("slice length not mergeable at this level");
  }
  const size_t half = slice / child_segments;  // child segment length

  Vec out;
  out.reserve(slice * 4);
  for (int t = 0; t < child_segments; ++t) {
    out.insert(out.end(), q11.begin() + t * half, q11.begin() + (t + 1) * half);
    out.insert(out.end(), q12.begin() + t * half, q12.begin() + (t + 1) * half);
  }
  for (int t = 0; t < child_segments; ++t) {
    out.insert(out.end(), q21.begin() + t * half, q21.begin() + (t + 1) * half);
    out.insert(out.end(), q22.begin() + t * half, q22.begin() + (t + 1) * half);
  }
  return out;
}

void dump_stream_csv(const PackedStream& stream, std::ostream& out) {
  const char* side = stream.side == StreamSide::A   ? "A"
                     : stream.side == StreamSide::B ? "B"
                                                    : "C";
  out << "# side=" << side << " r=" << stream.r << " tile=" << stream.tile_rows
      << "x" << stream.tile_cols << " vec_len=" << stream.vec_len << "\n";
  for (size_t i = 0; i < stream.addresses.size(); ++i) {
    out << i;
    for (const auto& e : stream.addresses[i]) out << "," << e.value;
    out << "\n";
  }
}

}  // namespace smm
