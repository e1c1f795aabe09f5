#pragma once
// Dense matrices of width-tracked integers. Row-major, uniform element width.

#include <optional>
#include <utility>
#include <vector>

#include "smm/fxp.hpp"

namespace smm {

struct Matrix {
  /// All-zero matrix of the given shape and element format.
  Matrix(int rows, int cols, int elem_width, bool is_signed = true);

  /// Builds from row-major raw values, validating each against the format.
  static Matrix from_values(int rows, int cols, const std::vector<int64_t>& v,
                            int elem_width, bool is_signed = true);

  int rows = 0;
  int cols = 0;
  int elem_width = 1;
  bool is_signed = true;
  std::vector<FxpScalar> elems;  // row-major

  FxpScalar& at(int i, int j) { return elems[size_t(i) * cols + j]; }
  const FxpScalar& at(int i, int j) const { return elems[size_t(i) * cols + j]; }
  int64_t value_at(int i, int j) const { return at(i, j).value; }
  void set(int i, int j, int64_t value);

  /// Same values on a wider element bus.
  Matrix promoted(int new_width) const;
  /// Unsigned matrices become signed one bit wider; signed pass through.
  Matrix as_signed() const;
  /// Copy padded with zeros to the given shape (must not shrink).
  Matrix padded(int new_rows, int new_cols) const;
  /// Top-left sub-matrix.
  Matrix cropped(int new_rows, int new_cols) const;
};

/// True when shapes match and every element value agrees (widths ignored).
bool same_values(const Matrix& a, const Matrix& b);

/// Coordinates of the first row-major value mismatch, if any.
std::optional<std::pair<int, int>> first_value_mismatch(const Matrix& a,
                                                        const Matrix& b);

}  // namespace smm
