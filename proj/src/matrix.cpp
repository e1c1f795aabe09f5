#include "smm/matrix.hpp"

#include <stdexcept>
#include <string>

namespace smm {

Matrix::Matrix(int rows_, int cols_, int elem_width_, bool is_signed_)
    : rows(rows_), cols(cols_), elem_width(elem_width_), is_signed(is_signed_) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  elems.assign(size_t(rows) * cols, FxpScalar(0, elem_width, is_signed));
}

Matrix Matrix::from_values(int rows, int cols, const std::vector<int64_t>& v,
                           int elem_width, bool is_signed) {
  if (v.size() != size_t(rows) * cols) {
    throw std::invalid_argument("matrix value count does not match shape");
  }
  Matrix m(rows, cols, elem_width, is_signed);
  for (size_t i = 0; i < v.size(); ++i) {
    m.elems[i] = FxpScalar(v[i], elem_width, is_signed);
  }
  return m;
}

void Matrix::set(int i, int j, int64_t value) {
  at(i, j) = FxpScalar(value, elem_width, is_signed);
}

Matrix Matrix::promoted(int new_width) const {
  Matrix m(rows, cols, new_width, is_signed);
  for (size_t i = 0; i < elems.size(); ++i) {
    m.elems[i] = fxp_promote(elems[i], new_width);
  }
  return m;
}

Matrix Matrix::as_signed() const {
  if (is_signed) return *this;
  Matrix m(rows, cols, elem_width + 1, true);
  for (size_t i = 0; i < elems.size(); ++i) {
    m.elems[i] = fxp_to_signed(elems[i]);
  }
  return m;
}

Matrix Matrix::padded(int new_rows, int new_cols) const {
  if (new_rows < rows || new_cols < cols) {
    throw std::invalid_argument("padded() cannot shrink a matrix");
  }
  Matrix m(new_rows, new_cols, elem_width, is_signed);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
  }
  return m;
}

Matrix Matrix::cropped(int new_rows, int new_cols) const {
  if (new_rows > rows || new_cols > cols) {
    throw std::invalid_argument("cropped() cannot grow a matrix");
  }
  Matrix m(new_rows, new_cols, elem_width, is_signed);
  for (int i = 0; i < new_rows; ++i) {
    for (int j = 0; j < new_cols; ++j) m.at(i, j) = at(i, j);
  }
  return m;
}

bool same_values(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  return !first_value_mismatch(a, b).has_value();
}

std::optional<std::pair<int, int>> first_value_mismatch(const Matrix& a,
                                                        const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw std::invalid_argument("mismatch scan requires equal shapes");
  }
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) {
      if (a.value_at(i, j) != b.value_at(i, j)) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

}  // namespace smm
