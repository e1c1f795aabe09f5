#include "smm/reference.hpp"

#include <stdexcept>
#include <string>

namespace smm {

namespace {

// Plain value-domain matrices for the recursive references. Width tracking is
// the simulator's concern; the references only have to be numerically exact.
struct ValMat {
  int rows = 0, cols = 0;
  std::vector<int64_t> v;

  static ValMat zero(int r, int c) { return {r, c, std::vector<int64_t>(size_t(r) * c, 0)}; }
  int64_t& at(int i, int j) { return v[size_t(i) * cols + j]; }
  int64_t at(int i, int j) const { return v[size_t(i) * cols + j]; }
};

ValMat values_of(const Matrix& m) {
  ValMat out{m.rows, m.cols, {}};
  out.v.reserve(m.elems.size());
  for (const auto& e : m.elems) out.v.push_back(e.value);
  return out;
}

ValMat quadrant(const ValMat& m, int qi, int qj) {
  const int hr = m.rows / 2, hc = m.cols / 2;
  ValMat out = ValMat::zero(hr, hc);
  for (int i = 0; i < hr; ++i)
    for (int j = 0; j < hc; ++j) out.at(i, j) = m.at(qi * hr + i, qj * hc + j);
  return out;
}

ValMat vadd(const ValMat& a, const ValMat& b) {
  ValMat out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

ValMat vsub(const ValMat& a, const ValMat& b) {
  ValMat out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

void place(ValMat& dst, const ValMat& src, int qi, int qj) {
  for (int i = 0; i < src.rows; ++i)
    for (int j = 0; j < src.cols; ++j)
      dst.at(qi * src.rows + i, qj * src.cols + j) = src.at(i, j);
}

ValMat vmul_naive(const ValMat& a, const ValMat& b, uint64_t* leaf_mults) {
  ValMat c = ValMat::zero(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      int64_t acc = 0;
      for (int k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
      c.at(i, j) = acc;
    }
  }
  if (leaf_mults) *leaf_mults += uint64_t(a.rows) * a.cols * b.cols;
  return c;
}

ValMat vmul_blocked(const ValMat& a, const ValMat& b, int levels) {
  if (levels == 0) return vmul_naive(a, b, nullptr);
  ValMat a11 = quadrant(a, 0, 0), a12 = quadrant(a, 0, 1);
  ValMat a21 = quadrant(a, 1, 0), a22 = quadrant(a, 1, 1);
  ValMat b11 = quadrant(b, 0, 0), b12 = quadrant(b, 0, 1);
  ValMat b21 = quadrant(b, 1, 0), b22 = quadrant(b, 1, 1);
  ValMat c = ValMat::zero(a.rows, b.cols);
  place(c, vadd(vmul_blocked(a11, b11, levels - 1), vmul_blocked(a12, b21, levels - 1)), 0, 0);
  place(c, vadd(vmul_blocked(a11, b12, levels - 1), vmul_blocked(a12, b22, levels - 1)), 0, 1);
  place(c, vadd(vmul_blocked(a21, b11, levels - 1), vmul_blocked(a22, b21, levels - 1)), 1, 0);
  place(c, vadd(vmul_blocked(a21, b12, levels - 1), vmul_blocked(a22, b22, levels - 1)), 1, 1);
  return c;
}

ValMat vmul_strassen(const ValMat& a, const ValMat& b, int levels,
                     uint64_t* leaf_mults) {
  if (levels == 0) return vmul_naive(a, b, leaf_mults);
  ValMat a11 = quadrant(a, 0, 0), a12 = quadrant(a, 0, 1);
  ValMat a21 = quadrant(a, 1, 0), a22 = quadrant(a, 1, 1);
  ValMat b11 = quadrant(b, 0, 0), b12 = quadrant(b, 0, 1);
  ValMat b21 = quadrant(b, 1, 0), b22 = quadrant(b, 1, 1);

  ValMat q1 = vmul_strassen(vadd(a11, a22), vadd(b11, b22), levels - 1, leaf_mults);
  ValMat q2 = vmul_strassen(vadd(a21, a22), b11, levels - 1, leaf_mults);
  ValMat q3 = vmul_strassen(a11, vsub(b12, b22), levels - 1, leaf_mults);
  ValMat q4 = vmul_strassen(a22, vsub(b21, b11), levels - 1, leaf_mults);
  ValMat q5 = vmul_strassen(vadd(a11, a12), b22, levels - 1, leaf_mults);
  ValMat q6 = vmul_strassen(vsub(a21, a11), vadd(b11, b12), levels - 1, leaf_mults);
  ValMat q7 = vmul_strassen(vsub(a12, a22), vadd(b21, b22), levels - 1, leaf_mults);

  ValMat c = ValMat::zero(a.rows, b.cols);
  place(c, vadd(vsub(vadd(q1, q4), q5), q7), 0, 0);
  place(c, vadd(q3, q5), 0, 1);
  place(c, vadd(q2, q4), 1, 0);
  place(c, vadd(vsub(q1, q2), vadd(q3, q6)), 1, 1);
  return c;
}

void check_product_shapes(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    throw std::invalid_argument("matmul inner dimensions disagree: " +
                                std::to_string(a.cols) + " vs " +
                                std::to_string(b.rows));
  }
}

void check_divisibility(const Matrix& a, const Matrix& b, int levels) {
  if (levels < 0) throw std::invalid_argument("recursion depth must be >= 0");
  const int div = 1 << levels;
  if (a.rows % div || a.cols % div || b.cols % div) {
    throw std::invalid_argument("all product dimensions must be divisible by 2^levels");
  }
}

Matrix wrap_result(const ValMat& c, const Matrix& a, const Matrix& b) {
  const int out_width = a.elem_width + b.elem_width + ceil_log2(a.cols);
  Matrix m(c.rows, c.cols, out_width, true);
  for (int i = 0; i < c.rows; ++i)
    for (int j = 0; j < c.cols; ++j) m.set(i, j, c.at(i, j));
  return m;
}

}  // namespace

Matrix matmul_naive(const Matrix& a_in, const Matrix& b_in) {
  // Unsigned operands follow the hardware convention: signed, one bit wider.
  const Matrix a = a_in.as_signed();
  const Matrix b = b_in.as_signed();
  check_product_shapes(a, b);
  return wrap_result(vmul_naive(values_of(a), values_of(b), nullptr), a, b);
}

Matrix matmul_blocked(const Matrix& a_in, const Matrix& b_in, int levels) {
  const Matrix a = a_in.as_signed();
  const Matrix b = b_in.as_signed();
  check_product_shapes(a, b);
  check_divisibility(a, b, levels);
  return wrap_result(vmul_blocked(values_of(a), values_of(b), levels), a, b);
}

Matrix matmul_strassen(const Matrix& a_in, const Matrix& b_in, int levels,
                       uint64_t* leaf_mults) {
  const Matrix a = a_in.as_signed();
  const Matrix b = b_in.as_signed();
  check_product_shapes(a, b);
  check_divisibility(a, b, levels);
  if (leaf_mults) *leaf_mults = 0;
  return wrap_result(vmul_strassen(values_of(a), values_of(b), levels, leaf_mults), a, b);
}

namespace {

void check_ops_n(int64_t n, bool needs_even) {
  if (n < 1 || n > (int64_t{1} << 20)) {
    throw std::invalid_argument("op counts support 1 <= n <= 2^20");
  }
  if (needs_even && n % 2) {
    throw std::invalid_argument("one-level split requires even n");
  }
}

OpCount make_ops(int64_t mults, int64_t adds) { return {mults, adds, mults + adds}; }

}  // namespace

OpCount ops_conventional(int64_t n) {
  check_ops_n(n, false);
  return make_ops(n * n * n, n * n * (n - 1));
}

OpCount ops_strassen_1(int64_t n) {
  check_ops_n(n, true);
  const int64_t h = n / 2;
  return make_ops(7 * n * n * n / 8, 7 * n * n * (h - 1) / 4 + 18 * h * h);
}

OpCount ops_winograd_1(int64_t n) {
  check_ops_n(n, true);
  const int64_t h = n / 2;
  return make_ops(7 * n * n * n / 8, 7 * n * n * (h - 1) / 4 + 15 * h * h);
}

}  // namespace smm
