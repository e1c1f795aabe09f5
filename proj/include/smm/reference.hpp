#pragma once
// Golden matrix-multiply references and scalar-operation cost model.
//
// matmul_naive is the correctness oracle for everything else in the project.
// The blocked and Strassen variants recurse on quadrants:
//
//   blocked:   C11 = A11 B11 + A12 B21   (and symmetrically), 8 sub-products
//   strassen:  T1..T7 / S1..S7 sums of A / B quadrants, Q_i = T_i S_i,
//              C11 = Q1 + Q4 - Q5 + Q7      C12 = Q3 + Q5
//              C21 = Q2 + Q4                C22 = Q1 - Q2 + Q3 + Q6
//              with T = (A11+A22, A21+A22, A11, A22, A11+A12, A21-A11, A12-A22)
//                   S = (B11+B22, B11, B12-B22, B21-B11, B22, B11+B12, B21+B22)
//
// Both produce values identical to naive; strassen trades one sub-product per
// level for extra quadrant additions.

#include <cstdint>

#include "smm/matrix.hpp"

namespace smm {

/// Triple-loop reference product. Unsigned operands are taken as signed one
/// bit wider (the hardware convention). Result element width is then
/// a.elem_width + b.elem_width + ceil_log2(K) so the widest possible dot
/// product fits.
Matrix matmul_naive(const Matrix& a, const Matrix& b);

/// Conventional block recursion, `levels` quadrant splits then naive leaves.
/// All of a.rows, a.cols, b.cols must be divisible by 2^levels.
Matrix matmul_blocked(const Matrix& a, const Matrix& b, int levels);

/// Strassen recursion, `levels` deep, naive leaves. Same divisibility rule.
/// When `leaf_mults` is given it receives the number of scalar
/// multiplications executed in the leaves: 7^levels * (m k n / 8^levels).
Matrix matmul_strassen(const Matrix& a, const Matrix& b, int levels,
                       uint64_t* leaf_mults = nullptr);

/// Scalar multiply/add cost of one n x n product under a given algorithm.
struct OpCount {
  int64_t mults = 0;
  int64_t adds = 0;
  int64_t total = 0;  // always mults + adds
};

/// n^3 multiplies, n^2 (n-1) additions.
OpCount ops_conventional(int64_t n);

/// One Strassen level over conventional halves: 7n^3/8 multiplies,
/// 7 n^2 (n/2 - 1) / 4 inner additions plus 18 (n/2)^2 quadrant additions
/// (18 addition vectors of (n/2)^2 scalar adds each). Even n only.
OpCount ops_strassen_1(int64_t n);

/// Winograd's variant of the same level: 15 quadrant addition vectors
/// instead of 18. Even n only.
OpCount ops_winograd_1(int64_t n);

}  // namespace smm
