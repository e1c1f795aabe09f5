#pragma once

#include <iosfwd>
#include <string>

#include "smm/matrix.hpp"

namespace smm {

// Matrix CSV format.  Lines starting with '#' are comments; the first data
// line carries the shape and element type, and each following line is one
// matrix row:
//
//   # rows,cols,width,signed
//   2,3,8,1
//   1,-2,3
//   4,5,-6
//
// `signed` is 1 or 0.  Values must fit the declared width; the reader throws
// std::invalid_argument otherwise and on any shape mismatch.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv_file(const std::string& path);

void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv_file(const std::string& path, const Matrix& m);

}  // namespace smm
