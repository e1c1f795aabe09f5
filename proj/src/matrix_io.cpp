#include "smm/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace smm {

namespace {

[[noreturn]] void bad(const std::string& why) {
  throw std::invalid_argument("malformed matrix csv: " + why);
}

// Next non-comment, non-blank line; false at end of stream.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    return true;
  }
  return false;
}

std::vector<int64_t> parse_row(const std::string& line) {
  std::vector<int64_t> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t used = 0;
    int64_t v = 0;
    try {
      v = std::stoll(cell, &used);
    } catch (const std::exception&) {
      bad("\"" + cell + "\" is not an integer");
    }
    while (used < cell.size() &&
           (cell[used] == ' ' || cell[used] == '\t')) {
      ++used;
    }
    if (used != cell.size()) bad("\"" + cell + "\" is not an integer");
    values.push_back(v);
  }
  if (values.empty()) bad("empty row");
  return values;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) bad("missing header line");
  const std::vector<int64_t> header = parse_row(line);
  if (header.size() != 4) bad("header must be rows,cols,width,signed");
  const int64_t rows = header[0];
  const int64_t cols = header[1];
  const int64_t width = header[2];
  const int64_t sign_flag = header[3];
  if (rows < 1 || rows > 65536 || cols < 1 || cols > 65536) {
    bad("shape out of range");
  }
  if (width < 1 || width > 62) bad("width out of range");
  if (sign_flag != 0 && sign_flag != 1) bad("signed must be 0 or 1");

  std::vector<int64_t> values;
  values.reserve(size_t(rows) * size_t(cols));
  for (int64_t i = 0; i < rows; ++i) {
    if (!next_data_line(in, line)) bad("fewer rows than declared");
    const std::vector<int64_t> row = parse_row(line);
    if (int64_t(row.size()) != cols) {
      bad("row " + std::to_string(i) + " has " + std::to_string(row.size()) +
          " values, expected " + std::to_string(cols));
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  if (next_data_line(in, line)) bad("more rows than declared");

  try {
    return Matrix::from_values(int(rows), int(cols), values, int(width),
                               sign_flag == 1);
  } catch (const OverflowError& e) {
    bad(e.what());
  }
}

Matrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << "# rows,cols,width,signed\n";
  out << m.rows << "," << m.cols << "," << m.elem_width << ","
      << (m.is_signed ? 1 : 0) << "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ",";
      out << m.value_at(i, j);
    }
    out << "\n";
  }
}

void write_matrix_csv_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open \"" + path + "\"");
  write_matrix_csv(out, m);
  if (!out) throw std::runtime_error("failed writing \"" + path + "\"");
}

}  // namespace smm
