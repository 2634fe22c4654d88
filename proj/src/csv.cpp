#include "cmvc/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cmvc/error.hpp"

namespace cmvc {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  // skip trailing spaces
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE || !std::isfinite(v)) {
    throw DataError("non-numeric cell at row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": '" + cell + "'");
  }
  return v;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int file_row = 0;
  std::size_t width = 0;
  bool skipped_header = false;
  while (std::getline(in, line)) {
    ++file_row;
    if (has_header && !skipped_header) {
      skipped_header = true;
      continue;
    }
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
    auto cells = split_line(line);
    if (rows.empty()) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw DataError("ragged row at row " + std::to_string(file_row) + ": expected " +
                      std::to_string(width) + " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> vals(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      vals[c] = parse_cell(cells[c], file_row, static_cast<int>(c) + 1);
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw DataError("no rows in file: " + path);

  Matrix m(static_cast<int>(rows.size()), static_cast<int>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

ViewMatrix load_view_csv(const std::string& path, bool has_header, int view_index) {
  return ViewMatrix{load_matrix_csv(path, has_header), view_index};
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const char* begin = line.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    while (end && (*end == ' ' || *end == '\r')) ++end;
    if (end == begin || (end && *end != '\0'))
      throw DataError("non-integer label at line " + std::to_string(row) + ": '" + line + "'");
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) throw DataError("no rows in labels file: " + path);
  return labels;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (int v : labels) out << v << '\n';
}

}  // namespace cmvc
