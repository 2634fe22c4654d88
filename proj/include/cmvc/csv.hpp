#pragma once

#include <string>
#include <vector>

#include "cmvc/rng.hpp"

namespace cmvc {

// One view of the stream: n samples by d features, 1-based view index.
struct ViewMatrix {
  Matrix data;
  int view_index = 1;

  int samples() const { return static_cast<int>(data.rows()); }
  int features() const { return static_cast<int>(data.cols()); }
};

// Comma-separated, '.' decimal point, optional single header row.
// Throws DataError with row/column positions on malformed input.
Matrix load_matrix_csv(const std::string& path, bool has_header);

ViewMatrix load_view_csv(const std::string& path, bool has_header, int view_index = 1);

// One integer label per line, n lines.
std::vector<int> load_labels(const std::string& path);

// Values written with 17 significant digits (round-trip exact for doubles).
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_labels(const std::string& path, const std::vector<int>& labels);

}  // namespace cmvc
