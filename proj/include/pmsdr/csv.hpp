#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pmsdr/numlin.hpp"

namespace pmsdr {

/// Numeric comma-separated table with a required header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Reads record-delimited batches: one header line, then blocks of rows
/// separated by blank lines. A block may repeat the header line.
class CsvChunkReader {
 public:
  explicit CsvChunkReader(std::istream& in);
  std::optional<CsvTable> next();
  const std::vector<std::string>& header() const { return header_; }

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

struct Dataset {
  Matrix x;
  Vector y;
  std::vector<std::string> predictors;
  std::string response;
};

/// Splits off the response column, chosen by header name or 1-based index.
Dataset split_response(const CsvTable& table, std::string_view selector);

/// Writes a header and the rows of `values` with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values);

}  // namespace pmsdr
