#include "pmsdr/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "pmsdr/error.hpp"

namespace pmsdr {

namespace {

constexpr const char* kModule = "csv";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> parse_header(std::string_view line) {
  std::vector<std::string> header;
  for (auto field : split(line)) {
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"')
      field = field.substr(1, field.size() - 2);
    header.emplace_back(field);
  }
  return header;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

void parse_row(std::string_view line, std::size_t width, std::size_t line_no, Vector& out) {
  const auto fields = split(line);
  if (fields.size() != width)
    throw InputError(kModule, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width) + " fields, found " +
                                  std::to_string(fields.size()));
  for (auto f : fields) {
    double v = 0.0;
    if (!f.empty() && f.front() == '+') f.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size())
      throw InputError(kModule, "line " + std::to_string(line_no) + ": '" + std::string(f) +
                                    "' is not a number");
    out.push_back(v);
  }
}

Matrix to_matrix(const Vector& flat, std::size_t width) {
  Matrix m(flat.size() / width, width);
  std::copy(flat.begin(), flat.end(), m.data().begin());
  return m;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvChunkReader reader(in);
  CsvTable table;
  Vector flat;
  while (auto chunk = reader.next()) {
    flat.insert(flat.end(), chunk->values.data().begin(), chunk->values.data().end());
  }
  table.header = reader.header();
  if (table.header.empty()) throw InputError(kModule, "missing header row");
  table.values = to_matrix(flat, table.header.size());
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(kModule, "cannot open '" + path + "'");
  return read_csv(in);
}

CsvChunkReader::CsvChunkReader(std::istream& in) : in_(in) {}

std::optional<CsvTable> CsvChunkReader::next() {
  std::string line;
  if (header_.empty()) {
    while (std::getline(in_, line)) {
      ++line_;
      if (!is_blank(line)) break;
    }
    if (is_blank(line)) return std::nullopt;
    header_ = parse_header(trim(line));
  }
  Vector flat;
  bool started = false;
  while (std::getline(in_, line)) {
    ++line_;
    if (is_blank(line)) {
      if (started) break;
      continue;
    }
    if (!started && parse_header(trim(line)) == header_) continue;
    started = true;
    parse_row(line, header_.size(), line_, flat);
  }
  if (!started) return std::nullopt;
  return CsvTable{header_, to_matrix(flat, header_.size())};
}

Dataset split_response(const CsvTable& table, std::string_view selector) {
  std::size_t col = table.header.size();
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (table.header[j] == selector) col = j;
  if (col == table.header.size()) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), idx);
    if (ec == std::errc() && ptr == selector.data() + selector.size() && idx >= 1 &&
        idx <= table.header.size())
      col = idx - 1;
  }
  if (col == table.header.size())
    throw InputError(kModule, "response column '" + std::string(selector) + "' not found");

  Dataset d;
  d.response = table.header[col];
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (j != col) d.predictors.push_back(table.header[j]);
  const std::size_t n = table.values.rows();
  d.x = Matrix(n, table.header.size() - 1);
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (j == col) d.y[i] = table.values(i, j);
      else d.x(i, out++) = table.values(i, j);
    }
  }
  return d;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace pmsdr
