#include "mix/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mix/error.hpp"

namespace mix::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<Vec>& columns) {
  if (header.size() != columns.size()) throw ShapeError("header and column counts differ");
  std::string text;
  for (std::size_t c = 0; c < header.size(); ++c) text += (c ? "," : "") + header[c];
  text += '\n';
  const Eigen::Index rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns)
    if (col.size() != rows) throw ShapeError("columns have different lengths");
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) text += ',';
      text += format_number(columns[c][r]);
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_kernel(const std::filesystem::path& path, const std::string& value_name, const Vec& x, const Mat& kernel,
                  int stride) {
  if (stride < 1) throw Error("stride must be positive");
  std::string text = "x1,x2," + value_name + "\n";
  for (Eigen::Index a = 0; a < kernel.rows(); a += stride) {
    if (a) text += '\n';
    for (Eigen::Index b = 0; b < kernel.cols(); b += stride) {
      text += format_number(x[a]) + ',' + format_number(x[b]) + ',' + format_number(kernel(a, b)) + '\n';
    }
  }
  write_text(path, text);
}

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw IndexError("no column '" + name + "'");
}

Vec Table::values(const std::string& name) const {
  const int c = column(name);
  Vec out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[static_cast<Eigen::Index>(r)] = rows[r][static_cast<std::size_t>(c)];
  return out;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      double v = std::numeric_limits<double>::quiet_NaN();
      if (!cell.empty()) {
        const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (r.ec != std::errc()) v = std::numeric_limits<double>::quiet_NaN();
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (row.size() != t.header.size()) throw ShapeError(path.string() + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace mix::cli
