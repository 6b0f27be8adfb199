#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mix/types.hpp"

namespace mix::cli {

/// Shortest text that round-trips a double; NaN becomes an empty field.
std::string format_number(double x);

/// Column CSV with a header row.
void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<Vec>& columns);

/// (x1, x2, value) rows for a grid kernel, blank line between x1 blocks, every `stride`-th point.
void write_kernel(const std::filesystem::path& path, const std::string& value_name, const Vec& x, const Mat& kernel,
                  int stride);

void write_text(const std::filesystem::path& path, const std::string& text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty fields read as NaN

  int column(const std::string& name) const;
  Vec values(const std::string& name) const;
};

Table read_table(const std::filesystem::path& path);

}  // namespace mix::cli
