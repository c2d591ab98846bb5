// Copyright 2026 The madiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "madiff/errors.hpp"

namespace madiff::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> dataset_header(int m, int p) {
  std::vector<std::string> out;
  for (int k = 1; k <= p; ++k)
    for (int r = 1; r <= m; ++r) out.push_back("n" + std::to_string(k) + "_a" + std::to_string(r));
  return out;
}

CsvTable read_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string where = path.string() + ":";

  CsvTable table;
  std::vector<double> flat;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (has_header && line_no == 1) {
      for (auto f : fields) table.header.emplace_back(f);
      cols = fields.size();
      continue;
    }
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw ParseError(where + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      const auto f = fields[c];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(where + std::to_string(line_no) + ": field " + std::to_string(c + 1) +
                         " is not a number: '" + std::string(f) + "'");
      }
      flat.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(where + std::to_string(line_no) + ": no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          flat[r * cols + c];
  return table;
}

void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  if (!header.empty()) out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      out << (c ? "," : "") << format_double(values(r, c));
    out << '\n';
  }
  write_text(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace madiff::cli
