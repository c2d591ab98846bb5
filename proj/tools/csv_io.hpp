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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

/// Plain-text matrix I/O for the command-line tool. Numbers are written in
/// shortest round-trip form so rereading a file reproduces every bit.
namespace madiff::cli {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Header `n1_a1,...,n1_am,n2_a1,...`, then one sample per row.
std::vector<std::string> dataset_header(int m, int p);

struct CsvTable {
  std::vector<std::string> header;  // empty when read without a header
  Eigen::MatrixXd values;
};

/// Parses comma-separated numbers. With `has_header` the first line is taken
/// as column names. Throws IoError if the file cannot be opened and ParseError
/// naming the file and 1-based line on malformed content.
CsvTable read_csv(const std::filesystem::path& path, bool has_header);

/// Writes `values` row by row, preceded by `header` when it is nonempty.
/// Throws IoError naming the path on failure.
void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header = {});

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace madiff::cli
