// Copyright 2026 The rsmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSM_CSV_HPP_
#define RSM_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rsm::csv {

// Minimal RFC-4180-ish table: comma separator, '.' decimal, optional double
// quotes around fields, first row is the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool has_column(std::string_view name) const;
  // Index of `name`; throws SchemaError naming the missing column.
  std::size_t column(std::string_view name) const;
  // Parses a numeric cell; throws SchemaError naming the row and column.
  double number(std::size_t row, std::size_t col) const;
};

Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

void write_row(std::ostream& out, const std::vector<std::string>& fields);
// Shortest decimal representation that round-trips exactly.
std::string format(double value);

}  // namespace rsm::csv

#endif  // RSM_CSV_HPP_
