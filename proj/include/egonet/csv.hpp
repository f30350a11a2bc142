// Copyright 2026 The egonet Authors.
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

#ifndef EGONET_CSV_HPP
#define EGONET_CSV_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace egonet::csv {

// Line-oriented reader for the plain comma-separated inputs: no quoting,
// header row mandatory, trailing CR tolerated, blank lines skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the header and checks it against the accepted column lists.
  // Returns the index of the matching alternative.
  std::size_t expect_header(const std::vector<std::vector<std::string_view>>& alternatives);

  // Next data row split on commas; false at end of input.
  bool next(std::vector<std::string_view>& fields);

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_ = 0;
};

std::uint64_t parse_u64(std::string_view text, std::size_t line, std::string_view column);
double parse_double(std::string_view text, std::size_t line, std::string_view column);
std::string_view trim(std::string_view text);

// Shortest representation that round-trips; locale independent.
std::string format_double(double value);
void append_double(std::string& out, double value);
void append_u64(std::string& out, std::uint64_t value);

// Writes a header then rows, joining cells with commas.
class Writer {
 public:
  Writer(std::ostream& out, std::initializer_list<std::string_view> header);

  Writer& cell(std::string_view text);
  Writer& cell(double value);
  Writer& cell(std::uint64_t value);
  Writer& cell(int value) { return cell(static_cast<std::uint64_t>(value)); }
  Writer& empty() { return cell(std::string_view{}); }
  Writer& cell(const std::optional<double>& value) {
    return value ? cell(*value) : empty();
  }
  void end_row();

 private:
  std::ostream& out_;
  std::string row_;
  bool first_ = true;
};

}  // namespace egonet::csv

#endif  // EGONET_CSV_HPP
