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

#include "egonet/csv.hpp"

#include <charconv>
#include <cmath>

#include "egonet/error.hpp"

namespace egonet::csv {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

namespace {

void split(std::string_view line, std::vector<std::string_view>& fields) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

std::size_t Reader::expect_header(const std::vector<std::vector<std::string_view>>& alternatives) {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (blank(buffer_)) continue;
    std::string_view text = buffer_;
    if (line_ == 1 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<std::string_view> fields;
    split(text, fields);
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
      if (fields == alternatives[i]) return i;
    }
    std::string expected;
    for (std::string_view column : alternatives.front()) {
      if (!expected.empty()) expected += ',';
      expected += column;
    }
    throw Error(ErrorCode::parse, "unexpected header, expected '" + expected + "'", line_);
  }
  throw Error(ErrorCode::parse, "missing header row", line_ == 0 ? 1 : line_);
}

bool Reader::next(std::vector<std::string_view>& fields) {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (blank(buffer_)) continue;
    if (buffer_.find('"') != std::string::npos) {
      throw Error(ErrorCode::parse, "quoted fields are not supported", line_);
    }
    split(buffer_, fields);
    return true;
  }
  return false;
}

std::uint64_t parse_u64(std::string_view text, std::size_t line, std::string_view column) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::parse,
                "column '" + std::string(column) + "': expected a non-negative integer, got '" +
                    std::string(text) + "'",
                line);
  }
  return value;
}

double parse_double(std::string_view text, std::size_t line, std::string_view column) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::parse,
                "column '" + std::string(column) + "': expected a number, got '" +
                    std::string(text) + "'",
                line);
  }
  return value;
}

void append_double(std::string& out, double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

void append_u64(std::string& out, std::uint64_t value) {
  char buf[24];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

std::string format_double(double value) {
  std::string out;
  append_double(out, value);
  return out;
}

Writer::Writer(std::ostream& out, std::initializer_list<std::string_view> header) : out_(out) {
  for (std::string_view column : header) cell(column);
  end_row();
}

Writer& Writer::cell(std::string_view text) {
  if (!first_) row_ += ',';
  row_ += text;
  first_ = false;
  return *this;
}

Writer& Writer::cell(double value) {
  if (!first_) row_ += ',';
  append_double(row_, value);
  first_ = false;
  return *this;
}

Writer& Writer::cell(std::uint64_t value) {
  if (!first_) row_ += ',';
  append_u64(row_, value);
  first_ = false;
  return *this;
}

void Writer::end_row() {
  row_ += '\n';
  out_ << row_;
  row_.clear();
  first_ = true;
}

}  // namespace egonet::csv
