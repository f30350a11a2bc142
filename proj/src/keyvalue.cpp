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

#include "egonet/keyvalue.hpp"

#include <charconv>
#include <fstream>

#include "egonet/csv.hpp"
#include "egonet/error.hpp"

namespace egonet {

KeyValueFile KeyValueFile::parse(std::istream& in) {
  KeyValueFile file;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = csv::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::config, "expected key=value", line);
    }
    std::string key(csv::trim(text.substr(0, eq)));
    std::string value(csv::trim(text.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorCode::config, "empty key", line);
    if (file.values_.count(key)) throw Error(ErrorCode::config, "duplicate key '" + key + "'", line);
    file.lines_[key] = line;
    file.values_.emplace(std::move(key), std::move(value));
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  return parse(in);
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueFile::get_double(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  try {
    return csv::parse_double(it->second, lines_.at(key), key);
  } catch (const Error& e) {
    throw Error(ErrorCode::config, e.what());
  }
}

std::optional<std::int64_t> KeyValueFile::get_int(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  std::int64_t value = 0;
  const std::string& text = it->second;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::config, "key '" + key + "': expected an integer, got '" + text + "'",
                lines_.at(key));
  }
  return value;
}

void KeyValueFile::reject_unknown(std::initializer_list<std::string_view> known) const {
  for (const auto& [key, value] : values_) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || k == key;
    if (!ok) throw Error(ErrorCode::config, "unknown key '" + key + "'", lines_.at(key));
  }
}

}  // namespace egonet
