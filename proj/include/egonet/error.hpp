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

#ifndef EGONET_ERROR_HPP
#define EGONET_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace egonet {

enum class ErrorCode {
  parse,             // malformed input row or file
  validation,        // well-formed input that breaks a data invariant
  io,                // file missing or unreadable/unwritable
  config,            // malformed configuration
  inactive_link,     // window counts with n4 == 0
  range,             // argument outside its admissible interval
  arity,             // k larger than the number of values
  degenerate_ego,    // ego network with no positive frequency
  no_link,           // pair never exchanged a mention or reply
  zero_variance,     // regression on a constant regressor
  insufficient_data, // too few samples for a statistic
  no_eligible_egos,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `line()` is set for errors that
// originate from a specific input row (1-based, header is line 1).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace egonet

#endif  // EGONET_ERROR_HPP
