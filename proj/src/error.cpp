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

#include "egonet/error.hpp"

namespace egonet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::io: return "io_error";
    case ErrorCode::config: return "config_error";
    case ErrorCode::inactive_link: return "inactive_link";
    case ErrorCode::range: return "range_error";
    case ErrorCode::arity: return "arity_error";
    case ErrorCode::degenerate_ego: return "degenerate_ego";
    case ErrorCode::no_link: return "no_link";
    case ErrorCode::zero_variance: return "zero_variance";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::no_eligible_egos: return "no_eligible_egos";
  }
  return "unknown_error";
}

namespace {

std::string decorate(const std::string& message, std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(decorate(message, line)), code_(code), line_(line) {}

}  // namespace egonet
