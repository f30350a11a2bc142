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

#ifndef EGONET_NUMERIC_HPP
#define EGONET_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace egonet {

// Neumaier-compensated running sum. Results depend only on the order of
// additions, so reductions performed in a fixed order are reproducible.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Mean with a normal-approximation 95% confidence half-width.
struct Estimate {
  double mean = 0.0;
  double ci95 = 0.0;
  std::size_t n = 0;
};

class MeanAccumulator {
 public:
  void add(double x) {
    ++n_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  std::size_t count() const { return n_; }
  Estimate estimate() const {
    Estimate e;
    e.n = n_;
    if (n_ == 0) return e;
    const double n = static_cast<double>(n_);
    e.mean = sum_.value() / n;
    if (n_ > 1) {
      const double var = std::max(0.0, (sum_sq_.value() - n * e.mean * e.mean) / (n - 1.0));
      e.ci95 = 1.959963984540054 * std::sqrt(var / n);
    }
    return e;
  }

 private:
  std::size_t n_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

}  // namespace egonet

#endif  // EGONET_NUMERIC_HPP
