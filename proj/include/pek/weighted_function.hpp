// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <functional>
#include <string>
#include <utility>

#include "pek/common.hpp"

namespace pek {

// Real-valued function with an explicit support interval; evaluates to zero
// outside the support. Carrier for ensemble weights and dual functions.
class WeightedFunction {
 public:
  WeightedFunction() = default;

  WeightedFunction(std::function<double(double)> f, Interval support, std::string tag = {})
      : f_(std::move(f)), support_(support), tag_(std::move(tag)) {}

  double operator()(double x) const {
    if (!f_ || !support_.contains(x)) return 0.0;
    return f_(x);
  }

  const Interval& support() const { return support_; }
  const std::string& tag() const { return tag_; }
  bool valid() const { return static_cast<bool>(f_); }

 private:
  std::function<double(double)> f_;
  Interval support_;
  std::string tag_;
};

}  // namespace pek
