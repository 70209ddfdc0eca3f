#pragma once

#include <string>
#include <vector>

#include "orlicz/extended.hpp"

namespace orlicz {

/// Outcome of a numeric certification over a finite sample.
struct CheckReport {
  std::string name;
  bool pass = false;
  Extended constant;              // fitted constant (C, k, C_rho, epsilon, ...)
  std::vector<double> witnesses;  // points where the constant is attained / violated
  std::string detail;
};

}  // namespace orlicz
