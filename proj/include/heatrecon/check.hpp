#pragma once

#include <string>

namespace heatrecon {

// Outcome of one self-check: the measured quantity against its threshold.
struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

std::string format_check(const CheckResult& r);

}  // namespace heatrecon
