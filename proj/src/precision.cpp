#include "heatrecon/precision.hpp"

#include <stdexcept>

namespace heatrecon {

Arithmetic choose_arithmetic(double required_digits) {
  if (required_digits <= 14.0) return Arithmetic::standard;
  if (required_digits <= 46.0) return Arithmetic::extended50;
  return Arithmetic::extended100;
}

int arithmetic_digits(Arithmetic a) {
  switch (a) {
    case Arithmetic::standard: return 15;
    case Arithmetic::extended50: return 50;
    case Arithmetic::extended100: return 100;
    case Arithmetic::automatic: break;
  }
  throw std::invalid_argument("automatic arithmetic has no fixed digit count");
}

std::string to_string(Arithmetic a) {
  switch (a) {
    case Arithmetic::automatic: return "auto";
    case Arithmetic::standard: return "double";
    case Arithmetic::extended50: return "mp50";
    case Arithmetic::extended100: return "mp100";
  }
  return "?";
}

Arithmetic parse_arithmetic(const std::string& s) {
  if (s == "auto") return Arithmetic::automatic;
  if (s == "double") return Arithmetic::standard;
  if (s == "mp50") return Arithmetic::extended50;
  if (s == "mp100") return Arithmetic::extended100;
  throw std::invalid_argument("unknown arithmetic '" + s + "' (auto|double|mp50|mp100)");
}

}  // namespace heatrecon
