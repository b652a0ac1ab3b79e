#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sstvrp {

using Minute = int;    // discrete time, one-minute step
using NodeId = int;    // index into a node table
using Money = double;  // dollars

// Primitive costs are snapped to multiples of 2^-20 dollars when first
// computed. Sums of such values at this problem's magnitudes stay exactly
// representable, so totals accumulated in different orders compare equal.
inline Money quantize_cost(double raw) {
  return std::nearbyint(raw * 1048576.0) / 1048576.0;
}

inline Money money_infinity() { return std::numeric_limits<double>::infinity(); }

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class GenerationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class StructuralError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mt19937_64 with pinned int/real mappings; seeded fixtures are identical
// across standard libraries (std::uniform_*_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform double in [lo, hi)
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  // uniform integer in [lo, hi], inclusive
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sstvrp
