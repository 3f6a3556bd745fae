#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "selfadj/potential.hpp"

namespace selfadj::proptest {

/// Seeded source for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// A potential on (0, inf) that is smooth on [0.25, 8]: constant,
  /// inverse-square, inverse-square plus constant, or a table on [0.1, 10].
  Potential regular_potential() {
    switch (integer(0, 3)) {
      case 0:
        return Potential::constant(uniform(-2.0, 2.0));
      case 1:
        return Potential::inverse_square(uniform(0.0, 2.0));
      case 2: {
        const Potential is = Potential::inverse_square(uniform(0.0, 2.0));
        return Potential::sum({is, Potential::constant(uniform(-1.0, 1.0), is.domain())});
      }
      default: {
        std::vector<double> xs, vs;
        for (int i = 0; i <= 20; ++i) {
          xs.push_back(0.1 + 0.495 * i);
          vs.push_back(uniform(-2.0, 2.0));
        }
        return Potential::tabulated(xs, vs, Interval(0.0, kInfinity));
      }
    }
  }

  /// Fractional flux values avoid the integer lattice by at least 1e-3.
  double flux() {
    const double n = integer(-4, 4);
    return n + uniform(1e-3, 1.0 - 1e-3);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace selfadj::proptest
