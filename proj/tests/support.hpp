#pragma once

#include <cmath>
#include <random>

#include "heis/group.hpp"
#include "heis/verify.hpp"

namespace heis::test {

/// Seeded uniform draws shared by the property tests.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double operator()(double lo, double hi) { return lo + (hi - lo) * uniform01(rng_); }
  GroupPoint point(double box) { return {(*this)(-box, box), (*this)(-box, box), (*this)(-box, box)}; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double distance(const GroupPoint& a, const GroupPoint& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

inline double distance(const Tangent& a, const Tangent& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

inline double distance(const Covector& a, const Covector& b) {
  return std::sqrt((a.h1 - b.h1) * (a.h1 - b.h1) + (a.h2 - b.h2) * (a.h2 - b.h2) + (a.h3 - b.h3) * (a.h3 - b.h3));
}

}  // namespace heis::test
