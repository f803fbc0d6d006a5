#pragma once

#include <vector>

#include "heis/group.hpp"

namespace heis {

struct Sample {
  double t{0.0};
  GroupPoint q;
  Covector h;  // meaningful only when the owning trajectory has_covector
  Control u;
  double length{0.0};  // accumulated Lorentzian length J(t)
};

/// Time-sampled admissible trajectory. Samples start at t = 0 with strictly
/// increasing times and nondecreasing length.
struct Trajectory {
  Problem problem{Problem::P1};
  bool has_covector{false};
  std::vector<Sample> samples;

  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
  GroupPoint endpoint() const { return samples.back().q; }
  double total_length() const { return samples.back().length; }
};

}  // namespace heis
