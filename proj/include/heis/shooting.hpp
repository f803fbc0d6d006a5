#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/extremals.hpp"
#include "heis/group.hpp"

namespace heis {

/// Endpoint accuracy required from the exponential-map inversion.
inline constexpr double kShootTolerance = 1e-8;

struct ShootingOptions {
  std::vector<double> radii{0.0, 0.5, 1.0, 2.0, 4.0};
  std::size_t angles{8};
  std::vector<double> durations{0.5, 1.0, 2.0, 5.0, 10.0};
  std::size_t max_iterations{100};
  double fd_step{1e-6};
  double tolerance{kShootTolerance};
};

/// Maximizer of the Lorentzian length from the identity to a P2 target.
/// For interior targets `spec` is a unit-speed normal extremal and
/// distance = spec.duration; for boundary targets it is the lightlike
/// abnormal extremal and distance = 0.
struct ShootingResult {
  ExtremalSpec spec;
  double endpoint_error{0.0};
  double distance{0.0};
  std::size_t iterations{0};
  /// Every distinct converged normal extremal, longest first.
  std::vector<ExtremalSpec> solutions;
};

class ShootingError : public std::runtime_error {
 public:
  ShootingError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Inverts the P2 exponential map. Interior targets with z != 0 are solved by
/// damped Newton on (h2_0, h3, log t1), multi-started over `options`' grid.
/// Throws ShootingError for Outside targets, unreachable mirror points
/// (x < 0) and when no start converges.
ShootingResult shoot_p2(const GroupPoint& q1, const ShootingOptions& options = {});

enum class DistanceKind { Finite, Infinite, Undefined };

struct DistanceResult {
  DistanceKind kind{DistanceKind::Undefined};
  double value{0.0};
  std::optional<ShootingResult> maximizer;
  std::string note;
};

/// Outside -> Undefined, Boundary -> 0, Interior -> shoot_p2 distance.
DistanceResult lorentz_distance_p2(const GroupPoint& q1, const ShootingOptions& options = {});

/// Every pair of points of the first problem is at distance +infinity.
DistanceResult lorentz_distance_p1(const GroupPoint& q1);

std::string to_string(DistanceKind kind);

}  // namespace heis
