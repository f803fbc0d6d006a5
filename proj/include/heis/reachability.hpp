#pragma once

#include <optional>

#include "heis/group.hpp"
#include "heis/ode_oracle.hpp"

namespace heis {

/// Tolerance of the boundary comparison |z| = (t + sinh t) / 2, scaled by max(1, bound).
inline constexpr double kBoundaryTolerance = 1e-9;
/// Endpoint accuracy the P1 planner is held to.
inline constexpr double kPlanTolerance = 1e-6;

enum class Verdict { Interior, Boundary, Outside };

struct Membership {
  Verdict verdict{Verdict::Outside};
  /// |z| - (t + sinh t) / 2 when z != 0, x - |y| when z = 0; absent when x^2 < y^2 and z != 0.
  std::optional<double> witness;
};

/// arcosh((x^2 - y^2) / 2 + 1), absent when x^2 < y^2.
std::optional<double> boundary_time(double x, double y);

/// (t + sinh t) / 2
double z_bound(double t);

/// Attainable set of the second problem from the identity:
///   { 0 < |z| <= (t + sinh t) / 2, t = arcosh((x^2 - y^2) / 2 + 1) }  U  { x >= |y|, z = 0 }.
/// The first clause is applied literally, so it also admits mirror points with
/// x < 0 that no admissible trajectory reaches (x' = u1 >= 0).
Membership membership_p2(const GroupPoint& q);

/// Radius of a clockwise unit-speed lightlike P1 circle that changes z by
/// dz < 0 (dz = pi R (2 - R) per loop).
double lightlike_loop_radius(double dz);

/// Admissible P1 schedule from the identity to q1: a lightlike ray to
/// (x1, y1, |(x1, y1)|), then either a vertical timelike segment or one
/// clockwise lightlike loop to fix z.
ControlSchedule plan_reach_p1(const GroupPoint& q1);

/// One closed P1 loop of length exactly 1: vertical timelike segment of
/// duration 1 followed by a clockwise lightlike loop removing the gained z.
ControlSchedule unit_timelike_loop_p1();

/// ceil(j_min) repetitions of the unit loop (at least one); returns to the start.
ControlSchedule closed_timelike_loop_p1(double j_min);

/// Trajectory from the identity to q1 with length >= min_length: the planner
/// followed by closed loops at q1.
ControlSchedule long_trajectory_p1(const GroupPoint& q1, double min_length);

std::string to_string(Verdict verdict);

}  // namespace heis
