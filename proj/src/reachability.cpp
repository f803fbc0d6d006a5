#include "heis/reachability.hpp"

#include <cmath>
#include <numbers>

namespace heis {

std::optional<double> boundary_time(double x, double y) {
  const double diff = (x - y) * (x + y);
  if (diff < 0.0) return std::nullopt;
  // arcosh(1 + d) = log1p(d + sqrt(d (2 + d))), accurate near d = 0.
  const double d = 0.5 * diff;
  return std::log1p(d + std::sqrt(d * (2.0 + d)));
}

double z_bound(double t) { return 0.5 * (t + std::sinh(t)); }

Membership membership_p2(const GroupPoint& q) {
  if (std::abs(q.z) <= kBoundaryTolerance) {
    const double slack = q.x - std::abs(q.y);
    if (std::abs(slack) <= kBoundaryTolerance * std::max(1.0, std::abs(q.x))) {
      return {Verdict::Boundary, slack};
    }
    return {slack > 0.0 ? Verdict::Interior : Verdict::Outside, slack};
  }
  const std::optional<double> t = boundary_time(q.x, q.y);
  if (!t) return {Verdict::Outside, std::nullopt};
  const double bound = z_bound(*t);
  const double slack = std::abs(q.z) - bound;
  if (std::abs(slack) <= kBoundaryTolerance * std::max(1.0, bound)) {
    return {Verdict::Boundary, slack};
  }
  return {slack < 0.0 ? Verdict::Interior : Verdict::Outside, slack};
}

double lightlike_loop_radius(double dz) {
  if (!(dz < 0.0)) {
    throw DomainError("lightlike_loop_radius: a clockwise loop is only used to decrease z");
  }
  // pi R (2 - R) = dz  =>  R = 1 + sqrt(1 - dz / pi)  (the root with R > 2).
  return 1.0 + std::sqrt(1.0 - dz / std::numbers::pi);
}

namespace {

ControlSchedule clockwise_loop(double dz) {
  const double radius = lightlike_loop_radius(dz);
  return {{{2.0 * std::numbers::pi * radius, RotatingControl{1.0, 0.0, -1.0 / radius, 1.0}}}};
}

}  // namespace

ControlSchedule plan_reach_p1(const GroupPoint& q1) {
  if (!std::isfinite(q1.x) || !std::isfinite(q1.y) || !std::isfinite(q1.z)) {
    throw DomainError("plan_reach_p1: target must be finite");
  }
  ControlSchedule plan;
  const double reach = std::hypot(q1.x, q1.y);
  // Along a ray from the identity x y' - y x' = 0, so z grows at rate u3 = 1.
  if (reach > 0.0) {
    plan.pieces.push_back({reach, Control{q1.x / reach, q1.y / reach, 1.0}});
  }
  const double dz = q1.z - reach;
  if (dz > 0.0) {
    plan.pieces.push_back({dz, Control{0.0, 0.0, 1.0}});
  } else if (dz < 0.0) {
    plan.append(clockwise_loop(dz));
  }
  return plan;
}

ControlSchedule unit_timelike_loop_p1() {
  ControlSchedule loop{{{1.0, Control{0.0, 0.0, 1.0}}}};
  loop.append(clockwise_loop(-1.0));
  return loop;
}

ControlSchedule closed_timelike_loop_p1(double j_min) {
  if (!(j_min > 0.0) || !std::isfinite(j_min)) {
    throw DomainError("closed_timelike_loop_p1: J_min must be positive and finite");
  }
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(j_min)));
  return repeat(unit_timelike_loop_p1(), n);
}

ControlSchedule long_trajectory_p1(const GroupPoint& q1, double min_length) {
  ControlSchedule plan = plan_reach_p1(q1);
  plan.append(closed_timelike_loop_p1(min_length));
  return plan;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Interior:
      return "Interior";
    case Verdict::Boundary:
      return "Boundary";
    case Verdict::Outside:
      return "Outside";
  }
  return "Outside";
}

}  // namespace heis
