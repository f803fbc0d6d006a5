#include "heis/group.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

namespace {

struct ConeSplit {
  double time;
  double space;
};

// Symmetric in its arguments so that swapping spatial axes is bit-exact.
double spatial_norm(double a, double b) {
  a = std::abs(a);
  b = std::abs(b);
  return std::hypot(std::max(a, b), std::min(a, b));
}

ConeSplit split(Problem problem, const Control& u) {
  if (problem == Problem::P1) {
    return {u.u3, spatial_norm(u.u1, u.u2)};
  }
  return {u.u1, spatial_norm(u.u2, u.u3)};
}

}  // namespace

GroupPoint multiply(const GroupPoint& g, const GroupPoint& h) {
  return {g.x + h.x, g.y + h.y, g.z + h.z + 0.5 * (g.x * h.y - g.y * h.x)};
}

GroupPoint inverse(const GroupPoint& g) { return {-g.x, -g.y, -g.z}; }

Frame frame_at(const GroupPoint& q) {
  return {
      {1.0, 0.0, -0.5 * q.y},
      {0.0, 1.0, 0.5 * q.x},
      {0.0, 0.0, 1.0},
  };
}

Tangent velocity(const GroupPoint& q, const Control& u) {
  return {u.u1, u.u2, 0.5 * (q.x * u.u2 - q.y * u.u1) + u.u3};
}

Tangent push_forward(const GroupPoint& g, const Tangent& v) {
  return {v.x, v.y, v.z + 0.5 * (g.x * v.y - g.y * v.x)};
}

Covector frame_components(const CanonicalCovector& p, const GroupPoint& q) {
  return {p.a - 0.5 * p.c * q.y, p.b + 0.5 * p.c * q.x, p.c};
}

CanonicalCovector canonical_components(const Covector& h, const GroupPoint& q) {
  return {h.h1 + 0.5 * h.h3 * q.y, h.h2 - 0.5 * h.h3 * q.x, h.h3};
}

ControlClass classify_control(Problem problem, const Control& u) {
  const auto [time, space] = split(problem, u);
  const double scale = std::max(std::abs(time), space);
  const double gap = time - space;
  if (std::abs(gap) <= kConeTolerance * scale) {
    return ControlClass::Lightlike;
  }
  return gap > 0.0 ? ControlClass::Timelike : ControlClass::Inadmissible;
}

double lorentz_form(Problem problem, const Control& u) {
  const auto [time, space] = split(problem, u);
  return (time - space) * (time + space);
}

double length_integrand(Problem problem, const Control& u) {
  switch (classify_control(problem, u)) {
    case ControlClass::Inadmissible:
      throw DomainError("length_integrand: control outside the causal cone of " +
                        to_string(problem));
    case ControlClass::Lightlike:
      return 0.0;
    case ControlClass::Timelike:
      break;
  }
  return std::sqrt(lorentz_form(problem, u));
}

double pontryagin_value(Problem problem, const Covector& h, const Control& u, double nu) {
  if (nu > 0.0) {
    throw DomainError("pontryagin_value: multiplier nu must be <= 0");
  }
  const double dot = u.u1 * h.h1 + u.u2 * h.h2 + u.u3 * h.h3;
  return dot - nu * length_integrand(problem, u);
}

double dual_form(Problem problem, const Covector& h) {
  if (problem == Problem::P1) {
    return h.h3 * h.h3 - h.h1 * h.h1 - h.h2 * h.h2;
  }
  return h.h1 * h.h1 - h.h2 * h.h2 - h.h3 * h.h3;
}

double time_component(Problem problem, const Covector& h) {
  return problem == Problem::P1 ? h.h3 : h.h1;
}

std::string to_string(Problem problem) { return problem == Problem::P1 ? "P1" : "P2"; }

std::string to_string(ControlClass c) {
  switch (c) {
    case ControlClass::Inadmissible:
      return "inadmissible";
    case ControlClass::Lightlike:
      return "lightlike";
    case ControlClass::Timelike:
      return "timelike";
  }
  return "unknown";
}

}  // namespace heis
