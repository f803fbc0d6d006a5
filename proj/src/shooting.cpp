#include "heis/shooting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heis/reachability.hpp"

namespace heis {

namespace {

using Vec3 = Eigen::Vector3d;

// Newton unknowns: (h2_0, h3, log t1); h1_0 closes the unit hyperboloid.
struct Unknowns {
  Vec3 v;

  P2NormalParams params() const { return p2_normal_from(v[0], v[1]); }
  double duration() const { return std::exp(v[2]); }
};

Vec3 to_vec(const GroupPoint& q) { return {q.x, q.y, q.z}; }

Vec3 residual(const Vec3& v, const Vec3& target) {
  const Unknowns u{v};
  const P2NormalParams p = u.params();
  const ExtremalState st = eval_normal_p2(p.h1_0, p.h2_0, p.h3, u.duration());
  return to_vec(st.q) - target;
}

double norm_or_inf(const Vec3& r) {
  const double n = r.norm();
  return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
}

struct NewtonOutcome {
  Vec3 v;
  double error{std::numeric_limits<double>::infinity()};
  std::size_t iterations{0};
};

NewtonOutcome damped_newton(Vec3 v, const Vec3& target, const ShootingOptions& opt) {
  NewtonOutcome out;
  Vec3 r = residual(v, target);
  double err = norm_or_inf(r);
  const double floor = 1e-14 * std::max(1.0, target.norm());
  std::size_t it = 0;
  for (; it < opt.max_iterations && std::isfinite(err) && err > floor; ++it) {
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j) {
      Vec3 vp = v;
      Vec3 vm = v;
      vp[j] += opt.fd_step;
      vm[j] -= opt.fd_step;
      jac.col(j) = (residual(vp, target) - residual(vm, target)) / (2.0 * opt.fd_step);
    }
    if (!jac.allFinite()) break;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(jac);
    if (!lu.isInvertible()) break;
    Vec3 step = -lu.solve(r);
    // Keep t1 within a factor e^2 per iteration and the covector moves bounded.
    const double scale = std::max({std::abs(step[0]) / (2.0 + std::abs(v[0])),
                                   std::abs(step[1]) / (2.0 + std::abs(v[1])), std::abs(step[2]) / 2.0, 1.0});
    step /= scale;

    double alpha = 1.0;
    bool improved = false;
    while (alpha > 1e-10) {
      const Vec3 trial = v + alpha * step;
      const Vec3 r_trial = residual(trial, target);
      const double e_trial = norm_or_inf(r_trial);
      if (e_trial < (1.0 - 1e-4 * alpha) * err) {
        v = trial;
        r = r_trial;
        err = e_trial;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;
  }
  out.v = v;
  out.error = err;
  out.iterations = it;
  return out;
}

bool same_solution(const ExtremalSpec& a, const ExtremalSpec& b) {
  const auto& pa = std::get<P2NormalParams>(a.params);
  const auto& pb = std::get<P2NormalParams>(b.params);
  const double tol = 1e-6;
  return std::abs(a.duration - b.duration) <= tol * std::max(1.0, a.duration) &&
         std::abs(pa.h2_0 - pb.h2_0) <= tol * std::max(1.0, std::abs(pa.h2_0)) &&
         std::abs(pa.h3 - pb.h3) <= tol * std::max(1.0, std::abs(pa.h3));
}

double endpoint_error(const ExtremalSpec& spec, const GroupPoint& q1) {
  const GroupPoint q = evaluate(spec.params, spec.duration).q;
  return std::sqrt((q.x - q1.x) * (q.x - q1.x) + (q.y - q1.y) * (q.y - q1.y) + (q.z - q1.z) * (q.z - q1.z));
}

// Lightlike maximizer of a boundary target, parametrized with t1 = 1.
ShootingResult boundary_maximizer(const GroupPoint& q1) {
  ExtremalSpec spec;
  if (std::abs(q1.z) <= kBoundaryTolerance) {
    if (q1.y == 0.0 && q1.x <= kBoundaryTolerance) {
      spec = {P2AbnormalParams{1.0, 0.0}, 0.0};
    } else {
      spec = {P2AbnormalParams{q1.y, 0.0}, 1.0};
    }
  } else {
    const double span = *boundary_time(q1.x, q1.y);
    const double orient = q1.z < 0.0 ? -1.0 : 1.0;
    // x + sgn(h3) y = e^C (e^T - 1)
    const double light = q1.x + orient * q1.y;
    if (!(light > 0.0)) {
      throw ShootingError("boundary target with x < |y| is not reached by a lightlike extremal", 0.0);
    }
    const double c = std::log(light / std::expm1(span));
    const double h3 = orient * span;
    spec = {P2AbnormalParams{h3 * std::sinh(c), h3}, 1.0};
  }
  return {spec, endpoint_error(spec, q1), 0.0, 0, {}};
}

}  // namespace

ShootingResult shoot_p2(const GroupPoint& q1, const ShootingOptions& options) {
  const Membership m = membership_p2(q1);
  if (m.verdict == Verdict::Outside) {
    throw ShootingError("shoot_p2: target lies outside the attainable set", 0.0);
  }
  if (q1.x < 0.0) {
    throw ShootingError("shoot_p2: x < 0 is unreachable (x' = u1 >= 0 on admissible trajectories)", 0.0);
  }
  if (m.verdict == Verdict::Boundary) {
    return boundary_maximizer(q1);
  }
  if (std::abs(q1.z) <= kBoundaryTolerance) {
    // Straight normal extremal, h3 = 0: x = -h1 t, y = h2 t.
    const double t1 = std::sqrt((q1.x - q1.y) * (q1.x + q1.y));
    const ExtremalSpec spec{P2NormalParams{-q1.x / t1, q1.y / t1, 0.0}, t1};
    return {spec, endpoint_error(spec, q1), t1, 0, {spec}};
  }

  const Vec3 target = to_vec(q1);
  std::vector<ExtremalSpec> solutions;
  std::vector<std::size_t> iterations;
  double best_residual = std::numeric_limits<double>::infinity();
  for (const double t1 : options.durations) {
    for (const double r : options.radii) {
      const std::size_t n_angles = r == 0.0 ? 1 : options.angles;
      for (std::size_t k = 0; k < n_angles; ++k) {
        const double psi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_angles);
        const Vec3 start{r * std::cos(psi), r * std::sin(psi), std::log(t1)};
        const NewtonOutcome out = damped_newton(start, target, options);
        best_residual = std::min(best_residual, out.error);
        if (!(out.error <= options.tolerance)) continue;
        const Unknowns u{out.v};
        const ExtremalSpec spec{u.params(), u.duration()};
        const bool known = std::any_of(solutions.begin(), solutions.end(),
                                       [&](const ExtremalSpec& s) { return same_solution(s, spec); });
        if (!known) {
          solutions.push_back(spec);
          iterations.push_back(out.iterations);
        }
      }
    }
  }
  if (solutions.empty()) {
    throw ShootingError("shoot_p2: no start converged (best residual " + std::to_string(best_residual) + ")",
                        best_residual);
  }
  std::vector<std::size_t> order(solutions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return solutions[a].duration > solutions[b].duration; });
  ShootingResult result;
  result.spec = solutions[order.front()];
  result.endpoint_error = endpoint_error(result.spec, q1);
  result.distance = result.spec.duration;
  result.iterations = iterations[order.front()];
  for (const std::size_t i : order) result.solutions.push_back(solutions[i]);
  return result;
}

DistanceResult lorentz_distance_p2(const GroupPoint& q1, const ShootingOptions& options) {
  const Membership m = membership_p2(q1);
  if (m.verdict == Verdict::Outside) {
    return {DistanceKind::Undefined, 0.0, std::nullopt, "target outside the causal future of the identity"};
  }
  if (q1.x < 0.0) {
    return {DistanceKind::Undefined, 0.0, std::nullopt,
            "x < 0: admitted by the attainable-set formula but unreachable (x' = u1 >= 0)"};
  }
  ShootingResult r = shoot_p2(q1, options);
  const double d = r.distance;
  return {DistanceKind::Finite, d, std::move(r), m.verdict == Verdict::Boundary ? "boundary: lightlike maximizer" : ""};
}

DistanceResult lorentz_distance_p1(const GroupPoint&) {
  return {DistanceKind::Infinite, std::numeric_limits<double>::infinity(), std::nullopt,
          "closed timelike loops make every length attainable"};
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::Finite:
      return "finite";
    case DistanceKind::Infinite:
      return "+infinity";
    case DistanceKind::Undefined:
      return "undefined";
  }
  return "undefined";
}

}  // namespace heis
