#include "heis/ode_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#ifdef HEIS_HAVE_FLOAT128
#include <quadmath.h>
#endif

namespace heis {

namespace {

#ifdef HEIS_HAVE_FLOAT128
using Quad = __float128;
// Double estimate plus one Newton step: correct to quad precision and much
// cheaper than sqrtq.
inline Quad sqrt_of(Quad v) {
  if (!(v > 0)) return sqrtq(v);
  const Quad s = std::sqrt(static_cast<double>(v));
  return 0.5 * (s + v / s);
}
#else
using Quad = long double;
inline Quad sqrt_of(Quad v) { return std::sqrt(v); }
#endif
inline double sqrt_of(double v) { return std::sqrt(v); }

template <typename R>
R abs_of(R v) {
  return v < R(0) ? -v : v;
}

template <typename R, std::size_t N>
using Vec = std::array<R, N>;

/// Double states are stored as an unevaluated sum hi + lo so that adding
/// small increments to large coordinates does not accumulate round-off.
template <typename R, std::size_t N>
struct State {
  Vec<R, N> hi{};
  Vec<R, N> lo{};

  Vec<R, N> value() const {
    if constexpr (!std::is_same_v<R, double>) return hi;
    Vec<R, N> v;
    for (std::size_t i = 0; i < N; ++i) v[i] = hi[i] + lo[i];
    return v;
  }

  void add(const Vec<R, N>& inc) {
    for (std::size_t i = 0; i < N; ++i) {
      const R sum = hi[i] + inc[i];
      if constexpr (std::is_same_v<R, double>) {
        if (abs_of(hi[i]) >= abs_of(inc[i])) {
          lo[i] += (hi[i] - sum) + inc[i];
        } else {
          lo[i] += (inc[i] - sum) + hi[i];
        }
      }
      hi[i] = sum;
    }
  }
};

template <typename R, std::size_t N>
Vec<R, N> axpy(const Vec<R, N>& y, R a, const Vec<R, N>& k) {
  Vec<R, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
  return out;
}

/// One classical RK4 step of y' = f(t, y) from t to t_next. The width is
/// formed in precision R, so the state corresponds exactly to the (double)
/// grid times that get recorded.
template <typename R, std::size_t N, typename Rhs>
void rk4_step(State<R, N>& state, double t, double t_next, const Rhs& f) {
  const Vec<R, N> y = state.value();
  const R h = R(t_next) - R(t);
  const R half = R(0.5) * h;
  const double t_mid = t + 0.5 * (t_next - t);
  const Vec<R, N> k1 = f(t, y);
  const Vec<R, N> k2 = f(t_mid, axpy(y, half, k1));
  const Vec<R, N> k3 = f(t_mid, axpy(y, half, k2));
  const Vec<R, N> k4 = f(t_next, axpy(y, h, k3));
  const R sixth = h / R(6);
  Vec<R, N> inc;
  for (std::size_t i = 0; i < N; ++i) {
    inc[i] = sixth * (k1[i] + R(2) * k2[i] + R(2) * k3[i] + k4[i]);
  }
  state.add(inc);
}

/// k-th of n equal subdivisions of [0, horizon]; exact at both ends.
double grid_time(double horizon, std::size_t k, std::size_t n) {
  return k == n ? horizon : horizon * (static_cast<double>(k) / static_cast<double>(n));
}

std::size_t step_count(double horizon, const IntegratorConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) {
    throw DomainError("integrator step must be positive");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw DomainError("integration horizon must be finite and nonnegative");
  }
  if (horizon == 0.0) return 0;
  const double raw = std::ceil(horizon / cfg.step * (1.0 - 1e-12));
  const auto n = static_cast<std::size_t>(std::max(1.0, raw));
  if (n > cfg.max_steps) {
    throw DomainError("integration needs " + std::to_string(n) + " steps, above max_steps");
  }
  return n;
}

bool use_quad(Problem problem, const IntegratorConfig& cfg) {
  switch (cfg.precision) {
    case Precision::Double:
      return false;
    case Precision::Quad:
      return true;
    case Precision::Auto:
      break;
  }
  return problem == Problem::P2;
}

/// Lorentzian speed of (u1, u2, u3); mirrors length_integrand. Evaluated in
/// double: the rate is O(1) and only the state needs the wider format.
template <typename R>
R speed(Problem problem, R u1, R u2, R u3) {
  const auto time = static_cast<double>(problem == Problem::P1 ? u3 : u1);
  const auto a = static_cast<double>(problem == Problem::P1 ? u1 : u2);
  const auto b = static_cast<double>(problem == Problem::P1 ? u2 : u3);
  const double space = std::hypot(a, b);
  const double scale = std::max(std::abs(time), space);
  const double gap = time - space;
  if (std::abs(gap) <= kConeTolerance * scale) return R(0);
  if (gap < 0.0) {
    throw DomainError("control outside the causal cone of " + to_string(problem));
  }
  return R(std::sqrt(gap * (time + space)));
}

/// Speed of the normal control, which mirrors h: the root of the covector's
/// own form. Summed in R because |h|^2 can exceed 1/kConeTolerance, where the
/// control is numerically on the cone even though its speed is 1.
template <typename R>
R normal_rate(Problem problem, R h1, R h2, R h3) {
  const R form = problem == Problem::P1 ? h3 * h3 - h1 * h1 - h2 * h2 : h1 * h1 - h2 * h2 - h3 * h3;
  return R(std::sqrt(std::max(0.0, static_cast<double>(form))));
}

template <typename R>
Vec<R, 3> flow_control(Problem problem, ExtremalKind kind, R h1, R h2, R h3) {
  if (kind == ExtremalKind::Normal) {
    return problem == Problem::P1 ? Vec<R, 3>{h1, h2, -h3} : Vec<R, 3>{-h1, h2, h3};
  }
  if (problem == Problem::P1) {
    const R rho = sqrt_of(h1 * h1 + h2 * h2);
    if (!(rho > R(0))) {
      throw DomainError("P1 abnormal flow: h1 = h2 = 0, direction undefined");
    }
    return {h1 / rho, h2 / rho, R(1)};
  }
  return {sqrt_of(h2 * h2 + h3 * h3), h2, h3};
}

// The past timelike cone (normal) and the past half-space (abnormal) are
// invariant; leaving them signals a broken step, while drift of the form itself
// is ordinary truncation error and is reported by the comparisons instead.
// The cone test carries the round-off of a form with terms of size |h|^2.
bool in_region(Problem problem, ExtremalKind kind, const Covector& h) {
  if (!(time_component(problem, h) < 0.0)) return false;
  const double slack = kNormTolerance * (h.h1 * h.h1 + h.h2 * h.h2 + h.h3 * h.h3);
  return kind == ExtremalKind::Abnormal || dual_form(problem, h) > -slack;
}

template <typename R>
Trajectory run_pontryagin(Problem problem, ExtremalKind kind, const Covector& h0, double horizon,
                          const IntegratorConfig& cfg) {
  const std::size_t n = step_count(horizon, cfg);

  // (x, y, z, h1, h2, h3, J); h1' = -h3 u2, h2' = h3 u1, h3' = 0, q' = sum u_i X_i(q).
  auto rhs = [&](double, const Vec<R, 7>& s) {
    const Vec<R, 3> u = flow_control<R>(problem, kind, s[3], s[4], s[5]);
    const R half(0.5);
    return Vec<R, 7>{u[0],
                     u[1],
                     half * (s[0] * u[1] - s[1] * u[0]) + u[2],
                     -s[5] * u[1],
                     s[5] * u[0],
                     R(0),
                     kind == ExtremalKind::Normal ? normal_rate<R>(problem, s[3], s[4], s[5])
                                                  : speed<R>(problem, u[0], u[1], u[2])};
  };

  Trajectory traj;
  traj.problem = problem;
  traj.has_covector = true;
  const std::size_t stride = std::max<std::size_t>(1, cfg.record_stride);
  traj.samples.reserve(n / stride + 2);

  State<R, 7> state;
  state.hi = {R(0), R(0), R(0), R(h0.h1), R(h0.h2), R(h0.h3), R(0)};
  auto current = [&]() {
    const Vec<R, 7> s = state.value();
    Vec<double, 7> d;
    for (std::size_t i = 0; i < 7; ++i) d[i] = static_cast<double>(s[i]);
    return d;
  };
  auto record = [&](double t, const Vec<double, 7>& s) {
    const Covector h{s[3], s[4], s[5]};
    traj.samples.push_back({t, {s[0], s[1], s[2]}, h, extremal_control(problem, kind, h), s[6]});
  };
  record(0.0, current());
  for (std::size_t k = 0; k < n; ++k) {
    const double t_next = grid_time(horizon, k + 1, n);
    rk4_step(state, grid_time(horizon, k, n), t_next, rhs);
    const Vec<double, 7> s = current();
    if (!in_region(problem, kind, {s[3], s[4], s[5]})) {
      throw DomainError("integrate_pontryagin: covector left the admissible region");
    }
    if ((k + 1) % stride == 0 || k + 1 == n) {
      record(t_next, s);
    }
  }
  return traj;
}

template <typename R>
Trajectory run_schedule(Problem problem, const GroupPoint& q0, const ControlSchedule& schedule,
                        const IntegratorConfig& cfg) {
  Trajectory traj;
  traj.problem = problem;
  traj.has_covector = false;
  const std::size_t stride = std::max<std::size_t>(1, cfg.record_stride);

  State<R, 4> state;
  state.hi = {R(q0.x), R(q0.y), R(q0.z), R(0)};
  auto record = [&](double t, const Control& u) {
    const Vec<R, 4> s = state.value();
    traj.samples.push_back({t,
                            {static_cast<double>(s[0]), static_cast<double>(s[1]), static_cast<double>(s[2])},
                            {},
                            u,
                            static_cast<double>(s[3])});
  };
  record(0.0, schedule.pieces.empty() ? Control{} : schedule.pieces.front().at(0.0));

  double t0 = 0.0;
  std::size_t global_step = 0;
  for (const ControlPiece& piece : schedule.pieces) {
    const std::size_t n = step_count(piece.duration, cfg);
    if (n == 0) continue;
    auto rhs = [&](double local_t, const Vec<R, 4>& s) {
      const Control u = piece.at(local_t);
      const R u1(u.u1), u2(u.u2), u3(u.u3);
      return Vec<R, 4>{u1, u2, R(0.5) * (s[0] * u2 - s[1] * u1) + u3, speed<R>(problem, u1, u2, u3)};
    };
    for (std::size_t k = 0; k < n; ++k) {
      const double local_end = grid_time(piece.duration, k + 1, n);
      rk4_step(state, grid_time(piece.duration, k, n), local_end, rhs);
      ++global_step;
      if (global_step % stride == 0 || k + 1 == n) {
        record(t0 + local_end, piece.at(local_end));
      }
    }
    t0 += piece.duration;
  }
  return traj;
}

}  // namespace

Control RotatingControl::at(double t) const {
  const double angle = heading + turn_rate * t;
  return {speed * std::cos(angle), speed * std::sin(angle), vertical};
}

Control ControlPiece::at(double local_t) const {
  struct Visitor {
    double t;
    Control operator()(const Control& u) const { return u; }
    Control operator()(const RotatingControl& r) const { return r.at(t); }
    Control operator()(const ControlLaw& law) const { return law(t); }
  };
  return std::visit(Visitor{local_t}, law);
}

double ControlSchedule::total_duration() const {
  double total = 0.0;
  for (const auto& piece : pieces) total += piece.duration;
  return total;
}

void ControlSchedule::append(const ControlSchedule& other) {
  pieces.insert(pieces.end(), other.pieces.begin(), other.pieces.end());
}

ControlSchedule repeat(const ControlSchedule& schedule, std::size_t times) {
  ControlSchedule out;
  out.pieces.reserve(schedule.pieces.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.append(schedule);
  return out;
}

Trajectory integrate_pontryagin(Problem problem, ExtremalKind kind, const Covector& h0, double horizon,
                                const IntegratorConfig& cfg) {
  const ControlDecision decision = maximize_control(problem, h0, kind);
  const bool ok = kind == ExtremalKind::Normal ? std::holds_alternative<Maximizer>(decision)
                                               : std::holds_alternative<RayOfMaximizers>(decision);
  if (!ok) {
    throw DomainError("integrate_pontryagin: initial covector outside the " + to_string(problem) +
                      (kind == ExtremalKind::Normal ? " normal" : " abnormal") + " region");
  }
  if (use_quad(problem, cfg)) return run_pontryagin<Quad>(problem, kind, h0, horizon, cfg);
  return run_pontryagin<double>(problem, kind, h0, horizon, cfg);
}

void check_admissible(Problem problem, const ControlSchedule& schedule, const IntegratorConfig& cfg) {
  for (std::size_t p = 0; p < schedule.pieces.size(); ++p) {
    const ControlPiece& piece = schedule.pieces[p];
    const std::size_t n = step_count(piece.duration, cfg);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = grid_time(piece.duration, k, n);
      const double t_next = grid_time(piece.duration, k + 1, n);
      for (const double tt : {t, t + 0.5 * (t_next - t), t_next}) {
        const Control u = piece.at(tt);
        if (classify_control(problem, u) == ControlClass::Inadmissible) {
          throw DomainError("control piece " + std::to_string(p) + " leaves the " + to_string(problem) +
                            " cone at local time " + std::to_string(tt));
        }
      }
    }
  }
}

Trajectory integrate_schedule(Problem problem, const GroupPoint& q0, const ControlSchedule& schedule,
                              const IntegratorConfig& cfg) {
  check_admissible(problem, schedule, cfg);
  if (use_quad(problem, cfg)) return run_schedule<Quad>(problem, q0, schedule, cfg);
  return run_schedule<double>(problem, q0, schedule, cfg);
}

Deviation max_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.problem != b.problem) {
    throw GridMismatch("max_deviation: trajectories belong to different problems");
  }
  if (a.samples.size() != b.samples.size()) {
    throw GridMismatch("max_deviation: sample counts differ (" + std::to_string(a.samples.size()) + " vs " +
                       std::to_string(b.samples.size()) + ")");
  }
  Deviation dev;
  const bool covectors = a.has_covector && b.has_covector;
  if (covectors) dev.covector = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const Sample& sa = a.samples[i];
    const Sample& sb = b.samples[i];
    if (std::abs(sa.t - sb.t) > 1e-9 * std::max(1.0, std::abs(sa.t))) {
      throw GridMismatch("max_deviation: time grids differ at sample " + std::to_string(i));
    }
    const double dq = std::sqrt((sa.q.x - sb.q.x) * (sa.q.x - sb.q.x) + (sa.q.y - sb.q.y) * (sa.q.y - sb.q.y) +
                                (sa.q.z - sb.q.z) * (sa.q.z - sb.q.z));
    dev.state = std::max(dev.state, dq);
    if (covectors) {
      const double dh = std::sqrt((sa.h.h1 - sb.h.h1) * (sa.h.h1 - sb.h.h1) +
                                  (sa.h.h2 - sb.h.h2) * (sa.h.h2 - sb.h.h2) +
                                  (sa.h.h3 - sb.h.h3) * (sa.h.h3 - sb.h.h3));
      dev.covector = std::max(*dev.covector, dh);
    }
  }
  return dev;
}

std::vector<double> sample_times(const Trajectory& traj) {
  std::vector<double> times;
  times.reserve(traj.samples.size());
  for (const auto& s : traj.samples) times.push_back(s.t);
  return times;
}

}  // namespace heis
