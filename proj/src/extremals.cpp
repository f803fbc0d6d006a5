#include "heis/extremals.hpp"

#include <cmath>
#include <string>

namespace heis {

namespace {

double sum_squares(const Covector& h) { return h.h1 * h.h1 + h.h2 * h.h2 + h.h3 * h.h3; }

// Control proportional to the covector reflected through the spatial axes.
Control mirrored(Problem problem, const Covector& h) {
  if (problem == Problem::P1) {
    return {h.h1, h.h2, -h.h3};
  }
  return {-h.h1, h.h2, h.h3};
}

using Long = long double;

double to_double(Long v) { return static_cast<double>(v); }

// expm1(s) / s, continuous at 0.
Long exp_ratio(Long s) { return s == 0.0L ? 1.0L : std::expm1(s) / s; }

// (sinh s - s) / s^3, continuous at 0.
Long sinh_defect(Long s) {
  if (std::abs(s) < 1.0L) {
    const Long s2 = s * s;
    Long term = 1.0L / 6.0L;
    Long sum = term;
    for (int k = 2; k < 14; ++k) {
      term *= s2 / ((2.0L * k) * (2.0L * k + 1.0L));
      sum += term;
    }
    return sum;
  }
  return (std::sinh(s) - s) / (s * s * s);
}

}  // namespace

std::string to_string(ExtremalKind kind) { return kind == ExtremalKind::Normal ? "normal" : "abnormal"; }

ControlDecision maximize_control(Problem problem, const Covector& h, ExtremalKind kind) {
  const double time = time_component(problem, h);
  const double form = dual_form(problem, h);
  const double scale = sum_squares(h);

  if (!(time < 0.0)) {
    return NoMaximum{};
  }
  if (kind == ExtremalKind::Abnormal) {
    if (std::abs(form) <= kNormTolerance * scale) {
      return RayOfMaximizers{mirrored(problem, h)};
    }
    // Past timelike: u . h < 0 for every nonzero admissible u.
    return form > 0.0 ? ControlDecision{TrivialOnly{}} : ControlDecision{NoMaximum{}};
  }

  // nu = -1: h_u = u.h + |u| is 1-homogeneous, bounded above iff the covector
  // is past timelike with Lorentzian norm >= 1.
  if (std::abs(form - 1.0) <= kNormTolerance * std::max(1.0, scale)) {
    const Control u = mirrored(problem, h);
    // The speed is the root of the form itself; length_integrand would put
    // controls with |u|^2 beyond 1 / kConeTolerance on the cone.
    const double rate = std::sqrt(std::max(0.0, form));
    return Maximizer{u, u.u1 * h.h1 + u.u2 * h.h2 + u.u3 * h.h3 + rate, rate};
  }
  if (form > 1.0) {
    return TrivialOnly{};
  }
  return NoMaximum{};
}

Control extremal_control(Problem problem, ExtremalKind kind, const Covector& h) {
  if (kind == ExtremalKind::Normal) {
    return mirrored(problem, h);
  }
  if (problem == Problem::P1) {
    const double rho = std::hypot(h.h1, h.h2);
    if (!(rho > 0.0)) {
      throw DomainError("P1 abnormal flow: h1 = h2 = 0, direction undefined");
    }
    return {h.h1 / rho, h.h2 / rho, 1.0};
  }
  return {std::hypot(h.h2, h.h3), h.h2, h.h3};
}

FlowDerivative CovectorFlow::operator()(const GroupPoint& q, const Covector& h) const {
  const Control u = extremal_control(problem_, kind_, h);
  return {velocity(q, u), {-h.h3 * u.u2, h.h3 * u.u1, 0.0}, u};
}

Problem ExtremalSpec::problem() const {
  return std::holds_alternative<P1AbnormalParams>(params) || std::holds_alternative<P1NormalParams>(params)
             ? Problem::P1
             : Problem::P2;
}

ExtremalKind ExtremalSpec::kind() const {
  return std::holds_alternative<P1NormalParams>(params) || std::holds_alternative<P2NormalParams>(params)
             ? ExtremalKind::Normal
             : ExtremalKind::Abnormal;
}

P2NormalParams p2_normal_from(double h2_0, double h3) {
  return {-std::sqrt(1.0 + h2_0 * h2_0 + h3 * h3), h2_0, h3};
}

Covector initial_covector(const ExtremalParams& params) { return evaluate(params, 0.0).h; }

ExtremalState eval_abnormal_p1(double theta0, double t) {
  const double theta = theta0 - t;
  const Covector h{std::cos(theta), std::sin(theta), -1.0};
  const Control u{h.h1, h.h2, 1.0};
  const GroupPoint q{std::sin(t - theta0) + std::sin(theta0), std::cos(t - theta0) - std::cos(theta0),
                     0.5 * (t + std::sin(t))};
  return {q, h, u};
}

ExtremalState eval_normal_p1(double theta0, double a, double t) {
  const double ch = std::cosh(a);
  const double sh = std::sinh(a);
  const double th = std::tanh(a);
  const double theta = theta0 - t * ch;
  const Covector h{sh * std::cos(theta), sh * std::sin(theta), -ch};
  const Control u{h.h1, h.h2, ch};
  const GroupPoint q{th * (std::sin(theta0) - std::sin(theta)), th * (std::cos(theta) - std::cos(theta0)),
                     0.5 * t * (1.0 / ch + ch) + 0.5 * th * th * std::sin(t * ch)};
  return {q, h, u};
}

// The P2 families grow like e^{|h3| t}; both are evaluated in long double and
// rounded once on return.

ExtremalState eval_abnormal_p2(double h2_0, double h3, double t) {
  if (h3 == 0.0) {
    if (h2_0 == 0.0) {
      throw DomainError("P2 abnormal: h2_0 = h3 = 0 gives the zero covector");
    }
    const double speed = std::abs(h2_0);
    return {{speed * t, h2_0 * t, 0.0}, {-speed, h2_0, 0.0}, {speed, h2_0, 0.0}};
  }
  const Long k3 = h3;
  const Long abs_h3 = std::abs(k3);
  const Long c = std::asinh(Long(h2_0) / k3);
  const Long tau = c + abs_h3 * t;
  const Long half_span = 0.5L * abs_h3 * t;
  const Long mid = c + half_span;
  // sinh(tau) - sinh(C) and cosh(tau) - cosh(C) in product form.
  const Long factor = 2.0L * std::sinh(half_span);
  const Long h1 = -abs_h3 * std::cosh(tau);
  const Long h2 = k3 * std::sinh(tau);
  const Long x = factor * std::cosh(mid);
  const Long y = (h3 < 0.0 ? -1.0L : 1.0L) * factor * std::sinh(mid);
  const Long z = 0.5L * (k3 * t + std::sinh(k3 * t));
  return {{to_double(x), to_double(y), to_double(z)},
          {to_double(h1), to_double(h2), h3},
          {to_double(-h1), to_double(h2), h3}};
}

ExtremalState eval_normal_p2(double h1_0, double h2_0, double h3, double t) {
  const double form = h1_0 * h1_0 - h2_0 * h2_0 - h3 * h3;
  if (!(h1_0 < 0.0) || std::abs(form - 1.0) > kNormTolerance * std::max(1.0, h1_0 * h1_0)) {
    throw DomainError("P2 normal: covector must satisfy h1^2 - h2^2 - h3^2 = 1 with h1 < 0 (got form " +
                      std::to_string(form) + ", h1 " + std::to_string(h1_0) + ")");
  }
  // Light-cone combinations evolve by pure exponentials:
  // (h1 - h2)(t) = (h1_0 - h2_0) e^s, (h1 + h2)(t) = (h1_0 + h2_0) e^-s, s = h3 t.
  // The divided closed form x = (h2_0 (cosh s - 1) - h1_0 sinh s) / h3, ... is
  // rewritten in these variables so that h3 -> 0 is continuous and stable.
  const Long s = Long(h3) * t;
  const Long minus = Long(h1_0) - h2_0;  // < 0
  const Long plus = Long(h1_0) + h2_0;   // < 0
  const Long grow = std::exp(s);
  const Long decay = std::exp(-s);
  const Long h1 = 0.5L * (minus * grow + plus * decay);
  const Long h2 = 0.5L * (plus * decay - minus * grow);
  const Long sum_xy = -minus * t * exp_ratio(s);
  const Long diff_xy = -plus * t * exp_ratio(-s);
  const Long quad = Long(h1_0) * h1_0 - Long(h2_0) * h2_0;
  const Long z = s * (1.0L + 0.5L * quad * t * t * sinh_defect(s));
  return {{to_double(0.5L * (sum_xy + diff_xy)), to_double(0.5L * (sum_xy - diff_xy)), to_double(z)},
          {to_double(h1), to_double(h2), h3},
          {to_double(-h1), to_double(h2), h3}};
}

ExtremalState evaluate(const ExtremalParams& params, double t) {
  struct Visitor {
    double t;
    ExtremalState operator()(const P1AbnormalParams& p) const { return eval_abnormal_p1(p.theta0, t); }
    ExtremalState operator()(const P1NormalParams& p) const { return eval_normal_p1(p.theta0, p.a, t); }
    ExtremalState operator()(const P2AbnormalParams& p) const { return eval_abnormal_p2(p.h2_0, p.h3, t); }
    ExtremalState operator()(const P2NormalParams& p) const {
      return eval_normal_p2(p.h1_0, p.h2_0, p.h3, t);
    }
  };
  return std::visit(Visitor{t}, params);
}

void validate(const ExtremalSpec& spec) {
  if (!std::isfinite(spec.duration) || spec.duration < 0.0) {
    throw DomainError("extremal duration must be finite and nonnegative");
  }
  // Every family validates its own parameters on evaluation.
  (void)evaluate(spec.params, 0.0);
}

Trajectory sample_extremal_at(const ExtremalSpec& spec, std::span<const double> times) {
  validate(spec);
  if (times.empty() || times.front() != 0.0) {
    throw DomainError("sample grid must start at t = 0");
  }
  Trajectory traj;
  traj.problem = spec.problem();
  traj.has_covector = true;
  traj.samples.reserve(times.size());
  const bool normal = spec.kind() == ExtremalKind::Normal;
  double previous = -1.0;
  for (const double t : times) {
    if (!(t > previous)) {
      throw DomainError("sample times must be strictly increasing");
    }
    previous = t;
    const ExtremalState st = evaluate(spec.params, t);
    // Unit normalization makes the normal length rate identically 1; abnormal
    // extremals are lightlike.
    traj.samples.push_back({t, st.q, st.h, st.u, normal ? t : 0.0});
  }
  return traj;
}

Trajectory sample_extremal(const ExtremalSpec& spec, std::size_t n_samples) {
  if (n_samples < 2) {
    throw DomainError("sample_extremal needs at least 2 samples");
  }
  if (!(spec.duration > 0.0)) {
    throw DomainError("sample_extremal needs a positive duration");
  }
  std::vector<double> times(n_samples);
  const double last = static_cast<double>(n_samples - 1);
  for (std::size_t k = 0; k < n_samples; ++k) {
    times[k] = spec.duration * (static_cast<double>(k) / last);
  }
  times.back() = spec.duration;
  return sample_extremal_at(spec, times);
}

}  // namespace heis
