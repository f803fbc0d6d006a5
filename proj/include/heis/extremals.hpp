#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "heis/group.hpp"
#include "heis/trajectory.hpp"

namespace heis {

/// Abnormal extremals have cost multiplier nu = 0, normal ones nu = -1.
enum class ExtremalKind { Abnormal, Normal };

inline double multiplier(ExtremalKind kind) { return kind == ExtremalKind::Normal ? -1.0 : 0.0; }

std::string to_string(ExtremalKind kind);

/// Tolerance on covector normalization (unit hyperboloid, lightlike cone).
inline constexpr double kNormTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Pointwise maximization of the Pontryagin function over the causal cone.
// ---------------------------------------------------------------------------

struct NoMaximum {};

/// Only u = 0 attains the supremum (which is 0).
struct TrivialOnly {};

/// Unit-speed maximizer of a normal covector. `value` is the Pontryagin
/// function at `u` (0 up to round-off, the function being 1-homogeneous in u);
/// `length_rate` is the Lorentzian speed of `u`.
struct Maximizer {
  Control u;
  double value{0.0};
  double length_rate{0.0};
};

/// Every nonnegative multiple of the lightlike `direction` attains the maximum 0.
struct RayOfMaximizers {
  Control direction;
};

using ControlDecision = std::variant<NoMaximum, TrivialOnly, Maximizer, RayOfMaximizers>;

ControlDecision maximize_control(Problem problem, const Covector& h, ExtremalKind kind);

// ---------------------------------------------------------------------------
// Coupled (q, h) vector field with the maximizing control substituted.
// ---------------------------------------------------------------------------

struct FlowDerivative {
  Tangent q_dot;
  Covector h_dot;
  Control u;
};

/// Control selected along extremals of the given family:
///   P1 normal   (h1, h2, -h3)
///   P1 abnormal (h1, h2, sqrt(h1^2 + h2^2)) / sqrt(h1^2 + h2^2)
///   P2 normal   (-h1, h2, h3)
///   P2 abnormal (sqrt(h2^2 + h3^2), h2, h3)
/// Throws DomainError for a P1 abnormal covector with h1 = h2 = 0.
Control extremal_control(Problem problem, ExtremalKind kind, const Covector& h);

/// Right-hand side of the Pontryagin system in frame coordinates:
/// h1' = -h3 u2, h2' = h3 u1, h3' = 0, q' = sum u_i X_i(q).
class CovectorFlow {
 public:
  CovectorFlow(Problem problem, ExtremalKind kind) : problem_(problem), kind_(kind) {}

  FlowDerivative operator()(const GroupPoint& q, const Covector& h) const;

  Problem problem() const { return problem_; }
  ExtremalKind kind() const { return kind_; }

 private:
  Problem problem_;
  ExtremalKind kind_;
};

inline CovectorFlow covector_flow(Problem problem, ExtremalKind kind) { return {problem, kind}; }

// ---------------------------------------------------------------------------
// Extremal families and their closed forms.
// ---------------------------------------------------------------------------

/// Lightlike circle; covector (cos(theta0 - t), sin(theta0 - t), -1).
struct P1AbnormalParams {
  double theta0{0.0};
};

/// Covector (sinh a cos(theta0 - t cosh a), sinh a sin(...), -cosh a).
struct P1NormalParams {
  double theta0{0.0};
  double a{0.0};
};

/// Lightlike covector with h1 = -sqrt(h2_0^2 + h3^2); (h2_0, h3) != (0, 0).
struct P2AbnormalParams {
  double h2_0{0.0};
  double h3{0.0};
};

/// Unit timelike covector: h1_0^2 - h2_0^2 - h3^2 = 1, h1_0 < 0.
struct P2NormalParams {
  double h1_0{-1.0};
  double h2_0{0.0};
  double h3{0.0};
};

using ExtremalParams = std::variant<P1AbnormalParams, P1NormalParams, P2AbnormalParams, P2NormalParams>;

struct ExtremalSpec {
  ExtremalParams params;
  double duration{0.0};

  Problem problem() const;
  ExtremalKind kind() const;
};

/// Completes (h2_0, h3) to a unit past-timelike P2 covector.
P2NormalParams p2_normal_from(double h2_0, double h3);

/// Covector at t = 0 of the family.
Covector initial_covector(const ExtremalParams& params);

struct ExtremalState {
  GroupPoint q;
  Covector h;
  Control u;
};

ExtremalState eval_abnormal_p1(double theta0, double t);
ExtremalState eval_normal_p1(double theta0, double a, double t);
ExtremalState eval_abnormal_p2(double h2_0, double h3, double t);
ExtremalState eval_normal_p2(double h1_0, double h2_0, double h3, double t);

ExtremalState evaluate(const ExtremalParams& params, double t);

/// Validates parameters (normalization, nondegeneracy); throws DomainError.
void validate(const ExtremalSpec& spec);

/// Uniform grid of n_samples >= 2 points on [0, duration].
Trajectory sample_extremal(const ExtremalSpec& spec, std::size_t n_samples);

/// Closed form sampled at caller-provided times (strictly increasing, from 0).
Trajectory sample_extremal_at(const ExtremalSpec& spec, std::span<const double> times);

}  // namespace heis
