#pragma once

#include <stdexcept>
#include <string>

namespace heis {

/// Selects between the two left-invariant Lorentzian problems.
/// P1: causal cone u3 >= sqrt(u1^2 + u2^2), length sqrt(u3^2 - u1^2 - u2^2).
/// P2: causal cone u1 >= sqrt(u2^2 + u3^2), length sqrt(u1^2 - u2^2 - u3^2).
enum class Problem { P1, P2 };

/// Thrown when an input lies outside the domain of an operation
/// (inadmissible control, wrong covector normalization, degenerate direction).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Element (x, y, z) of the Heisenberg group in canonical coordinates.
struct GroupPoint {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
};

/// Coordinate components of a tangent vector (d/dx, d/dy, d/dz).
struct Tangent {
  double x{0.0};
  double y{0.0};
  double z{0.0};
};

/// Frame components h_i = <p, X_i(q)> of a covector.
struct Covector {
  double h1{0.0};
  double h2{0.0};
  double h3{0.0};
};

/// Canonical components (a, b, c) = (p_x, p_y, p_z) of a covector.
struct CanonicalCovector {
  double a{0.0};
  double b{0.0};
  double c{0.0};
};

struct Control {
  double u1{0.0};
  double u2{0.0};
  double u3{0.0};
};

enum class ControlClass { Inadmissible, Lightlike, Timelike };

/// Left-invariant frame evaluated at a point.
struct Frame {
  Tangent x1;
  Tangent x2;
  Tangent x3;
};

/// Relative tolerance of the lightlike test.
inline constexpr double kConeTolerance = 1e-9;

GroupPoint multiply(const GroupPoint& g, const GroupPoint& h);
GroupPoint inverse(const GroupPoint& g);
inline GroupPoint identity() { return {}; }

Frame frame_at(const GroupPoint& q);

/// sum_i u_i X_i(q)
Tangent velocity(const GroupPoint& q, const Control& u);

/// Differential of the left translation L_g: in these coordinates it is the
/// linear map (vx, vy, vz) -> (vx, vy, vz + (g.x vy - g.y vx) / 2).
Tangent push_forward(const GroupPoint& g, const Tangent& v);

Covector frame_components(const CanonicalCovector& p, const GroupPoint& q);
CanonicalCovector canonical_components(const Covector& h, const GroupPoint& q);

ControlClass classify_control(Problem problem, const Control& u);

/// Radicand of the length functional, e.g. u3^2 - u1^2 - u2^2 for P1.
double lorentz_form(Problem problem, const Control& u);

/// sqrt of the problem's Lorentzian form; 0 for lightlike controls.
/// Throws DomainError for inadmissible controls.
double length_integrand(Problem problem, const Control& u);

/// u . h - nu * length_integrand(problem, u), nu <= 0.
double pontryagin_value(Problem problem, const Covector& h, const Control& u, double nu);

/// Quadratic form on covectors dual to the problem's cone:
/// P1: h3^2 - h1^2 - h2^2, P2: h1^2 - h2^2 - h3^2. Positive on timelike covectors.
double dual_form(Problem problem, const Covector& h);

/// Time-axis component of a covector (h3 for P1, h1 for P2).
double time_component(Problem problem, const Covector& h);

std::string to_string(Problem problem);
std::string to_string(ControlClass c);

}  // namespace heis
