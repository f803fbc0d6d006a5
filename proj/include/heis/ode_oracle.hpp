#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "heis/extremals.hpp"
#include "heis/group.hpp"
#include "heis/trajectory.hpp"

namespace heis {

enum class IntegrationMethod { RK4 };

/// Working precision of the integrator. P2 trajectories grow like e^{|h3| t},
/// and the z equation then subtracts products of size e^{2 |h3| t}; Auto
/// switches those to quad precision (P1 trajectories stay bounded and use double).
enum class Precision { Auto, Double, Quad };

/// Fixed-step integration settings. The actual step is T / ceil(T / step), so
/// every horizon is hit exactly.
struct IntegratorConfig {
  double step{1e-3};
  IntegrationMethod method{IntegrationMethod::RK4};
  Precision precision{Precision::Auto};
  std::size_t max_steps{100'000'000};
  /// Record every n-th step (the final state is always recorded).
  std::size_t record_stride{1};
};

/// Control rotating in the (u1, u2) plane:
/// u(t) = (speed cos(heading + turn_rate t), speed sin(heading + turn_rate t), vertical).
struct RotatingControl {
  double speed{0.0};
  double heading{0.0};
  double turn_rate{0.0};
  double vertical{0.0};

  Control at(double t) const;
};

/// Arbitrary control law on piece-local time.
using ControlLaw = std::function<Control(double)>;

struct ControlPiece {
  double duration{0.0};
  std::variant<Control, RotatingControl, ControlLaw> law;

  Control at(double local_t) const;
};

struct ControlSchedule {
  std::vector<ControlPiece> pieces;

  double total_duration() const;
  void append(const ControlSchedule& other);
};

ControlSchedule repeat(const ControlSchedule& schedule, std::size_t times);

/// Thrown when two trajectories cannot be compared sample by sample.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// RK4 on the coupled (q, h, J) system from q = 0, h = h0. Throws DomainError
/// if h0 is not in the region where the family's maximizer exists, or if the
/// covector leaves it during integration.
Trajectory integrate_pontryagin(Problem problem, ExtremalKind kind, const Covector& h0, double horizon,
                                const IntegratorConfig& cfg = {});

/// RK4 on (q, J) under a control schedule. Every piece is checked for
/// admissibility at all evaluation times before integration starts.
Trajectory integrate_schedule(Problem problem, const GroupPoint& q0, const ControlSchedule& schedule,
                              const IntegratorConfig& cfg = {});

/// Checks admissibility of every control the integrator would evaluate;
/// throws DomainError naming the first offending piece.
void check_admissible(Problem problem, const ControlSchedule& schedule, const IntegratorConfig& cfg = {});

struct Deviation {
  double state{0.0};
  std::optional<double> covector;
};

/// Largest Euclidean distance between corresponding states (and covectors
/// when both trajectories carry them). Throws GridMismatch.
Deviation max_deviation(const Trajectory& a, const Trajectory& b);

std::vector<double> sample_times(const Trajectory& traj);

}  // namespace heis
