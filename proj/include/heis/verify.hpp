#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heis/extremals.hpp"
#include "heis/ode_oracle.hpp"

namespace heis {

/// Closed-form vs RK4 deviation budget of the acceptance sweep.
inline constexpr double kSweepBudget = 1e-7;

struct SweepConfig {
  Problem problem{Problem::P2};
  ExtremalKind kind{ExtremalKind::Normal};
  std::size_t draws{50};
  double step{1e-4};
  std::uint64_t seed{7};
  double budget{kSweepBudget};
  /// Durations are drawn from (0, max_duration].
  double max_duration{10.0};
  /// Parameter box: |a| <= bound for P1 normal, |h2_0|, |h3| <= bound for P2.
  double bound{2.0};
  /// Samples compared per draw (the integrator records on this subgrid).
  std::size_t compare_points{1000};
};

struct SweepDraw {
  ExtremalSpec spec;
  Deviation deviation;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepDraw> draws;
  double worst_state{0.0};
  double worst_covector{0.0};
  std::size_t worst_index{0};
  bool within_budget{true};
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

/// One seeded parameter draw of the given family.
ExtremalSpec draw_spec(Problem problem, ExtremalKind kind, std::mt19937_64& rng, double bound = 2.0,
                       double max_duration = 10.0);

/// Closed form against integrate_pontryagin on the closed form's own initial covector.
Deviation compare_with_oracle(const ExtremalSpec& spec, double step, std::size_t compare_points = 1000);

SweepReport run_sweep(const SweepConfig& config);

/// deviation(step) / deviation(step / 2); about 16 for a fourth-order method.
/// Throws DomainError when the duration spans fewer than 4 steps.
double order_ratio(const ExtremalSpec& spec, double step);

}  // namespace heis
