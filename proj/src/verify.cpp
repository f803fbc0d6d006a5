#include "heis/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heis {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

ExtremalSpec draw_spec(Problem problem, ExtremalKind kind, std::mt19937_64& rng, double bound,
                       double max_duration) {
  ExtremalParams params;
  if (problem == Problem::P1) {
    const double theta0 = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    if (kind == ExtremalKind::Abnormal) {
      params = P1AbnormalParams{theta0};
    } else {
      params = P1NormalParams{theta0, uniform(rng, -bound, bound)};
    }
  } else {
    const double h2_0 = uniform(rng, -bound, bound);
    const double h3 = uniform(rng, -bound, bound);
    if (kind == ExtremalKind::Abnormal) {
      params = P2AbnormalParams{h2_0, h3};
    } else {
      params = p2_normal_from(h2_0, h3);
    }
  }
  // (0, max_duration]
  const double duration = max_duration * (1.0 - uniform01(rng));
  return {params, duration};
}

Deviation compare_with_oracle(const ExtremalSpec& spec, double step, std::size_t compare_points) {
  IntegratorConfig cfg;
  cfg.step = step;
  const double steps = std::ceil(spec.duration / step);
  cfg.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(steps) / std::max<std::size_t>(1, compare_points));
  const Trajectory oracle =
      integrate_pontryagin(spec.problem(), spec.kind(), initial_covector(spec.params), spec.duration, cfg);
  const std::vector<double> times = sample_times(oracle);
  const Trajectory exact = sample_extremal_at(spec, times);
  return max_deviation(exact, oracle);
}

SweepReport run_sweep(const SweepConfig& config) {
  SweepReport report;
  report.config = config;
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = 0; i < config.draws; ++i) {
    const ExtremalSpec spec = draw_spec(config.problem, config.kind, rng, config.bound, config.max_duration);
    const Deviation dev = compare_with_oracle(spec, config.step, config.compare_points);
    if (dev.state > report.worst_state || i == 0) {
      report.worst_state = dev.state;
      report.worst_index = i;
    }
    report.worst_covector = std::max(report.worst_covector, dev.covector.value_or(0.0));
    report.draws.push_back({spec, dev});
  }
  report.within_budget = report.worst_state <= config.budget;
  return report;
}

double order_ratio(const ExtremalSpec& spec, double step) {
  // Below a few steps both grids collapse to the same single step.
  if (!(spec.duration >= 4.0 * step)) {
    throw DomainError("order_ratio: duration must span at least 4 steps");
  }
  const double coarse = compare_with_oracle(spec, step).state;
  const double fine = compare_with_oracle(spec, 0.5 * step).state;
  return coarse / fine;
}

}  // namespace heis
