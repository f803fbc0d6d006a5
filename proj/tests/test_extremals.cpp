#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heis/extremals.hpp"
#include "support.hpp"

namespace heis {
namespace {

using test::distance;
using test::Draws;

constexpr double kPi = std::numbers::pi;

TEST(MaximizeControl, P1NormalUnitCovector) {
  const ControlDecision d = maximize_control(Problem::P1, {0, 0, -1}, ExtremalKind::Normal);
  ASSERT_TRUE(std::holds_alternative<Maximizer>(d));
  const Maximizer& m = std::get<Maximizer>(d);
  EXPECT_EQ(m.u.u1, 0.0);
  EXPECT_EQ(m.u.u2, 0.0);
  EXPECT_EQ(m.u.u3, 1.0);
  // h_u is 1-homogeneous in u, so the maximum value is 0 and the speed is 1.
  EXPECT_EQ(m.value, 0.0);
  EXPECT_EQ(m.length_rate, 1.0);
}

TEST(MaximizeControl, P1NormalCaseSplit) {
  EXPECT_TRUE(std::holds_alternative<TrivialOnly>(maximize_control(Problem::P1, {0, 0, -2}, ExtremalKind::Normal)));
  EXPECT_TRUE(std::holds_alternative<NoMaximum>(maximize_control(Problem::P1, {0, 0, 1}, ExtremalKind::Normal)));
  EXPECT_TRUE(std::holds_alternative<NoMaximum>(maximize_control(Problem::P1, {0, 0, -0.5}, ExtremalKind::Normal)));
  EXPECT_TRUE(std::holds_alternative<NoMaximum>(maximize_control(Problem::P1, {1, 0, -1}, ExtremalKind::Normal)));
}

TEST(MaximizeControl, P2AbnormalLightlikeRay) {
  const ControlDecision d = maximize_control(Problem::P2, {-1, 0, 1}, ExtremalKind::Abnormal);
  ASSERT_TRUE(std::holds_alternative<RayOfMaximizers>(d));
  const Control dir = std::get<RayOfMaximizers>(d).direction;
  EXPECT_EQ(dir.u1, 1.0);
  EXPECT_EQ(dir.u2, 0.0);
  EXPECT_EQ(dir.u3, 1.0);
  EXPECT_EQ(classify_control(Problem::P2, dir), ControlClass::Lightlike);
}

TEST(MaximizeControl, AbnormalCaseSplit) {
  EXPECT_TRUE(std::holds_alternative<NoMaximum>(maximize_control(Problem::P1, {1, 0, 0}, ExtremalKind::Abnormal)));
  EXPECT_TRUE(std::holds_alternative<NoMaximum>(maximize_control(Problem::P1, {0, 0, 1}, ExtremalKind::Abnormal)));
  EXPECT_TRUE(
      std::holds_alternative<TrivialOnly>(maximize_control(Problem::P1, {0, 0, -1}, ExtremalKind::Abnormal)));
  EXPECT_TRUE(
      std::holds_alternative<TrivialOnly>(maximize_control(Problem::P2, {-2, 1, 1}, ExtremalKind::Abnormal)));
  EXPECT_TRUE(std::holds_alternative<NoMaximum>(maximize_control(Problem::P2, {1, 0, 1}, ExtremalKind::Abnormal)));
}

/// Random admissible control of the problem's closed cone, including its boundary.
Control sample_cone(Problem problem, Draws& draw) {
  const double r = draw(0, 5);
  const double phi = draw(0, 2 * kPi);
  const double time = draw(0, 1) < 0.2 ? r : r + draw(0, 5);
  const double a = r * std::cos(phi), b = r * std::sin(phi);
  return problem == Problem::P1 ? Control{a, b, time} : Control{time, a, b};
}

// Brute-force oracle: sampled admissible controls never beat the reported maximum,
// and where no maximum is reported some control has a positive value (so scaling
// it up is unbounded).
TEST(MaximizeControl, AgreesWithConeSampling) {
  Draws draw(606);
  for (const Problem problem : {Problem::P1, Problem::P2}) {
    for (const ExtremalKind kind : {ExtremalKind::Normal, ExtremalKind::Abnormal}) {
      const double nu = multiplier(kind);
      for (int i = 0; i < 200; ++i) {
        Covector h{draw(-2, 2), draw(-2, 2), draw(-2, 2)};
        if (i % 3 == 0) {
          // land exactly on the normalized / lightlike shell
          const double shell = kind == ExtremalKind::Normal ? 1.0 : 0.0;
          if (problem == Problem::P1) {
            h.h3 = -std::sqrt(shell + h.h1 * h.h1 + h.h2 * h.h2);
          } else {
            h.h1 = -std::sqrt(shell + h.h2 * h.h2 + h.h3 * h.h3);
          }
        }
        const ControlDecision d = maximize_control(problem, h, kind);
        double best = -1e300;
        for (int k = 0; k < 400; ++k) {
          best = std::max(best, pontryagin_value(problem, h, sample_cone(problem, draw), nu));
        }
        if (std::holds_alternative<NoMaximum>(d)) {
          EXPECT_GT(best, 0.0) << to_string(problem) << " " << to_string(kind);
        } else if (std::holds_alternative<TrivialOnly>(d)) {
          EXPECT_LT(best, 0.0);
        } else if (const auto* m = std::get_if<Maximizer>(&d)) {
          EXPECT_LE(best, m->value + 1e-9);
          EXPECT_NEAR(m->value, 0.0, 1e-9);
          EXPECT_NEAR(m->length_rate, 1.0, 1e-9);
        } else {
          const Control dir = std::get<RayOfMaximizers>(d).direction;
          EXPECT_LE(best, 1e-9);
          EXPECT_NEAR(pontryagin_value(problem, h, dir, nu), 0.0, 1e-9);
        }
      }
    }
  }
}

TEST(CovectorFlow, Examples) {
  const FlowDerivative p1 = covector_flow(Problem::P1, ExtremalKind::Normal)({}, {0, 0, -1});
  EXPECT_EQ(p1.q_dot.z, 1.0);
  EXPECT_EQ(p1.q_dot.x, 0.0);
  EXPECT_EQ(p1.h_dot.h1, 0.0);
  EXPECT_EQ(p1.h_dot.h2, 0.0);

  const FlowDerivative p2 = covector_flow(Problem::P2, ExtremalKind::Normal)({}, {-1, 0, 0});
  EXPECT_EQ(p2.q_dot.x, 1.0);
  EXPECT_EQ(p2.q_dot.y, 0.0);
  EXPECT_EQ(p2.q_dot.z, 0.0);

  const FlowDerivative ab = covector_flow(Problem::P2, ExtremalKind::Abnormal)({}, {-1, 0, 1});
  EXPECT_EQ(ab.u.u1, 1.0);
  EXPECT_EQ(ab.u.u3, 1.0);
  EXPECT_EQ(ab.h_dot.h1, 0.0);
  EXPECT_EQ(ab.h_dot.h2, 1.0);
  EXPECT_EQ(ab.h_dot.h3, 0.0);
}

TEST(CovectorFlow, DegenerateP1AbnormalDirection) {
  EXPECT_THROW(covector_flow(Problem::P1, ExtremalKind::Abnormal)({}, {0, 0, -1}), DomainError);
}

TEST(EvalAbnormalP1, StartsAtIdentity) {
  const ExtremalState s = eval_abnormal_p1(0.0, 0.0);
  EXPECT_EQ(s.q, identity());
}

TEST(EvalAbnormalP1, ClosesAfterOnePeriod) {
  const GroupPoint q = eval_abnormal_p1(0.0, 2 * kPi).q;
  EXPECT_NEAR(q.x, 0.0, 1e-14);
  EXPECT_NEAR(q.y, 0.0, 1e-14);
  EXPECT_NEAR(q.z, kPi, 1e-14);
}

TEST(EvalAbnormalP1, HeightIndependentOfAngle) {
  Draws draw(707);
  for (int i = 0; i < 50; ++i) {
    const double t = draw(0, 10);
    EXPECT_DOUBLE_EQ(eval_abnormal_p1(draw(0, 2 * kPi), t).q.z, 0.5 * (t + std::sin(t)));
  }
}

TEST(EvalNormalP1, ZeroHyperbolicParameterIsVertical) {
  const ExtremalState s = eval_normal_p1(0.7, 0.0, 3.0);
  EXPECT_EQ(s.q.x, 0.0);
  EXPECT_EQ(s.q.y, 0.0);
  EXPECT_DOUBLE_EQ(s.q.z, 3.0);
  EXPECT_EQ(s.u.u3, 1.0);
}

TEST(EvalNormalP1, StaysOnUnitHyperboloid) {
  Draws draw(808);
  for (int i = 0; i < 100; ++i) {
    const Covector h = eval_normal_p1(draw(0, 2 * kPi), draw(-2, 2), draw(0, 10)).h;
    EXPECT_NEAR(dual_form(Problem::P1, h), 1.0, 1e-12 * (1 + h.h3 * h.h3));
  }
}

TEST(EvalAbnormalP2, ReferencePoint) {
  const GroupPoint q = eval_abnormal_p2(0.0, 1.0, 1.0).q;
  EXPECT_NEAR(q.x, std::sinh(1.0), 1e-15);
  EXPECT_NEAR(q.y, std::cosh(1.0) - 1, 1e-15);
  EXPECT_NEAR(q.z, (1 + std::sinh(1.0)) / 2, 1e-15);
  EXPECT_NEAR(q.x, 1.17520, 1e-5);
  EXPECT_NEAR(q.y, 0.54308, 1e-5);
  EXPECT_NEAR(q.z, 1.08760, 1e-5);
}

TEST(EvalAbnormalP2, StraightBranch) {
  const ExtremalState s = eval_abnormal_p2(1.0, 0.0, 2.0);
  EXPECT_EQ(s.q, (GroupPoint{2, 2, 0}));
  EXPECT_EQ(s.h.h1, -1.0);
}

TEST(EvalAbnormalP2, ZeroCovectorRejected) { EXPECT_THROW(eval_abnormal_p2(0.0, 0.0, 1.0), DomainError); }

TEST(EvalNormalP2, StraightBranch) {
  const GroupPoint q = eval_normal_p2(-1, 0, 0, 3).q;
  EXPECT_DOUBLE_EQ(q.x, 3.0);
  EXPECT_EQ(q.y, 0.0);
  EXPECT_EQ(q.z, 0.0);
}

TEST(EvalNormalP2, SmallH3MatchesStraightLine) {
  const GroupPoint q = eval_normal_p2(-std::sqrt(2.0 + 1e-12), 1, 1e-6, 1).q;
  EXPECT_NEAR(q.x, std::sqrt(2.0), 1e-5);
  EXPECT_NEAR(q.y, 1.0, 1e-5);
  EXPECT_NEAR(q.z, 0.0, 1e-5);
}

// The reference form divides by h3; evaluate it directly away from h3 = 0.
TEST(EvalNormalP2, MatchesDividedReferenceForm) {
  Draws draw(909);
  for (int i = 0; i < 100; ++i) {
    const double h3 = draw(0.2, 1.5) * (i % 2 == 0 ? 1 : -1);
    const P2NormalParams p = p2_normal_from(draw(-1.5, 1.5), h3);
    const double t = draw(0, 3);
    const double s = h3 * t;
    const double a = p.h1_0, b = p.h2_0;
    const double x = (b * (std::cosh(s) - 1) - a * std::sinh(s)) / h3;
    const double y = (b * std::sinh(s) - a * (std::cosh(s) - 1)) / h3;
    const double z = ((2 * h3 * h3 - a * a + b * b) * s + (a * a - b * b) * std::sinh(s)) / (2 * h3 * h3);
    const GroupPoint q = eval_normal_p2(a, b, h3, t).q;
    EXPECT_NEAR(q.x, x, 1e-11 * (1 + std::abs(x)));
    EXPECT_NEAR(q.y, y, 1e-11 * (1 + std::abs(y)));
    EXPECT_NEAR(q.z, z, 1e-10 * (1 + std::abs(z)));
  }
}

TEST(EvalNormalP2, RejectsBadNormalization) {
  EXPECT_THROW(eval_normal_p2(-1, 0.5, 0, 1), DomainError);
  EXPECT_THROW(eval_normal_p2(1, 0, 0, 1), DomainError);
  EXPECT_NO_THROW(eval_normal_p2(-std::sqrt(2.0), 1, 0, 1));
}

ExtremalSpec random_spec(Problem problem, ExtremalKind kind, Draws& draw, double max_duration) {
  return draw_spec(problem, kind, draw.engine(), 2.0, max_duration);
}

// Central differences of the closed form against the flow, step 1e-6.
TEST(ClosedForms, SolveTheFlow) {
  Draws draw(1001);
  const double step = 1e-6;
  for (const Problem problem : {Problem::P1, Problem::P2}) {
    for (const ExtremalKind kind : {ExtremalKind::Normal, ExtremalKind::Abnormal}) {
      const CovectorFlow flow = covector_flow(problem, kind);
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const ExtremalSpec spec = random_spec(problem, kind, draw, problem == Problem::P1 ? 10.0 : 2.0);
        const double t = std::max(spec.duration, 2 * step);
        const ExtremalState at = evaluate(spec.params, t);
        const ExtremalState plus = evaluate(spec.params, t + step);
        const ExtremalState minus = evaluate(spec.params, t - step);
        const FlowDerivative f = flow(at.q, at.h);
        const Tangent q_fd{(plus.q.x - minus.q.x) / (2 * step), (plus.q.y - minus.q.y) / (2 * step),
                           (plus.q.z - minus.q.z) / (2 * step)};
        const Covector h_fd{(plus.h.h1 - minus.h.h1) / (2 * step), (plus.h.h2 - minus.h.h2) / (2 * step),
                            (plus.h.h3 - minus.h.h3) / (2 * step)};
        const double scale = 1 + std::abs(at.q.x) + std::abs(at.q.y) + std::abs(at.q.z);
        worst = std::max(worst, distance(q_fd, f.q_dot) / scale);
        worst = std::max(worst, distance(h_fd, f.h_dot) / scale);
      }
      EXPECT_LE(worst, 1e-5) << to_string(problem) << " " << to_string(kind);
    }
  }
}

TEST(SampleExtremal, VerticalLineLength) {
  const Trajectory traj = sample_extremal({P1NormalParams{0.0, 0.0}, 5.0}, 6);
  ASSERT_EQ(traj.samples.size(), 6u);
  EXPECT_EQ(traj.total_length(), 5.0);
  EXPECT_EQ(traj.front().t, 0.0);
  EXPECT_EQ(traj.back().t, 5.0);
}

TEST(SampleExtremal, AbnormalHasZeroLength) {
  const Trajectory traj = sample_extremal({P2AbnormalParams{0.3, -1.2}, 4.0}, 50);
  for (const Sample& s : traj.samples) EXPECT_EQ(s.length, 0.0);
}

TEST(SampleExtremal, P1NormalHamiltonian) {
  const Trajectory traj = sample_extremal({P1NormalParams{0.0, 1.0}, 2.0}, 101);
  for (const Sample& s : traj.samples) {
    EXPECT_NEAR((s.h.h1 * s.h.h1 + s.h.h2 * s.h.h2 - s.h.h3 * s.h.h3) / 2, -0.5, 1e-14);
  }
}

TEST(SampleExtremal, RejectsBadGrids) {
  const ExtremalSpec spec{P1AbnormalParams{0.0}, 1.0};
  EXPECT_THROW(sample_extremal(spec, 1), DomainError);
  EXPECT_THROW(sample_extremal({P1AbnormalParams{0.0}, 0.0}, 5), DomainError);
  const double times[] = {0.0, 0.5, 0.5};
  EXPECT_THROW(sample_extremal_at(spec, times), DomainError);
  const double late[] = {0.1, 0.5};
  EXPECT_THROW(sample_extremal_at(spec, late), DomainError);
}

TEST(NormalExtremals, ConservationAndUnitMaximizer) {
  Draws draw(1101);
  for (const Problem problem : {Problem::P1, Problem::P2}) {
    for (int i = 0; i < 50; ++i) {
      const ExtremalSpec spec = random_spec(problem, ExtremalKind::Normal, draw, 10.0);
      const Trajectory traj = sample_extremal(spec, 200);
      const Covector h0 = traj.front().h;
      const double form0 = dual_form(problem, h0);
      for (const Sample& s : traj.samples) {
        EXPECT_EQ(s.h.h3, h0.h3);
        const double scale = s.h.h1 * s.h.h1 + s.h.h2 * s.h.h2 + s.h.h3 * s.h.h3;
        EXPECT_NEAR(dual_form(problem, s.h), form0, 1e-10 * std::max(1.0, scale));
        const ControlDecision d = maximize_control(problem, s.h, ExtremalKind::Normal);
        ASSERT_TRUE(std::holds_alternative<Maximizer>(d));
        // The rate is the root of a form with cancellation of order |h|^2.
        EXPECT_NEAR(std::get<Maximizer>(d).length_rate, 1.0, 1e-10 * std::max(1.0, scale));
      }
    }
  }
}

TEST(AbnormalExtremals, Lightlike) {
  Draws draw(1201);
  for (const Problem problem : {Problem::P1, Problem::P2}) {
    for (int i = 0; i < 50; ++i) {
      const ExtremalSpec spec = random_spec(problem, ExtremalKind::Abnormal, draw, 10.0);
      for (const Sample& s : sample_extremal(spec, 100).samples) {
        EXPECT_LE(std::abs(length_integrand(problem, s.u)), 1e-12);
      }
    }
  }
}

TEST(AbnormalP2, BoundaryIdentity) {
  Draws draw(1301);
  for (int i = 0; i < 200; ++i) {
    const double h3 = draw(-2, 2);
    const double t = draw(0, 2);
    const GroupPoint q = eval_abnormal_p2(draw(-2, 2), h3, t).q;
    const double span = std::abs(h3) * t;
    EXPECT_NEAR((q.x * q.x - q.y * q.y) / 2 + 1, std::cosh(span), 1e-9 * std::cosh(span));
    EXPECT_NEAR(std::abs(q.z), (span + std::sinh(span)) / 2, 1e-9 * std::max(1.0, std::abs(q.z)));
  }
}

/// Parameters of the same family restarted from the state at time t_mid.
ExtremalParams restart(const ExtremalParams& params, double t_mid) {
  const Covector h = evaluate(params, t_mid).h;
  struct Visitor {
    double t_mid;
    Covector h;
    ExtremalParams operator()(const P1AbnormalParams& p) const { return P1AbnormalParams{p.theta0 - t_mid}; }
    ExtremalParams operator()(const P1NormalParams& p) const {
      return P1NormalParams{p.theta0 - t_mid * std::cosh(p.a), p.a};
    }
    ExtremalParams operator()(const P2AbnormalParams& p) const { return P2AbnormalParams{h.h2, p.h3}; }
    ExtremalParams operator()(const P2NormalParams&) const { return P2NormalParams{h.h1, h.h2, h.h3}; }
  };
  return std::visit(Visitor{t_mid, h}, params);
}

TEST(ClosedForms, LeftTranslatedRestartReproducesTail) {
  Draws draw(1401);
  for (const Problem problem : {Problem::P1, Problem::P2}) {
    for (const ExtremalKind kind : {ExtremalKind::Normal, ExtremalKind::Abnormal}) {
      for (int i = 0; i < 30; ++i) {
        const ExtremalSpec spec = random_spec(problem, kind, draw, problem == Problem::P1 ? 10.0 : 2.0);
        const double t_mid = draw(0, 1) * spec.duration;
        const GroupPoint q_mid = evaluate(spec.params, t_mid).q;
        const ExtremalParams tail = restart(spec.params, t_mid);
        for (int k = 0; k <= 10; ++k) {
          const double t = t_mid + (spec.duration - t_mid) * k / 10.0;
          const GroupPoint direct = evaluate(spec.params, t).q;
          const GroupPoint composed = multiply(q_mid, evaluate(tail, t - t_mid).q);
          const double scale = std::max(1.0, std::abs(direct.x) + std::abs(direct.y) + std::abs(direct.z));
          EXPECT_LE(distance(direct, composed), 1e-8 * scale) << to_string(problem) << " " << to_string(kind);
        }
      }
    }
  }
}

// (y, z, h2, h3) -> (-y, -z, -h2, -h3) maps P2 extremals to P2 extremals.
TEST(EvalNormalP2, ReflectionSymmetry) {
  Draws draw(1501);
  for (int i = 0; i < 100; ++i) {
    const P2NormalParams p = p2_normal_from(draw(-2, 2), draw(-2, 2));
    const double t = draw(0, 3);
    const GroupPoint a = eval_normal_p2(p.h1_0, p.h2_0, p.h3, t).q;
    const GroupPoint b = eval_normal_p2(p.h1_0, -p.h2_0, -p.h3, t).q;
    EXPECT_NEAR(a.x, b.x, 1e-12 * (1 + std::abs(a.x)));
    EXPECT_NEAR(a.y, -b.y, 1e-12 * (1 + std::abs(a.y)));
    EXPECT_NEAR(a.z, -b.z, 1e-12 * (1 + std::abs(a.z)));
  }
}

}  // namespace
}  // namespace heis
