#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "nhjacobi/jacobi.hpp"
#include "nhjacobi/models.hpp"
#include "test_models.hpp"

using namespace nhj;
using nhj::testing::vec;

namespace {

// Equator of the unit sphere traversed at unit speed.
struct Equator {
  std::shared_ptr<nhj::testing::Sphere> model = std::make_shared<nhj::testing::Sphere>();
  VectorXd q0 = vec({M_PI / 2, 0.0});
  VectorXd v0 = vec({0.0, 1.0});
  Trajectory base() const { return integrate(*model, DynState{0.0, q0, v0}, 1e-3, 1.0); }
};

double max_W(const JacobiRun& r) {
  double m = 0.0;
  for (const JacobiState& s : r.samples) m = std::max(m, s.W.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST(Jacobi, SphereFieldIsSine) {
  // Unit curvature: the normal field with W(0) = 0, W'(0) = 1 is sin(t).
  const Equator eq;
  const JacobiRun direct = integrate_jacobi_direct(*eq.model, eq.base(), vec({0, 0}), vec({1, 0}));
  const JacobiRun lift = integrate_jacobi_via_lift(*eq.model, eq.q0, eq.v0, vec({0, 0}), vec({1, 0}), 1e-3, 1.0);
  for (const JacobiRun* r : {&direct, &lift}) {
    for (const JacobiState& s : r->samples) {
      EXPECT_NEAR(s.W[0], std::sin(s.t), 1e-12);
      EXPECT_NEAR(s.W[1], 0.0, 1e-12);
      EXPECT_NEAR(s.Wd[0], std::cos(s.t), 1e-12);
    }
  }
}

TEST(Jacobi, ResidualScoresSampledFields) {
  const Equator eq;
  const Trajectory base = eq.base();
  std::vector<VectorXd> good, bad;
  for (const DynState& d : base.samples) {
    good.push_back(vec({std::sin(d.t), 0.0}));
    bad.push_back(vec({std::sin(2 * d.t), 0.0}));
  }
  const auto rg = jacobi_residual(*eq.model, base, good);
  const auto rb = jacobi_residual(*eq.model, base, bad);
  ASSERT_EQ(rg.size(), base.samples.size());
  for (std::size_t i : {0u, 1u}) {
    EXPECT_TRUE(std::isnan(rg[i]));
    EXPECT_TRUE(std::isnan(rg[rg.size() - 1 - i]));
  }
  double worst_good = 0.0, worst_bad = 0.0;
  for (std::size_t i = 2; i + 2 < rg.size(); ++i) {
    worst_good = std::max(worst_good, rg[i]);
    worst_bad = std::max(worst_bad, rb[i]);
  }
  EXPECT_LT(worst_good, 1e-9);
  EXPECT_GT(worst_bad, 1.0);  // sin(2t) misses the equation by 3 sin(2t)
}

TEST(Jacobi, ResidualNeedsEnoughSamples) {
  const Equator eq;
  const Trajectory base = integrate(*eq.model, DynState{0.0, eq.q0, eq.v0}, 1e-3, 3e-3);
  EXPECT_THROW(jacobi_residual(*eq.model, base, std::vector<VectorXd>(4, vec({0, 0}))), InvalidInputError);
}

TEST(Jacobi, Linearity) {
  const ModelPtr m = make_model("disk");
  const TangentState s = sample_constrained_states(*m, 1).front();
  const Trajectory base = integrate(*m, DynState{0.0, s.q, s.v}, 1e-3, 1.0);
  // An arbitrary admissible seed: the one a perturbation of the start induces.
  const JacobiRun fd = fd_variation_oracle(*m, s.q, s.v, vec({0.1, 0.2, 0.3, 0.4}), vec({0, 0, 0.5, -0.2}),
                                           1e-4, 1e-3, 1e-3 * 4);
  const JacobiRun one = integrate_jacobi_direct(*m, base, fd.W0_effective, fd.Wd0_effective);
  const JacobiRun two = integrate_jacobi_direct(*m, base, 2.0 * fd.W0_effective, 2.0 * fd.Wd0_effective);
  for (std::size_t i = 0; i < one.samples.size(); ++i) {
    EXPECT_LT((two.samples[i].W - 2.0 * one.samples[i].W).cwiseAbs().maxCoeff(), 1e-13);
  }
  const JacobiRun zero = integrate_jacobi_direct(*m, base, VectorXd::Zero(4), VectorXd::Zero(4));
  EXPECT_EQ(max_W(zero), 0.0);
}

TEST(Jacobi, FiniteDifferenceErrorIsSecondOrder) {
  const ModelPtr m = make_model("particle");
  const VectorXd q0 = vec({0.1, 0.2, 0.3}), v0 = vec({1.0, 0.5, 0.2});
  const VectorXd dq = vec({0.3, -0.2, 0.1}), dv = vec({0.2, 0.4, -0.1});
  auto dev = [&](double eps) {
    const JacobiRun fd = fd_variation_oracle(*m, q0, v0, dq, dv, eps, 1e-3, 1.0);
    const JacobiRun d = integrate_jacobi_direct(*m, integrate(*m, DynState{0.0, q0, v0}, 1e-3, 1.0),
                                                fd.W0_effective, fd.Wd0_effective);
    return max_deviation(d, fd);
  };
  const double ratio = dev(1e-2) / dev(1e-3);
  EXPECT_GT(ratio, 60.0);
  EXPECT_LT(ratio, 160.0);
}

TEST(Jacobi, RejectsSeedOffLiftedDistribution) {
  const ModelPtr m = make_model("particle");
  const Trajectory base = integrate(*m, DynState{0.0, vec({0, 0, 0}), vec({1, 1, 0})}, 1e-3, 0.1);
  EXPECT_THROW(integrate_jacobi_direct(*m, base, vec({0, 0, 0}), vec({0, 0, 1})), ConstraintViolationError);
  EXPECT_THROW(integrate_jacobi_direct(*m, base, vec({0, 0}), vec({0, 0, 0})), InvalidInputError);
}

TEST(Jacobi, ConstantVerticalFieldOnParticle) {
  // Nothing in the particle depends on z, so d/dz is carried unchanged.
  const ModelPtr m = make_model("particle");
  const Trajectory base = integrate(*m, DynState{0.0, vec({0.2, -0.3, 0}), vec({0.5, 0.8, -0.15})}, 1e-3, 1.0);
  const JacobiRun r = integrate_jacobi_direct(*m, base, vec({0, 0, 1}), vec({0, 0, 0}));
  for (const JacobiState& s : r.samples) {
    EXPECT_EQ(s.W, vec({0, 0, 1}));
    EXPECT_EQ(s.Wd, vec({0, 0, 0}));
  }
}

TEST(Jacobi, RunsCarryResidualsAndMultipliers) {
  const ModelPtr m = make_model("particle");
  const JacobiRun r = integrate_jacobi_via_lift(*m, vec({0, 0, 0}), vec({1, 1, 0}), vec({0, 0, 1}),
                                                vec({0, 0, 0}), 1e-3, 0.2);
  EXPECT_EQ(r.method, JacobiMethod::Lift);
  EXPECT_EQ(r.res_lifted.size(), r.samples.size());
  EXPECT_EQ(r.res_jacobi.size(), r.samples.size());
  EXPECT_EQ(lifted_multipliers(*m, r).size(), r.samples.size());
  EXPECT_EQ(lifted_multipliers(*m, r).front().lambda.size(), 2);
}

TEST(Jacobi, DeviationRequiresMatchingGrids) {
  const ModelPtr m = make_model("free");
  const VectorXd z = VectorXd::Zero(3), v = vec({1, 0, 0});
  const JacobiRun a = integrate_jacobi_via_lift(*m, z, v, z, v, 1e-3, 0.1);
  const JacobiRun b = integrate_jacobi_via_lift(*m, z, v, z, v, 1e-3, 0.2);
  const JacobiRun c = integrate_jacobi_via_lift(*m, z, v, z, v, 2e-3, 0.2);
  EXPECT_THROW(max_deviation(a, b), InvalidInputError);
  EXPECT_THROW(max_deviation(b, c), InvalidInputError);
  EXPECT_EQ(max_deviation(a, a), 0.0);
}

TEST(Jacobi, MethodNames) {
  EXPECT_EQ(to_string(JacobiMethod::Direct), "direct");
  EXPECT_EQ(to_string(JacobiMethod::Lift), "lift");
  EXPECT_EQ(to_string(JacobiMethod::FD), "fd");
}
