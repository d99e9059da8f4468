#include <gtest/gtest.h>

#include <cmath>

#include "nhjacobi/dynamics.hpp"
#include "nhjacobi/models.hpp"
#include "test_models.hpp"

using namespace nhj;
using nhj::testing::vec;

namespace {

// Endpoint error of `scheme` against the disk's closed-form flow.
double disk_error(Scheme scheme, double dt) {
  const ModelPtr m = make_model("disk", {{"R", 0.7}});
  const double th = 1.2, om = 0.9, phi = 0.3;
  const TangentState s0{vec({0.1, -0.2, 0.5, phi}),
                        vec({0.7 * th * std::cos(phi), 0.7 * th * std::sin(phi), th, om})};
  IntegrateOptions o;
  o.scheme = scheme;
  const Trajectory tr = integrate(*m, DynState{0.0, s0.q, s0.v}, dt, 2.0, o);
  const TangentState ref = *m->reference_solution(s0, 2.0);
  return (tr.samples.back().q - ref.q).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Dynamics, DiskMatchesClosedForm) { EXPECT_LT(disk_error(Scheme::RK4, 1e-3), 1e-10); }

TEST(Dynamics, ConvergenceOrders) {
  const double r4 = disk_error(Scheme::RK4, 0.1) / disk_error(Scheme::RK4, 0.05);
  const double r2 = disk_error(Scheme::RK2, 0.1) / disk_error(Scheme::RK2, 0.05);
  EXPECT_NEAR(std::log2(r4), 4.0, 0.3);
  EXPECT_NEAR(std::log2(r2), 2.0, 0.3);
}

TEST(Dynamics, ParticleCurvedBranch) {
  const ModelPtr m = make_model("particle");
  const TangentState s0{vec({0.3, -0.4, 0.2}), vec({0.8, 1.1, -0.4 * 0.8})};
  const Trajectory tr = integrate(*m, DynState{0.0, s0.q, s0.v}, 1e-3, 1.0);
  ASSERT_EQ(tr.samples.size(), 1001u);
  for (std::size_t i = 0; i < tr.samples.size(); i += 100) {
    const DynState& d = tr.samples[i];
    const TangentState ref = *m->reference_solution(s0, d.t);
    EXPECT_LT((d.q - ref.q).cwiseAbs().maxCoeff(), 1e-10) << d.t;
    EXPECT_LT((d.v - ref.v).cwiseAbs().maxCoeff(), 1e-10) << d.t;
  }
}

TEST(Dynamics, DiskWheelRatesAreConstant) {
  // For the rolling disk both wheel angles are cyclic and unforced.
  const ModelPtr m = make_model("disk", {{"R", 0.5}, {"I", 3.0}, {"J", 0.2}});
  for (const TangentState& s : sample_constrained_states(*m, 10)) {
    const DynState d{0.0, s.q, s.v};
    const VectorXd a = acceleration_connection(*m, d);
    EXPECT_NEAR(a[2], 0.0, 1e-14);
    EXPECT_NEAR(a[3], 0.0, 1e-14);
    // xddot is the time derivative of R thetadot cos(phi).
    EXPECT_NEAR(a[0], -0.5 * s.v[2] * s.v[3] * std::sin(s.q[3]), 1e-14);
    EXPECT_NEAR(a[1], 0.5 * s.v[2] * s.v[3] * std::cos(s.q[3]), 1e-14);
  }
}

TEST(Dynamics, ParticleMultiplierMatrix) {
  const double y = 1.7;
  const MatrixXd C = multiplier_matrix(*make_model("particle"), vec({0, y, 0}));
  ASSERT_EQ(C.rows(), 1);
  EXPECT_NEAR(C(0, 0), 1 + y * y, 1e-14);
}

TEST(Dynamics, EnergyIsKineticPlusPotential) {
  const ModelPtr m = make_model("particle_potential");
  const DynState d{0.0, vec({0, 0.5, 2.0}), vec({1.0, 2.0, 0.5})};
  EXPECT_DOUBLE_EQ(energy(*m, d), 0.5 * (1 + 4 + 0.25) + 2.0);
}

TEST(Dynamics, StepCount) {
  EXPECT_EQ(step_count(1e-3, 1.0), 1000);
  EXPECT_EQ(step_count(0.1, 0.3), 3);
  EXPECT_THROW(step_count(0.3, 1.0), InvalidInputError);
  EXPECT_THROW(step_count(0.0, 1.0), InvalidInputError);
  EXPECT_THROW(step_count(1e-3, -1.0), InvalidInputError);
}

TEST(Dynamics, OffDistributionVelocityIsRejected) {
  const ModelPtr m = make_model("particle");
  try {
    integrate(*m, DynState{0.0, vec({0, 0, 0}), vec({1, 1, 5})}, 1e-3, 0.01);
    FAIL() << "expected ConstraintViolationError";
  } catch (const ConstraintViolationError& e) {
    EXPECT_EQ(e.row(), 0);
    EXPECT_DOUBLE_EQ(e.residual(), 5.0);
  }
}

TEST(Dynamics, ProjectionRepairsInitialVelocity) {
  const ModelPtr m = make_model("particle");
  IntegrateOptions o;
  o.project_velocity = true;
  const Trajectory tr = integrate(*m, DynState{0.0, vec({0, 0.5, 0}), vec({1, 1, 5})}, 1e-3, 0.1, o);
  EXPECT_TRUE(tr.projected);
  EXPECT_LT(tr.max_constraint_residual, 1e-14);
  for (const DynState& d : tr.samples) EXPECT_LT(constraint_residual(*m, d).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Dynamics, DivergenceKeepsLastFiniteState) {
  const nhj::testing::Runaway m;
  try {
    integrate(m, DynState{0.0, vec({1.0}), vec({std::sqrt(2.0)})}, 1e-3, 2.0);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_TRUE(e.last_valid().q.allFinite());
    EXPECT_GT(e.last_valid().t, 0.5);
    EXPECT_LT(e.last_valid().t, 0.75);
  }
}

TEST(Dynamics, SingularConstraintMatrix) {
  const nhj::testing::NullLine m;
  EXPECT_THROW(acceleration_multiplier(m, DynState{0.0, vec({0, 0}), vec({1, 1})}), RegularityError);
  EXPECT_THROW(acceleration_connection(m, DynState{0.0, vec({0, 0}), vec({1, 1})}), RegularityError);
}

TEST(Dynamics, SchemeNames) {
  EXPECT_EQ(parse_scheme("rk4"), Scheme::RK4);
  EXPECT_EQ(parse_scheme("rk2"), Scheme::RK2);
  EXPECT_EQ(to_string(Scheme::RK2), "rk2");
  EXPECT_THROW(parse_scheme("euler"), InvalidInputError);
}

TEST(Dynamics, DeterministicRepeat) {
  const ModelPtr m = make_model("disk");
  const TangentState s = sample_constrained_states(*m, 1).front();
  const Trajectory a = integrate(*m, DynState{0.0, s.q, s.v}, 1e-3, 0.5);
  const Trajectory b = integrate(*m, DynState{0.0, s.q, s.v}, 1e-3, 0.5);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].q, b.samples[i].q);
    EXPECT_EQ(a.samples[i].v, b.samples[i].v);
  }
}
