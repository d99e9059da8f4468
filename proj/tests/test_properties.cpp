// Structural identities checked at quasi-random states.

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <memory>

#include "nhjacobi/jacobi.hpp"
#include "nhjacobi/lift.hpp"
#include "nhjacobi/models.hpp"
#include "nhjacobi/symmetry.hpp"
#include "nhjacobi/tensors.hpp"
#include "test_models.hpp"

using namespace nhj;
using nhj::testing::inf_norm;
using nhj::testing::vec;

namespace {

const std::vector<std::string> kAll{"particle", "particle_potential", "disk", "free",
                                    "particle:lift", "particle_potential:lift", "disk:lift", "free:lift"};

// A lifted admissible state read as a base state carrying (W, Wd).
JacobiState as_jacobi(int n, const TangentState& lifted) {
  return JacobiState{0.0, lifted.q.head(n), lifted.v.head(n), lifted.q.tail(n), lifted.v.tail(n)};
}

template <class S>
MatrixXd to_plain(const MatX<S>& m) {
  MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = value_of(m(i, j));
  return out;
}

}  // namespace

TEST(ModelProperties, AnnihilatorKillsFrame) {
  for (const std::string& name : kAll) {
    const ModelPtr m = make_model(name);
    for (const VectorXd& q : sample_box(m->default_box(), 100)) {
      EXPECT_LT(inf_norm(evaluate_annihilator(*m, q) * evaluate_frame(*m, q)), 1e-12) << name;
    }
  }
}

TEST(ModelProperties, RiemannianMetricsArePositive) {
  for (const std::string& name : builtin_model_names()) {
    const ModelPtr m = make_model(name);
    ASSERT_EQ(m->signature(), Signature::Riemannian);
    for (const VectorXd& q : sample_box(m->default_box(), 100)) {
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatrixXd>(evaluate_metric(*m, q)).eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(ModelProperties, EvaluatorsAgreeAcrossScalarKinds) {
  for (const std::string& name : kAll) {
    const ModelPtr m = make_model(name);
    for (const VectorXd& q : sample_box(m->default_box(), 10)) {
      const VecX<double> x = cast_vec<double>(q);
      const VecX<Jet2> x2 = cast_vec<Jet2>(q);  // zero derivative parts
      EXPECT_EQ(to_plain(m->metric(x)), to_plain(m->metric(x2))) << name;
      EXPECT_EQ(to_plain(m->frame(x)), to_plain(m->frame(x2))) << name;
      EXPECT_EQ(to_plain(m->annihilator(x)), to_plain(m->annihilator(x2))) << name;
      EXPECT_EQ(m->potential(x), m->potential(x2).value()) << name;
      EXPECT_EQ(to_plain(m->metric(x)), to_plain(m->metric(seed<Jet1>(q)))) << name;
    }
  }
}

TEST(LiftProperties, ProjectsOntoBaseFlow) {
  for (const std::string base : {"particle", "particle_potential", "disk", "free"}) {
    const ModelPtr b = make_model(base);
    const ModelPtr l = lift_model(b);
    const int n = b->dim();
    for (const TangentState& s : sample_constrained_states(*l, 30)) {
      const VectorXd lifted = acceleration_connection(*l, DynState{0.0, s.q, s.v});
      const VectorXd plain = acceleration_connection(*b, DynState{0.0, s.q.head(n), s.v.head(n)});
      EXPECT_LT((lifted.head(n) - plain).cwiseAbs().maxCoeff(), 1e-10) << base;
    }
  }
}

TEST(JacobiProperties, VerticalBlockIsJacobiEquation) {
  for (const std::string base : {"particle", "particle_potential", "disk", "free"}) {
    const ModelPtr b = make_model(base);
    const ModelPtr l = lift_model(b);
    const int n = b->dim();
    for (const TangentState& s : sample_constrained_states(*l, 30)) {
      const VectorXd lifted = acceleration_connection(*l, DynState{0.0, s.q, s.v});
      EXPECT_LT((lifted.tail(n) - jacobi_rhs(*b, as_jacobi(n, s))).cwiseAbs().maxCoeff(), 1e-10) << base;
    }
  }
}

TEST(JacobiProperties, CoordinateFormMatchesCovariantForm) {
  // Along a curve with qddot = -Gamma(v, v) the coordinate Jacobi operator
  //   Wdd + W.dGamma(v, v) + Gamma(v, Wd) + Gamma(Wd, v)
  // equals  D_t D_t W + D_t T(W, v) + R(W, v) v  for every W, Wd, Wdd.
  std::vector<ModelPtr> models{make_model("particle"), make_model("disk", {{"R", 0.6}, {"I", 1.7}}),
                               std::make_shared<nhj::testing::Sphere>()};
  for (const ModelPtr& m : models) {
    const int n = m->dim();
    const ModelPtr l = lift_model(m);
    const auto extra = sample_box({VectorXd::Constant(n, -1.0), VectorXd::Constant(n, 1.0)}, 20, 3);
    const auto states = sample_constrained_states(*l, 20);
    for (std::size_t p = 0; p < states.size(); ++p) {
      const JacobiState s = as_jacobi(n, states[p]);
      const VectorXd Wdd = extra[p];
      const ConnectionData cd = connection_data(*m, s.q, true);
      const Array3d& G = cd.gammaNH;
      const VectorXd& v = s.v;
      const VectorXd acc = -contract(G, v, v);

      // Gamma and torsion differentiated along the curve.
      Array3d dG(n), dT(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int l2 = 0; l2 < n; ++l2) dG(k, i, j) += cd.dGammaNH(k, i, j, l2) * v[l2];
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) dT(k, i, j) = dG(k, i, j) - dG(k, j, i);

      // D_t W = Wd + Gamma(v, W), differentiated once more.
      const VectorXd U = s.Wd + contract(G, v, s.W);
      const VectorXd Udot = Wdd + contract(dG, v, s.W) + contract(G, acc, s.W) + contract(G, v, s.Wd);
      const VectorXd DDW = Udot + contract(G, v, U);
      // D_t T(W, v).
      const VectorXd S = contract(cd.torsion, s.W, v);
      const VectorXd Sdot = contract(dT, s.W, v) + contract(cd.torsion, s.Wd, v) + contract(cd.torsion, s.W, acc);
      const VectorXd DT = Sdot + contract(G, v, S);
      const VectorXd covariant = DDW + DT + curvature_apply(cd, s.W, v, v);

      const VectorXd coordinate = Wdd - jacobi_rhs(cd, s);
      EXPECT_LT((covariant - coordinate).cwiseAbs().maxCoeff(), 1e-9) << m->name();
    }
  }
}

TEST(JacobiProperties, DirectOutputHasSmallResidual) {
  const ModelPtr m = make_model("disk");
  const TangentState s = sample_constrained_states(*m, 1, 1.0, 7).front();
  const Trajectory base = integrate(*m, DynState{0.0, s.q, s.v}, 1e-3, 1.0);
  const JacobiRun fd = fd_variation_oracle(*m, s.q, s.v, vec({0.2, -0.1, 0.3, 0.5}), vec({0, 0, -0.4, 0.2}),
                                           1e-4, 1e-3, 4e-3);
  const JacobiRun run = integrate_jacobi_direct(*m, base, fd.W0_effective, fd.Wd0_effective);
  std::vector<VectorXd> W;
  for (const JacobiState& st : run.samples) W.push_back(st.W);
  const auto res = jacobi_residual(*m, base, W);
  for (std::size_t i = 2; i + 2 < res.size(); ++i) EXPECT_LT(res[i], 1e-6);
}

TEST(SymmetryProperties, LieDerivativeIsSymmetric) {
  const ModelPtr m = make_model("disk");
  for (const std::string field : {"dtheta", "zero"}) {
    for (const VectorXd& q : sample_box(m->default_box(), 20)) {
      const MatrixXd L = lie_derivative_metric(*m, *make_field(field, 4), q);
      EXPECT_LT((L - L.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
  const ModelPtr p = make_model("particle");
  for (const VectorXd& q : sample_box(p->default_box(), 20)) {
    const MatrixXd L = lie_derivative_metric(*p, *make_field("counterexample1", 3, {{"u", 0.7}}), q);
    EXPECT_LT((L - L.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(SymmetryProperties, ZeroFieldAuditsToZero) {
  for (const std::string& name : builtin_model_names()) {
    const ModelPtr m = make_model(name);
    const SymmetryReport r = audit(*m, *make_field("zero", m->dim()), sample_box(m->default_box(), 20));
    EXPECT_EQ(r.cond_i, 0.0);
    EXPECT_EQ(r.cond_ii, 0.0);
    EXPECT_EQ(r.cond_iii, 0.0);
    EXPECT_EQ(r.killing, 0.0);
  }
}

TEST(SymmetryProperties, AuditedSymmetriesAreJacobi) {
  int audited = 0;
  for (const std::string& name : builtin_model_names()) {
    const ModelPtr m = make_model(name);
    for (const std::string& field : builtin_field_names()) {
      VectorFieldPtr W;
      try {
        W = make_field(field, m->dim());
      } catch (const InvalidInputError&) {
        continue;  // field does not live on this chart
      }
      if (!audit(*m, *W, sample_box(m->default_box(), 30)).symmetry()) continue;
      ++audited;
      for (const TangentState& s : sample_constrained_states(*m, 5, 1.0, 13)) {
        const Trajectory tr = integrate(*m, DynState{0.0, s.q, s.v}, 1e-3, 1.0);
        EXPECT_TRUE(verify_symmetry_jacobi(*m, *W, tr).passed()) << name << " / " << field;
      }
    }
  }
  EXPECT_GE(audited, 6);
}

TEST(TensorProperties, ParticleSymbolDerivative) {
  // d/dy of 2y / (1 + y^2)^2 is 2(1 - 3y^2) / (1 + y^2)^3.
  const ModelPtr m = make_model("particle");
  for (double y : {0.0, 0.4, -1.1}) {
    const Array4 d = christoffel_gradient(*m, vec({0.2, y, -0.3}));
    const double s = 1 + y * y;
    EXPECT_NEAR(d(0, 1, 0, 1), 2 * (1 - 3 * y * y) / (s * s * s), 1e-13) << y;
  }
}

TEST(TensorProperties, HessiansAreSymmetric) {
  const ModelPtr m = make_model("disk", {{"R", 0.8}});
  for (const VectorXd& q : sample_box(m->default_box(), 10)) {
    const MatX<Jet2> G = m->metric(seed<Jet2>(q));
    const MatX<Jet2> E = m->frame(seed<Jet2>(q));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        EXPECT_LT(std::abs(G(i, i).dd(i, j) - G(i, i).dd(j, i)), 1e-14);
        EXPECT_LT(std::abs(E(0, 0).dd(i, j) - E(0, 0).dd(j, i)), 1e-14);
      }
  }
}
