#include <gtest/gtest.h>

#include <cmath>

#include "nhjacobi/models.hpp"
#include "nhjacobi/tensors.hpp"
#include "test_models.hpp"

using namespace nhj;
using nhj::testing::vec;

namespace {

double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Projector, ParticleByHand) {
  // E = [e1 e2] with e1 = (1, 0, y), e2 = (0, 1, 0) and g = I, so P is the
  // euclidean projector E (E^T E)^{-1} E^T.
  const double y = 0.6, s = 1 + y * y;
  MatrixXd expected(3, 3);
  expected << 1 / s, 0, y / s, 0, 1, 0, y / s, 0, y * y / s;
  const Projectors p = orthogonal_projector(*make_model("particle"), vec({0.1, y, -0.2}));
  EXPECT_LT(max_abs(p.P - expected), 1e-15);
  EXPECT_LT(max_abs(p.P + p.Pp - MatrixXd::Identity(3, 3)), 1e-15);
}

TEST(Projector, SingularRestrictionRaisesRegularityError) {
  const nhj::testing::NullLine m;
  try {
    orthogonal_projector(m, vec({0.2, 0.3}));
    FAIL() << "expected RegularityError";
  } catch (const RegularityError& e) {
    EXPECT_EQ(e.point(), (std::vector<double>{0.2, 0.3}));
  }
}

TEST(Connection, FreeModelIsFlat) {
  const ConnectionData cd = connection_data(*make_model("free"), vec({0.3, -0.1, 0.5}), true);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(cd.gammaNH(k, i, j), 0.0);
        for (int l = 0; l < 3; ++l) EXPECT_EQ(cd.dGammaNH(k, i, j, l), 0.0);
      }
}

TEST(Connection, SphereLeviCivita) {
  const nhj::testing::Sphere m;
  const double th = 0.9;
  const ConnectionData cd = connection_data(m, vec({th, 0.4}));
  // Unconstrained: nonholonomic connection is Levi-Civita, torsion free.
  EXPECT_NEAR(cd.gammaNH(0, 1, 1), -std::sin(th) * std::cos(th), 1e-15);
  EXPECT_NEAR(cd.gammaNH(1, 0, 1), std::cos(th) / std::sin(th), 1e-15);
  EXPECT_NEAR(cd.gammaNH(1, 1, 0), std::cos(th) / std::sin(th), 1e-15);
  EXPECT_EQ(cd.gammaNH(0, 0, 0), 0.0);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(cd.torsion(k, i, j), 0.0, 1e-15);
}

TEST(Curvature, SphereHasUnitCurvature) {
  const nhj::testing::Sphere m;
  for (const VectorXd& q : sample_box(m.default_box(), 10)) {
    const ConnectionData cd = connection_data(m, q, true);
    const VectorXd X = vec({0.3, -1.2}), Y = vec({0.7, 0.5}), Z = vec({-0.4, 0.9});
    // Constant curvature +1: R(X, Y)Z = g(Y, Z) X - g(X, Z) Y.
    const VectorXd expected = Y.dot(cd.G * Z) * X - X.dot(cd.G * Z) * Y;
    EXPECT_LT((curvature_apply(cd, X, Y, Z) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Curvature, RequiresGradientsAndMatchingShapes) {
  const ModelPtr m = make_model("particle");
  const ConnectionData flat = connection_data(*m, vec({0, 0, 0}));
  const VectorXd X = vec({1, 0, 0});
  EXPECT_THROW(curvature_apply(flat, X, X, X), InvalidInputError);
  const ConnectionData full = connection_data(*m, vec({0, 0, 0}), true);
  EXPECT_THROW(curvature_apply(full, X, vec({1, 0}), X), InvalidInputError);
}

TEST(Connection, GradientMatchesCentralDifferences) {
  const ModelPtr m = make_model("disk", {{"R", 0.5}, {"I", 2.0}});
  const VectorXd q = vec({0.2, -0.3, 0.8, 1.1});
  const Array4 dg = christoffel_gradient(*m, q);
  const double h = 1e-6;
  double worst = 0.0;
  for (int l = 0; l < 4; ++l) {
    VectorXd e = VectorXd::Zero(4);
    e[l] = h;
    const Array3d p = nh_christoffel(*m, q + e), n = nh_christoffel(*m, q - e);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          worst = std::max(worst, std::abs(dg(k, i, j, l) - (p(k, i, j) - n(k, i, j)) / (2 * h)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Connection, PotentialForceIsProjectedGradient) {
  // V = z, g = I: F = P e_z, the third column of the particle projector.
  const double y = -1.3, s = 1 + y * y;
  const ConnectionData cd = connection_data(*make_model("particle_potential"), vec({0.0, y, 0.4}));
  EXPECT_NEAR(cd.F[0], y / s, 1e-15);
  EXPECT_NEAR(cd.F[1], 0.0, 1e-15);
  EXPECT_NEAR(cd.F[2], y * y / s, 1e-15);
}

TEST(Connection, TorsionIsSkewPart) {
  const ModelPtr m = make_model("disk");
  const VectorXd q = vec({0.1, 0.2, -0.5, 0.7});
  const Array3d g = nh_christoffel(*m, q), t = torsion(*m, q);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        EXPECT_EQ(t(k, i, j), g(k, i, j) - g(k, j, i));
        EXPECT_EQ(t(k, i, j), -t(k, j, i));
      }
}

TEST(Connection, CovariantDerivativeAndContract) {
  Array3d g(2);
  g(0, 0, 1) = 2.0;
  g(1, 1, 1) = -1.0;
  const VectorXd X = vec({1.0, 3.0}), Y = vec({0.5, 2.0});
  MatrixXd dY(2, 2);
  dY << 1, 0, 0, 1;
  const VectorXd c = contract(g, X, Y);
  EXPECT_EQ(c, vec({2.0 * 1.0 * 2.0, -1.0 * 3.0 * 2.0}));
  EXPECT_EQ(covariant_derivative(g, X, Y, dY), X + c);
}
