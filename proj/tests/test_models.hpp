#pragma once

// Small models that exist only to give tests independent oracles or to
// provoke specific failures.

#include <cmath>
#include <memory>

#include "nhjacobi/model.hpp"

namespace nhj::testing {

// Unit sphere in (theta, phi), unconstrained. Curvature is +1 everywhere, so
// R(X, Y)Z = g(Y, Z) X - g(X, Z) Y, and the equator is a geodesic with
// Jacobi field sin(t) d/dtheta.
class Sphere final : public GenericModel<Sphere> {
 public:
  const std::string& name() const override { return name_; }
  int dim() const override { return 2; }
  int rank() const override { return 2; }
  ChartBox default_box() const override {
    VectorXd lo(2), hi(2);
    lo << 0.4, -3.0;
    hi << 2.7, 3.0;
    return {lo, hi};
  }
  template <class S>
  MatX<S> metric_t(const VecX<S>& q) const {
    using std::sin;
    MatX<S> G = MatX<S>::Zero(2, 2);
    G(0, 0) = S(1.0);
    G(1, 1) = sin(q[0]) * sin(q[0]);
    return G;
  }
  template <class S>
  MatX<S> frame_t(const VecX<S>&) const {
    return MatX<S>::Identity(2, 2);
  }
  template <class S>
  MatX<S> annihilator_t(const VecX<S>&) const {
    return MatX<S>(0, 2);
  }
  template <class S>
  S potential_t(const VecX<S>&) const {
    return S(0.0);
  }

 private:
  std::string name_ = "sphere";
};

// Lorentzian plane with D along the null direction (1, 1): E^T G E = 0.
class NullLine final : public GenericModel<NullLine> {
 public:
  const std::string& name() const override { return name_; }
  int dim() const override { return 2; }
  int rank() const override { return 1; }
  ChartBox default_box() const override { return {VectorXd::Constant(2, -1.0), VectorXd::Constant(2, 1.0)}; }
  template <class S>
  MatX<S> metric_t(const VecX<S>&) const {
    MatX<S> G = MatX<S>::Zero(2, 2);
    G(0, 0) = S(1.0);
    G(1, 1) = S(-1.0);
    return G;
  }
  template <class S>
  MatX<S> frame_t(const VecX<S>&) const {
    MatX<S> E(2, 1);
    E(0, 0) = S(1.0);
    E(1, 0) = S(1.0);
    return E;
  }
  template <class S>
  MatX<S> annihilator_t(const VecX<S>&) const {
    MatX<S> M(1, 2);
    M(0, 0) = S(1.0);
    M(0, 1) = S(-1.0);
    return M;
  }
  template <class S>
  S potential_t(const VecX<S>&) const {
    return S(0.0);
  }

 private:
  std::string name_ = "null_line";
};

// D = span{x d/dx}: the frame vanishes on x = 0.
class Pinched final : public GenericModel<Pinched> {
 public:
  const std::string& name() const override { return name_; }
  int dim() const override { return 2; }
  int rank() const override { return 1; }
  ChartBox default_box() const override { return {VectorXd::Constant(2, -1.0), VectorXd::Constant(2, 1.0)}; }
  template <class S>
  MatX<S> metric_t(const VecX<S>&) const {
    return MatX<S>::Identity(2, 2);
  }
  template <class S>
  MatX<S> frame_t(const VecX<S>& q) const {
    MatX<S> E = MatX<S>::Zero(2, 1);
    E(0, 0) = q[0];
    return E;
  }
  template <class S>
  MatX<S> annihilator_t(const VecX<S>&) const {
    MatX<S> M = MatX<S>::Zero(1, 2);
    M(0, 1) = S(1.0);
    return M;
  }
  template <class S>
  S potential_t(const VecX<S>&) const {
    return S(0.0);
  }

 private:
  std::string name_ = "pinched";
};

// Free line with V = -x^4: xddot = 4 x^3 blows up in finite time.
class Runaway final : public GenericModel<Runaway> {
 public:
  const std::string& name() const override { return name_; }
  int dim() const override { return 1; }
  int rank() const override { return 1; }
  bool has_potential() const override { return true; }
  ChartBox default_box() const override { return {VectorXd::Constant(1, -1.0), VectorXd::Constant(1, 1.0)}; }
  template <class S>
  MatX<S> metric_t(const VecX<S>&) const {
    return MatX<S>::Identity(1, 1);
  }
  template <class S>
  MatX<S> frame_t(const VecX<S>&) const {
    return MatX<S>::Identity(1, 1);
  }
  template <class S>
  MatX<S> annihilator_t(const VecX<S>&) const {
    return MatX<S>(0, 1);
  }
  template <class S>
  S potential_t(const VecX<S>& q) const {
    return -(q[0] * q[0] * q[0] * q[0]);
  }

 private:
  std::string name_ = "runaway";
};

inline VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Max-norm that is 0 for empty operands (codimension-0 models).
inline double inf_norm(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace nhj::testing
