#pragma once

// Projectors, Christoffel symbols, torsion and curvature of the
// nonholonomic connection at a chart point.
//
// Index conventions: gamma(k, i, j) is the coefficient of d_k in
// nabla_{d_i} d_j, torsion(m, i, j) = gamma(m, i, j) - gamma(m, j, i), and
// dgamma(k, i, j, l) = d gamma(k, i, j) / d q^l.

#include "nhjacobi/model.hpp"

namespace nhj {

struct Projectors {
  MatrixXd P;   // onto D
  MatrixXd Pp;  // onto the g-orthogonal complement, I - P
};

Projectors orthogonal_projector(const Model& model, const VectorXd& q);

// P = E (E^T G E)^{-1} E^T G on any real scalar kind (double, Jet1, Jet2).
// A singular E^T G E raises RegularityError.
template <class S>
MatX<S> projector(const Model& model, const VecX<S>& q);

Array3d levi_civita(const Model& model, const VectorXd& q);
Array3d nh_christoffel(const Model& model, const VectorXd& q);
Array4 christoffel_gradient(const Model& model, const VectorXd& q);
Array3d torsion(const Model& model, const VectorXd& q);

// R(X, Y)Z with components
//   X^i Y^j Z^l (d_i G^m_jl + G^k_jl G^m_ik - d_j G^m_il - G^k_il G^m_jk).
VectorXd curvature_apply(const Model& model, const VectorXd& q, const VectorXd& X,
                         const VectorXd& Y, const VectorXd& Z);

// Everything the dynamics and Jacobi code needs at one point.
// F = P G^{-1} dV is the projected potential force; dF(k, l) = d F^k / d q^l.
struct ConnectionData {
  VectorXd q;
  MatrixXd G;
  MatrixXd P;
  MatrixXd Pp;
  Array3d gammaG;
  Array3d gammaNH;
  Array3d torsion;
  VectorXd F;
  bool has_gradient = false;
  Array4 dGammaNH;
  MatrixXd dF;
};

// First-order data only (one jet pass); gradients are left empty unless
// `with_gradient` is set, which runs a second-order pass instead.
ConnectionData connection_data(const Model& model, const VectorXd& q, bool with_gradient = false);

VectorXd curvature_apply(const ConnectionData& cd, const VectorXd& X, const VectorXd& Y,
                         const VectorXd& Z);

// nabla_X Y for fields with values X, Y and Jacobian dY(i, l) = d Y^i / d q^l.
VectorXd covariant_derivative(const Array3d& gamma, const VectorXd& X, const VectorXd& Y,
                              const MatrixXd& dY);

// gamma(k, i, j) a^i b^j.
VectorXd contract(const Array3d& gamma, const VectorXd& a, const VectorXd& b);

}  // namespace nhj
