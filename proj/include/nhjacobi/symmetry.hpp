#pragma once

// Auditing candidate infinitesimal symmetries W:
//   (i)   [W, e_a] stays in D             measured as |M [W, e_a]|
//   (ii)  (L_W g)(e_a, e_b) = 0
//   (iii) (L_W g)([e_a, e_b], e_c) = 0
//   Killing: L_W g = 0 in the coordinate frame.
// Pointwise checks at sample points stand in for the section-level
// conditions.

#include <map>
#include <string>
#include <vector>

#include "nhjacobi/dynamics.hpp"

namespace nhj {

using FieldParams = std::map<std::string, double>;

// Registered fields:
//   zero             W = 0 (any model)
//   dz               d/dz on 3-dimensional models
//   dtheta           d/dtheta on the disk
//   counterexample1  (u/xdot0)(x - x0)(d/dx + y d/dz)
//   counterexample2  (u/xdot0)((x - x0) d/dx + (z - z0) d/dz)
// The counterexamples take u, x0, z0, xdot0 (defaults 1, 0, 0, 1).
VectorFieldPtr make_field(const std::string& name, int dim, const FieldParams& params = {});
std::vector<std::string> builtin_field_names();

MatrixXd lie_derivative_metric(const Model& model, const VectorField& W, const VectorXd& q);
VectorXd lie_bracket(const Model& model, const VectorField& W, int a, const VectorXd& q);

struct SymmetryReport {
  std::string field;
  int samples = 0;
  double tol = 1e-10;
  double cond_i = 0.0;
  double cond_ii = 0.0;
  double cond_iii = 0.0;
  double killing = 0.0;
  bool pass_i() const { return cond_i <= tol; }
  bool pass_ii() const { return cond_ii <= tol; }
  bool pass_iii() const { return cond_iii <= tol; }
  bool pass_killing() const { return killing <= tol; }
  bool symmetry() const { return pass_i() && pass_ii() && pass_iii(); }
};

SymmetryReport audit(const Model& model, const VectorField& W, const std::vector<VectorXd>& samples,
                     double tol = 1e-10);

struct SymmetryJacobiReport {
  std::vector<double> res_jacobi;  // NaN at stencil boundaries
  std::vector<double> res_lifted;
  double max_jacobi = 0.0;
  double max_lifted = 0.0;
  double tol = 1e-10;
  bool passed() const { return max_jacobi <= tol && max_lifted <= tol; }
};

// Samples W along `base` and scores it as a Jacobi field. Wd for the lifted
// constraint is the exact derivative (dW) v.
SymmetryJacobiReport verify_symmetry_jacobi(const Model& model, const VectorField& W,
                                            const Trajectory& base, double tol = 1e-10);

}  // namespace nhj
