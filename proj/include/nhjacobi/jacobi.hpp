#pragma once

// Jacobi fields along nonholonomic trajectories, computed three ways:
//
//   direct  the coordinate Jacobi equation integrated jointly with the base
//   lift    the lifted nonholonomic system; W is the fiber block of its path
//   fd      central differences of two perturbed trajectories
//
// plus a residual that scores arbitrary sampled fields against the equation.

#include <optional>
#include <string>
#include <vector>

#include "nhjacobi/dynamics.hpp"
#include "nhjacobi/tensors.hpp"

namespace nhj {

struct JacobiState {
  double t = 0.0;
  VectorXd q;
  VectorXd v;
  VectorXd W;
  VectorXd Wd;
};

enum class JacobiMethod { Direct, Lift, FD };

std::string to_string(JacobiMethod m);

struct JacobiRun {
  JacobiMethod method = JacobiMethod::Direct;
  std::string model;
  double dt = 0.0;
  std::vector<JacobiState> samples;
  // Lifted constraint residual |(W.dM) v + M Wd|_inf per sample.
  std::vector<double> res_lifted;
  // Jacobi equation residual per sample; NaN where the stencil does not fit.
  std::vector<double> res_jacobi;
  // FD only: the seeds the perturbed family realizes.
  VectorXd W0_effective;
  VectorXd Wd0_effective;
};

// (W.dM) v + M Wd for every annihilator row.
VectorXd lifted_constraint_residual(const Model& model, const JacobiState& s);

// Wddot of the coordinate Jacobi equation,
//   -[ v^i v^j W^l d_l G^k_ij + v^i Wd^j (G^k_ij + G^k_ji) + W^l d_l F^k ].
// Requires both constraints within 1e-8 and connection data with gradients.
VectorXd jacobi_rhs(const Model& model, const JacobiState& s);
VectorXd jacobi_rhs(const ConnectionData& cd, const JacobiState& s);

// Integrates the base geodesic and the Jacobi equation together from the
// base trajectory's first sample, with its scheme, step and projection flag.
JacobiRun integrate_jacobi_direct(const Model& model, const Trajectory& base, const VectorXd& W0,
                                  const VectorXd& Wd0);

JacobiRun integrate_jacobi_via_lift(const Model& model, const VectorXd& q0, const VectorXd& v0,
                                    const VectorXd& W0, const VectorXd& Wd0, double dt,
                                    double t_end, const IntegrateOptions& options = {});

JacobiRun fd_variation_oracle(const Model& model, const VectorXd& q0, const VectorXd& v0,
                              const VectorXd& dq0, const VectorXd& dv0, double eps, double dt,
                              double t_end, const IntegrateOptions& options = {});

// Max-norm Jacobi residual of sampled W along `base`, using fourth-order
// central differences for Wd and Wdd. The first and last two entries are NaN.
std::vector<double> jacobi_residual(const Model& model, const Trajectory& base,
                                    const std::vector<VectorXd>& W_samples);

// Multipliers of the lifted system along a lift run.
std::vector<Multipliers> lifted_multipliers(const Model& model, const JacobiRun& run);

// max_t |a(t) - b(t)|_inf over W. Grids must match.
double max_deviation(const JacobiRun& a, const JacobiRun& b);

}  // namespace nhj
