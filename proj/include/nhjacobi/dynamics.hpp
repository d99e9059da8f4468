#pragma once

// Nonholonomic equations of motion in two independent formulations and a
// fixed-step integrator.
//
//   connection form   qddot = -Gamma_nh(v, v) - P G^{-1} dV
//   multiplier form   G qddot + (Euler-Lagrange terms) = M^T lambda,
//                     lambda chosen so that d/dt (M v) = 0

#include <string>
#include <vector>

#include "nhjacobi/model.hpp"

namespace nhj {

struct DynState {
  double t = 0.0;
  VectorXd q;
  VectorXd v;
};

enum class Scheme { RK4, RK2 };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

struct IntegrateOptions {
  Scheme scheme = Scheme::RK4;
  bool project_velocity = false;
  // Largest admissible |M v0| when projection is off.
  double initial_tol = 1e-9;
};

struct Trajectory {
  std::string model;
  Scheme scheme = Scheme::RK4;
  double dt = 0.0;
  bool projected = false;
  std::vector<DynState> samples;
  double max_constraint_residual = 0.0;
};

// Raised when the state stops being finite. Carries the last finite sample.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, DynState last)
      : NumericalError(what), last_(std::move(last)) {}
  const DynState& last_valid() const { return last_; }

 private:
  DynState last_;
};

struct Multipliers {
  VectorXd lambda;
};

struct MultiplierSolution {
  VectorXd acceleration;
  Multipliers multipliers;
};

VectorXd acceleration_connection(const Model& model, const DynState& state);
MultiplierSolution acceleration_multiplier(const Model& model, const DynState& state);

// C = M G^{-1} M^T.
MatrixXd multiplier_matrix(const Model& model, const VectorXd& q);

double energy(const Model& model, const DynState& state);
VectorXd constraint_residual(const Model& model, const DynState& state);

// Number of steps for [0, t_end] at step dt; t_end must be a whole number of
// steps (relative slack 1e-9).
int step_count(double dt, double t_end);

Trajectory integrate(const Model& model, const DynState& state0, double dt, double t_end,
                     const IntegrateOptions& options = {});

// Throws ConstraintViolationError naming the worst row above `tol`.
void require_constrained(const Model& model, const VectorXd& q, const VectorXd& v, double tol,
                         const std::string& what);

}  // namespace nhj
