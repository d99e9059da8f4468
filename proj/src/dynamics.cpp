#include "nhjacobi/dynamics.hpp"

#include <cmath>
#include <fmt/format.h>

#include "nhjacobi/tensors.hpp"
#include "stepper.hpp"

namespace nhj {
namespace {

std::vector<double> point_of(const VectorXd& q) { return {q.data(), q.data() + q.size()}; }

void check_state(const Model& model, const DynState& s) {
  check_point(model, s.q);
  if (s.v.size() != model.dim()) {
    throw InvalidInputError(fmt::format("{}: velocity has {} entries, model dimension is {}",
                                        model.name(), s.v.size(), model.dim()));
  }
  if (!s.v.allFinite()) throw InvalidInputError(model.name() + ": velocity has non-finite entries");
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::RK4 ? "rk4" : "rk2"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4" || s == "RK4") return Scheme::RK4;
  if (s == "rk2" || s == "RK2") return Scheme::RK2;
  throw InvalidInputError("unknown scheme '" + s + "', expected rk4 or rk2");
}

VectorXd acceleration_connection(const Model& model, const DynState& state) {
  check_state(model, state);
  const ConnectionData cd = connection_data(model, state.q);
  return -contract(cd.gammaNH, state.v, state.v) - cd.F;
}

MultiplierSolution acceleration_multiplier(const Model& model, const DynState& state) {
  check_state(model, state);
  const int n = model.dim();
  const int m = model.codim();
  const VectorXd& v = state.v;
  const VecX<Jet1> x = seed<Jet1>(state.q);
  const MatX<Jet1> GJ = model.metric(x);
  const MatX<Jet1> MJ = model.annihilator(x);
  const Jet1 VJ = model.potential(x);

  const MatrixXd G = values(GJ);
  const MatrixXd M = values(MJ);
  // (v.dG) and (v.dM): directional derivatives of the matrices along v.
  MatrixXd vdG = MatrixXd::Zero(n, n);
  MatrixXd vdM = MatrixXd::Zero(m, n);
  // quad[i] = v^T (d_i G) v
  VectorXd quad(n), dV(n);
  for (int l = 0; l < n; ++l) {
    MatrixXd dGl(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dGl(i, j) = GJ(i, j).d(l);
    vdG += v[l] * dGl;
    quad[l] = v.dot(dGl * v);
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < n; ++j) vdM(a, j) += v[l] * MJ(a, j).d(l);
    dV[l] = VJ.d(l);
  }

  const MatrixXd Ginv = inverse<double>(G, kPivotTolerance, "metric");
  const VectorXd a_free = -Ginv * (vdG * v - 0.5 * quad + dV);
  MultiplierSolution out;
  out.multipliers.lambda = VectorXd(m);
  if (m == 0) {
    out.acceleration = a_free;
    return out;
  }
  const MatrixXd C = M * Ginv * M.transpose();
  const MatrixXd rhs = -(vdM * v + M * a_free);
  try {
    out.multipliers.lambda = solve<double>(C, rhs, kPivotTolerance, "constraint matrix");
  } catch (const SingularMatrixError&) {
    throw RegularityError(model.name() + ": multiplier matrix M G^-1 M^T is singular",
                          point_of(state.q));
  }
  out.acceleration = a_free + Ginv * (M.transpose() * out.multipliers.lambda);
  return out;
}

MatrixXd multiplier_matrix(const Model& model, const VectorXd& q) {
  const MatrixXd M = evaluate_annihilator(model, q);
  const MatrixXd Ginv = inverse<double>(evaluate_metric(model, q), kPivotTolerance, "metric");
  return M * Ginv * M.transpose();
}

double energy(const Model& model, const DynState& state) {
  check_state(model, state);
  return 0.5 * state.v.dot(evaluate_metric(model, state.q) * state.v) +
         evaluate_potential(model, state.q);
}

VectorXd constraint_residual(const Model& model, const DynState& state) {
  check_state(model, state);
  return evaluate_annihilator(model, state.q) * state.v;
}

void require_constrained(const Model& model, const VectorXd& q, const VectorXd& v, double tol,
                         const std::string& what) {
  if (model.codim() == 0) return;
  const VectorXd res = evaluate_annihilator(model, q) * v;
  Eigen::Index row = 0;
  const double worst = res.cwiseAbs().maxCoeff(&row);
  if (!(worst <= tol)) {
    throw ConstraintViolationError(
        fmt::format("{}: {} violates constraint row {} (residual {:.3e} > {:.1e})", model.name(),
                    what, row, worst, tol),
        static_cast<int>(row), worst);
  }
}

int step_count(double dt, double t_end) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInputError("t_end must be positive");
  const double ratio = t_end / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * ratio || steps < 1.0) {
    throw InvalidInputError(
        fmt::format("t_end = {} is not a whole number of steps of dt = {}", t_end, dt));
  }
  if (steps > 1e8) throw InvalidInputError("too many steps");
  return static_cast<int>(steps);
}

Trajectory integrate(const Model& model, const DynState& state0, double dt, double t_end,
                     const IntegrateOptions& options) {
  check_state(model, state0);
  const int steps = step_count(dt, t_end);
  const int n = model.dim();

  Trajectory traj;
  traj.model = model.name();
  traj.scheme = options.scheme;
  traj.dt = dt;
  traj.projected = options.project_velocity;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);

  DynState s0 = state0;
  s0.t = 0.0;
  if (options.project_velocity) {
    s0.v = orthogonal_projector(model, s0.q).P * s0.v;
  } else {
    require_constrained(model, s0.q, s0.v, options.initial_tol, "initial velocity");
  }
  auto record = [&](DynState s) {
    if (model.codim() > 0) {
      traj.max_constraint_residual =
          std::max(traj.max_constraint_residual, constraint_residual(model, s).cwiseAbs().maxCoeff());
    }
    traj.samples.push_back(std::move(s));
  };
  record(s0);

  detail::OdeState x(static_cast<std::size_t>(2 * n));
  Eigen::Map<VectorXd>(x.data(), n) = s0.q;
  Eigen::Map<VectorXd>(x.data() + n, n) = s0.v;

  auto system = [&](const detail::OdeState& y, detail::OdeState& dy, double t) {
    DynState s{t, Eigen::Map<const VectorXd>(y.data(), n), Eigen::Map<const VectorXd>(y.data() + n, n)};
    if (!s.q.allFinite() || !s.v.allFinite()) {
      std::fill(dy.begin(), dy.end(), std::nan(""));
      return;
    }
    Eigen::Map<VectorXd>(dy.data(), n) = s.v;
    Eigen::Map<VectorXd>(dy.data() + n, n) = acceleration_connection(model, s);
  };

  auto post = [&](detail::OdeState& y, int i) {
    DynState s{i * dt, Eigen::Map<const VectorXd>(y.data(), n),
               Eigen::Map<const VectorXd>(y.data() + n, n)};
    if (!s.q.allFinite() || !s.v.allFinite()) {
      throw DivergenceError(fmt::format("{}: state became non-finite at t = {}", model.name(), s.t),
                            traj.samples.back());
    }
    if (options.project_velocity) {
      s.v = orthogonal_projector(model, s.q).P * s.v;
      Eigen::Map<VectorXd>(y.data() + n, n) = s.v;
    }
    record(std::move(s));
  };

  detail::run_fixed(options.scheme, system, x, dt, steps, post);
  return traj;
}

}  // namespace nhj
