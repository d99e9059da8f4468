#include "nhjacobi/jacobi.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "nhjacobi/lift.hpp"
#include "stepper.hpp"

namespace nhj {
namespace {

constexpr double kStateTol = 1e-8;

void check_vec(const Model& model, const VectorXd& x, const char* what) {
  if (x.size() != model.dim()) {
    throw InvalidInputError(fmt::format("{}: {} has {} entries, model dimension is {}",
                                        model.name(), what, x.size(), model.dim()));
  }
  if (!x.allFinite()) throw InvalidInputError(fmt::format("{}: {} is not finite", model.name(), what));
}

void check_jacobi_state(const Model& model, const JacobiState& s) {
  check_point(model, s.q);
  check_vec(model, s.v, "v");
  check_vec(model, s.W, "W");
  check_vec(model, s.Wd, "Wd");
}

void require_lifted_constraint(const Model& model, const JacobiState& s, double tol) {
  if (model.codim() == 0) return;
  const VectorXd res = lifted_constraint_residual(model, s);
  Eigen::Index row = 0;
  const double worst = res.cwiseAbs().maxCoeff(&row);
  if (!(worst <= tol)) {
    throw ConstraintViolationError(
        fmt::format("{}: (W, Wd) violates lifted constraint row {} (residual {:.3e} > {:.1e})",
                    model.name(), row, worst, tol),
        static_cast<int>(row), worst);
  }
}

// A non-owning handle, valid while `model` is.
ModelPtr borrow(const Model& model) { return ModelPtr(ModelPtr(), &model); }

// P and its derivative along `dir` at q.
std::pair<MatrixXd, MatrixXd> projector_and_derivative(const Model& model, const VectorXd& q,
                                                       const VectorXd& dir) {
  VecX<Jet1> x(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    x[i] = Jet1(q[i]);
    x[i].resize(1);
    x[i].d_ref(0) = dir[i];
  }
  const MatX<Jet1> P = projector<Jet1>(model, x);
  MatrixXd val(P.rows(), P.cols()), der(P.rows(), P.cols());
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      val(i, j) = P(i, j).value();
      der(i, j) = P(i, j).d(0);
    }
  return {val, der};
}

void fill_residuals(const Model& model, JacobiRun& run) {
  run.res_lifted.clear();
  run.res_lifted.reserve(run.samples.size());
  for (const JacobiState& s : run.samples) {
    const VectorXd r = lifted_constraint_residual(model, s);
    run.res_lifted.push_back(r.size() ? r.cwiseAbs().maxCoeff() : 0.0);
  }
  if (run.samples.size() < 5) {
    run.res_jacobi.assign(run.samples.size(), std::numeric_limits<double>::quiet_NaN());
    return;
  }
  Trajectory base;
  base.model = model.name();
  base.dt = run.dt;
  std::vector<VectorXd> W;
  for (const JacobiState& s : run.samples) {
    base.samples.push_back({s.t, s.q, s.v});
    W.push_back(s.W);
  }
  run.res_jacobi = jacobi_residual(model, base, W);
}

}  // namespace

std::string to_string(JacobiMethod m) {
  switch (m) {
    case JacobiMethod::Direct:
      return "direct";
    case JacobiMethod::Lift:
      return "lift";
    case JacobiMethod::FD:
      return "fd";
  }
  return "?";
}

VectorXd lifted_constraint_residual(const Model& model, const JacobiState& s) {
  check_jacobi_state(model, s);
  const int n = model.dim();
  const MatX<Jet1> MJ = model.annihilator(seed<Jet1>(s.q));
  const MatrixXd M = values(MJ);
  MatrixXd WdM = MatrixXd::Zero(M.rows(), n);
  for (Eigen::Index a = 0; a < M.rows(); ++a)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) WdM(a, j) += s.W[l] * MJ(a, j).d(l);
  return WdM * s.v + M * s.Wd;
}

VectorXd jacobi_rhs(const ConnectionData& cd, const JacobiState& s) {
  if (!cd.has_gradient) throw InvalidInputError("jacobi_rhs: connection data lacks gradients");
  const int n = cd.gammaNH.dim();
  const Array3d& g = cd.gammaNH;
  const Array4& dg = cd.dGammaNH;
  VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double dW = 0.0;
        for (int l = 0; l < n; ++l) dW += dg(k, i, j, l) * s.W[l];
        acc += s.v[i] * s.v[j] * dW;
        acc += s.v[i] * s.Wd[j] * (g(k, i, j) + g(k, j, i));
      }
      acc += cd.dF(k, i) * s.W[i];
    }
    out[k] = -acc;
  }
  return out;
}

VectorXd jacobi_rhs(const Model& model, const JacobiState& s) {
  check_jacobi_state(model, s);
  require_constrained(model, s.q, s.v, kStateTol, "v");
  require_lifted_constraint(model, s, kStateTol);
  return jacobi_rhs(connection_data(model, s.q, true), s);
}

JacobiRun integrate_jacobi_direct(const Model& model, const Trajectory& base, const VectorXd& W0,
                                  const VectorXd& Wd0) {
  if (base.samples.empty()) throw InvalidInputError("integrate_jacobi_direct: empty base trajectory");
  if (base.samples.size() < 2) throw InvalidInputError("integrate_jacobi_direct: base has one sample");
  const DynState& b0 = base.samples.front();
  const JacobiState s0{0.0, b0.q, b0.v, W0, Wd0};
  check_jacobi_state(model, s0);
  require_constrained(model, s0.q, s0.v, kStateTol, "base velocity");
  require_lifted_constraint(model, s0, kStateTol);

  const int n = model.dim();
  const int steps = static_cast<int>(base.samples.size()) - 1;
  const double dt = base.dt;

  JacobiRun run;
  run.method = JacobiMethod::Direct;
  run.model = model.name();
  run.dt = dt;
  run.samples.reserve(base.samples.size());
  run.samples.push_back(s0);

  detail::OdeState x(static_cast<std::size_t>(4 * n));
  auto block = [n](detail::OdeState& y, int b) { return Eigen::Map<VectorXd>(y.data() + b * n, n); };
  auto cblock = [n](const detail::OdeState& y, int b) {
    return Eigen::Map<const VectorXd>(y.data() + b * n, n);
  };
  block(x, 0) = s0.q;
  block(x, 1) = s0.v;
  block(x, 2) = s0.W;
  block(x, 3) = s0.Wd;

  auto system = [&](const detail::OdeState& y, detail::OdeState& dy, double t) {
    const JacobiState s{t, cblock(y, 0), cblock(y, 1), cblock(y, 2), cblock(y, 3)};
    if (!std::all_of(y.begin(), y.end(), [](double a) { return std::isfinite(a); })) {
      std::fill(dy.begin(), dy.end(), std::nan(""));
      return;
    }
    const ConnectionData cd = connection_data(model, s.q, true);
    block(dy, 0) = s.v;
    block(dy, 1) = -contract(cd.gammaNH, s.v, s.v) - cd.F;
    block(dy, 2) = s.Wd;
    block(dy, 3) = jacobi_rhs(cd, s);
  };

  auto post = [&](detail::OdeState& y, int i) {
    JacobiState s{i * dt, cblock(y, 0), cblock(y, 1), cblock(y, 2), cblock(y, 3)};
    if (!std::all_of(y.begin(), y.end(), [](double a) { return std::isfinite(a); })) {
      const JacobiState& last = run.samples.back();
      throw DivergenceError(fmt::format("{}: Jacobi state became non-finite at t = {}",
                                        model.name(), s.t),
                            DynState{last.t, last.q, last.v});
    }
    if (base.projected) {
      // Linearization of v <- P(q) v.
      const auto [P, WdP] = projector_and_derivative(model, s.q, s.W);
      s.Wd = WdP * s.v + P * s.Wd;
      s.v = P * s.v;
      block(y, 1) = s.v;
      block(y, 3) = s.Wd;
    }
    run.samples.push_back(std::move(s));
  };

  detail::run_fixed(base.scheme, system, x, dt, steps, post);
  fill_residuals(model, run);
  return run;
}

JacobiRun integrate_jacobi_via_lift(const Model& model, const VectorXd& q0, const VectorXd& v0,
                                    const VectorXd& W0, const VectorXd& Wd0, double dt,
                                    double t_end, const IntegrateOptions& options) {
  const JacobiState s0{0.0, q0, v0, W0, Wd0};
  check_jacobi_state(model, s0);
  const ModelPtr lifted = lift_model(borrow(model));
  const int n = model.dim();

  DynState start;
  start.q = VectorXd(2 * n);
  start.v = VectorXd(2 * n);
  start.q << q0, W0;
  start.v << v0, Wd0;
  const Trajectory traj = integrate(*lifted, start, dt, t_end, options);

  JacobiRun run;
  run.method = JacobiMethod::Lift;
  run.model = model.name();
  run.dt = dt;
  run.samples.reserve(traj.samples.size());
  for (const DynState& s : traj.samples) {
    run.samples.push_back({s.t, s.q.head(n), s.v.head(n), s.q.tail(n), s.v.tail(n)});
  }
  fill_residuals(model, run);
  return run;
}

JacobiRun fd_variation_oracle(const Model& model, const VectorXd& q0, const VectorXd& v0,
                              const VectorXd& dq0, const VectorXd& dv0, double eps, double dt,
                              double t_end, const IntegrateOptions& options) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInputError("fd oracle: eps must be positive");
  check_point(model, q0);
  check_vec(model, v0, "v0");
  check_vec(model, dq0, "dq0");
  check_vec(model, dv0, "dv0");
  require_constrained(model, q0, v0, options.initial_tol, "v0");

  auto member = [&](double s) {
    DynState st;
    st.q = q0 + s * dq0;
    st.v = orthogonal_projector(model, st.q).P * (v0 + s * dv0);
    return integrate(model, st, dt, t_end, options);
  };
  const Trajectory plus = member(eps);
  const Trajectory minus = member(-eps);

  JacobiRun run;
  run.method = JacobiMethod::FD;
  run.model = model.name();
  run.dt = dt;
  // Exact derivative of s -> P(q0 + s dq0)(v0 + s dv0) at s = 0.
  const auto [P, dP] = projector_and_derivative(model, q0, dq0);
  run.W0_effective = dq0;
  run.Wd0_effective = dP * v0 + P * dv0;

  // Base curve: the unperturbed trajectory.
  const Trajectory mid = integrate(model, DynState{0.0, q0, v0}, dt, t_end, options);
  const double inv = 1.0 / (2.0 * eps);
  run.samples.reserve(mid.samples.size());
  for (std::size_t i = 0; i < mid.samples.size(); ++i) {
    const DynState& p = plus.samples[i];
    const DynState& m = minus.samples[i];
    run.samples.push_back({mid.samples[i].t, mid.samples[i].q, mid.samples[i].v,
                           (p.q - m.q) * inv, (p.v - m.v) * inv});
  }
  fill_residuals(model, run);
  return run;
}

std::vector<double> jacobi_residual(const Model& model, const Trajectory& base,
                                    const std::vector<VectorXd>& W_samples) {
  const std::size_t N = base.samples.size();
  if (N < 5) throw InvalidInputError("jacobi_residual: need at least 5 samples");
  if (W_samples.size() != N) {
    throw InvalidInputError(fmt::format("jacobi_residual: {} field samples for {} trajectory samples",
                                        W_samples.size(), N));
  }
  if (!(base.dt > 0.0)) throw InvalidInputError("jacobi_residual: trajectory has no step size");
  for (const VectorXd& w : W_samples) check_vec(model, w, "W sample");

  const double h = base.dt;
  std::vector<double> out(N, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 2; i + 2 < N; ++i) {
    const VectorXd& wm2 = W_samples[i - 2];
    const VectorXd& wm1 = W_samples[i - 1];
    const VectorXd& w0 = W_samples[i];
    const VectorXd& wp1 = W_samples[i + 1];
    const VectorXd& wp2 = W_samples[i + 2];
    const VectorXd Wd = (-wp2 + 8.0 * wp1 - 8.0 * wm1 + wm2) / (12.0 * h);
    const VectorXd Wdd = (-wp2 + 16.0 * wp1 - 30.0 * w0 + 16.0 * wm1 - wm2) / (12.0 * h * h);
    const DynState& b = base.samples[i];
    const JacobiState s{b.t, b.q, b.v, w0, Wd};
    const ConnectionData cd = connection_data(model, b.q, true);
    out[i] = (Wdd - jacobi_rhs(cd, s)).cwiseAbs().maxCoeff();
  }
  return out;
}

std::vector<Multipliers> lifted_multipliers(const Model& model, const JacobiRun& run) {
  const ModelPtr lifted = lift_model(borrow(model));
  const int n = model.dim();
  std::vector<Multipliers> out;
  out.reserve(run.samples.size());
  for (const JacobiState& s : run.samples) {
    DynState d;
    d.t = s.t;
    d.q = VectorXd(2 * n);
    d.v = VectorXd(2 * n);
    d.q << s.q, s.W;
    d.v << s.v, s.Wd;
    out.push_back(acceleration_multiplier(*lifted, d).multipliers);
  }
  return out;
}

double max_deviation(const JacobiRun& a, const JacobiRun& b) {
  if (a.samples.size() != b.samples.size()) {
    throw InvalidInputError("max_deviation: runs have different sample counts");
  }
  double out = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (std::abs(a.samples[i].t - b.samples[i].t) > 1e-12) {
      throw InvalidInputError("max_deviation: time grids differ");
    }
    out = std::max(out, (a.samples[i].W - b.samples[i].W).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace nhj
