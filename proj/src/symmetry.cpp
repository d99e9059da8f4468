#include "nhjacobi/symmetry.hpp"

#include <cmath>
#include <fmt/format.h>

#include "nhjacobi/jacobi.hpp"

namespace nhj {
namespace {

class ZeroField final : public GenericVectorField<ZeroField> {
 public:
  explicit ZeroField(int dim) : dim_(dim) {}
  const std::string& name() const override { return name_; }
  template <class S>
  VecX<S> eval_t(const VecX<S>&) const {
    return VecX<S>::Zero(dim_);
  }

 private:
  int dim_;
  std::string name_ = "zero";
};

// Unit coordinate field d/dq^axis.
class CoordinateField final : public GenericVectorField<CoordinateField> {
 public:
  CoordinateField(std::string name, int dim, int axis)
      : dim_(dim), axis_(axis), name_(std::move(name)) {}
  const std::string& name() const override { return name_; }
  template <class S>
  VecX<S> eval_t(const VecX<S>&) const {
    VecX<S> w = VecX<S>::Zero(dim_);
    w[axis_] = S(1.0);
    return w;
  }

 private:
  int dim_;
  int axis_;
  std::string name_;
};

struct CounterParams {
  double u = 1.0;
  double x0 = 0.0;
  double z0 = 0.0;
  double xdot0 = 1.0;
};

class Counterexample1 final : public GenericVectorField<Counterexample1> {
 public:
  explicit Counterexample1(CounterParams p) : p_(p) {}
  const std::string& name() const override { return name_; }
  template <class S>
  VecX<S> eval_t(const VecX<S>& q) const {
    const S f = S(p_.u / p_.xdot0) * (q[0] - S(p_.x0));
    VecX<S> w(3);
    w[0] = f;
    w[1] = S(0.0);
    w[2] = f * q[1];
    return w;
  }

 private:
  CounterParams p_;
  std::string name_ = "counterexample1";
};

class Counterexample2 final : public GenericVectorField<Counterexample2> {
 public:
  explicit Counterexample2(CounterParams p) : p_(p) {}
  const std::string& name() const override { return name_; }
  template <class S>
  VecX<S> eval_t(const VecX<S>& q) const {
    const S c(p_.u / p_.xdot0);
    VecX<S> w(3);
    w[0] = c * (q[0] - S(p_.x0));
    w[1] = S(0.0);
    w[2] = c * (q[2] - S(p_.z0));
    return w;
  }

 private:
  CounterParams p_;
  std::string name_ = "counterexample2";
};

void require_dim(const std::string& name, int dim, int expected) {
  if (dim != expected) {
    throw InvalidInputError(fmt::format("field '{}' needs a {}-dimensional model, got {}", name,
                                        expected, dim));
  }
}

CounterParams counter_params(const std::string& name, const FieldParams& params) {
  CounterParams p;
  for (const auto& [key, val] : params) {
    if (key == "u") p.u = val;
    else if (key == "x0") p.x0 = val;
    else if (key == "z0") p.z0 = val;
    else if (key == "xdot0") p.xdot0 = val;
    else throw InvalidInputError(fmt::format("field '{}' has no parameter '{}'", name, key));
  }
  if (p.xdot0 == 0.0) throw InvalidInputError(fmt::format("field '{}': xdot0 must be nonzero", name));
  return p;
}

// Field values and Jacobian dW(i, l) = d W^i / d q^l.
std::pair<VectorXd, MatrixXd> field_jet(const VectorField& W, const VectorXd& q) {
  const VecX<Jet1> w = W.eval(seed<Jet1>(q));
  if (w.size() != q.size()) {
    throw InvalidInputError(fmt::format("field '{}' returned {} components for a {}-dimensional point",
                                        W.name(), w.size(), q.size()));
  }
  const auto n = q.size();
  VectorXd val(n);
  MatrixXd jac(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    val[i] = w[i].value();
    for (Eigen::Index l = 0; l < n; ++l) jac(i, l) = w[i].d(static_cast<int>(l));
  }
  return {val, jac};
}

// Frame values and derivatives dE[l] = d E / d q^l.
std::pair<MatrixXd, std::vector<MatrixXd>> frame_jet(const Model& model, const VectorXd& q) {
  const MatX<Jet1> EJ = model.frame(seed<Jet1>(q));
  const int n = model.dim();
  std::vector<MatrixXd> dE(static_cast<std::size_t>(n), MatrixXd(EJ.rows(), EJ.cols()));
  for (Eigen::Index i = 0; i < EJ.rows(); ++i)
    for (Eigen::Index a = 0; a < EJ.cols(); ++a)
      for (int l = 0; l < n; ++l) dE[static_cast<std::size_t>(l)](i, a) = EJ(i, a).d(l);
  return {values(EJ), dE};
}

// [X, Y] for X = column a, Y = column b of the frame.
VectorXd frame_bracket(const MatrixXd& E, const std::vector<MatrixXd>& dE, int a, int b) {
  const auto n = E.rows();
  VectorXd out = VectorXd::Zero(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    out += E(l, a) * dE[static_cast<std::size_t>(l)].col(b) -
           E(l, b) * dE[static_cast<std::size_t>(l)].col(a);
  }
  return out;
}

}  // namespace

VectorFieldPtr make_field(const std::string& name, int dim, const FieldParams& params) {
  if (name != "counterexample1" && name != "counterexample2" && !params.empty()) {
    throw InvalidInputError(fmt::format("field '{}' takes no parameters", name));
  }
  if (name == "zero") {
    if (dim < 1 || dim > kMaxDim) throw InvalidInputError("field 'zero': bad dimension");
    return std::make_shared<ZeroField>(dim);
  }
  if (name == "dz") {
    require_dim(name, dim, 3);
    return std::make_shared<CoordinateField>(name, 3, 2);
  }
  if (name == "dtheta") {
    require_dim(name, dim, 4);
    return std::make_shared<CoordinateField>(name, 4, 2);
  }
  if (name == "counterexample1") {
    require_dim(name, dim, 3);
    return std::make_shared<Counterexample1>(counter_params(name, params));
  }
  if (name == "counterexample2") {
    require_dim(name, dim, 3);
    return std::make_shared<Counterexample2>(counter_params(name, params));
  }
  throw InvalidInputError("unknown field '" + name + "'");
}

std::vector<std::string> builtin_field_names() {
  return {"zero", "dz", "dtheta", "counterexample1", "counterexample2"};
}

MatrixXd lie_derivative_metric(const Model& model, const VectorField& W, const VectorXd& q) {
  check_point(model, q);
  const auto [w, dW] = field_jet(W, q);
  const MatX<Jet1> GJ = model.metric(seed<Jet1>(q));
  const int n = model.dim();
  const MatrixXd G = values(GJ);
  MatrixXd WdG = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) WdG(i, j) += w[k] * GJ(i, j).d(k);
  const MatrixXd half = G * dW;  // (G dW)(i, j) = g_ik d_j W^k
  return WdG + half + half.transpose();
}

VectorXd lie_bracket(const Model& model, const VectorField& W, int a, const VectorXd& q) {
  check_point(model, q);
  if (a < 0 || a >= model.rank()) {
    throw InvalidInputError(fmt::format("lie_bracket: frame index {} out of range [0, {})", a,
                                        model.rank()));
  }
  const auto [w, dW] = field_jet(W, q);
  const auto [E, dE] = frame_jet(model, q);
  VectorXd dEa_w = VectorXd::Zero(model.dim());
  for (int l = 0; l < model.dim(); ++l) dEa_w += w[l] * dE[static_cast<std::size_t>(l)].col(a);
  return dEa_w - dW * E.col(a);
}

SymmetryReport audit(const Model& model, const VectorField& W, const std::vector<VectorXd>& samples,
                     double tol) {
  SymmetryReport rep;
  rep.field = W.name();
  rep.tol = tol;
  const int k = model.rank();
  for (const VectorXd& q : samples) {
    const MatrixXd L = lie_derivative_metric(model, W, q);
    const auto [E, dE] = frame_jet(model, q);
    const MatrixXd M = evaluate_annihilator(model, q);
    rep.killing = std::max(rep.killing, L.cwiseAbs().maxCoeff());
    for (int a = 0; a < k; ++a) {
      if (M.rows() > 0) {
        rep.cond_i = std::max(rep.cond_i, (M * lie_bracket(model, W, a, q)).cwiseAbs().maxCoeff());
      }
      for (int b = 0; b < k; ++b) {
        rep.cond_ii = std::max(rep.cond_ii, std::abs(E.col(a).dot(L * E.col(b))));
        const VectorXd br = frame_bracket(E, dE, a, b);
        for (int c = 0; c < k; ++c) {
          rep.cond_iii = std::max(rep.cond_iii, std::abs(br.dot(L * E.col(c))));
        }
      }
    }
    ++rep.samples;
  }
  return rep;
}

SymmetryJacobiReport verify_symmetry_jacobi(const Model& model, const VectorField& W,
                                            const Trajectory& base, double tol) {
  if (base.samples.size() < 5) {
    throw InvalidInputError("verify_symmetry_jacobi: trajectory too short for the stencils");
  }
  SymmetryJacobiReport rep;
  rep.tol = tol;
  std::vector<VectorXd> Ws;
  Ws.reserve(base.samples.size());
  for (const DynState& s : base.samples) {
    const auto [w, dW] = field_jet(W, s.q);
    Ws.push_back(w);
    const VectorXd r = lifted_constraint_residual(model, JacobiState{s.t, s.q, s.v, w, dW * s.v});
    const double res = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    rep.res_lifted.push_back(res);
    rep.max_lifted = std::max(rep.max_lifted, res);
  }
  rep.res_jacobi = jacobi_residual(model, base, Ws);
  for (double r : rep.res_jacobi) {
    if (!std::isnan(r)) rep.max_jacobi = std::max(rep.max_jacobi, r);
  }
  return rep;
}

}  // namespace nhj
