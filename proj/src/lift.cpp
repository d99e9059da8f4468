#include "nhjacobi/lift.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace nhj {
namespace {

class LiftedModel final : public Model {
 public:
  explicit LiftedModel(ModelPtr base)
      : base_(std::move(base)), name_(base_->name() + ":lift") {}

  const std::string& name() const override { return name_; }
  int dim() const override { return 2 * base_->dim(); }
  int rank() const override { return 2 * base_->rank(); }
  Signature signature() const override { return Signature::PseudoRiemannian; }
  bool has_potential() const override { return base_->has_potential(); }

  ChartBox default_box() const override {
    const ChartBox b = base_->default_box();
    const int n = base_->dim();
    ChartBox out{VectorXd(2 * n), VectorXd(2 * n)};
    out.lo << b.lo, VectorXd::Constant(n, -1.0);
    out.hi << b.hi, VectorXd::Constant(n, 1.0);
    return out;
  }

  const ModelPtr& base() const { return base_; }

#define NHJ_LIFT_REAL(S, SPEC)                                                              \
  MatX<S> metric(const VecX<S>& q) const override { return metric_t<S>(q); }               \
  MatX<S> frame(const VecX<S>& q) const override { return frame_t<S>(q); }                 \
  MatX<S> annihilator(const VecX<S>& q) const override { return annihilator_t<S>(q); }     \
  S potential(const VecX<S>& q) const override { return base_->potential(dual<S>(q)).t; }

#define NHJ_LIFT_TWICE(S, SPEC)                                                             \
  MatX<S> metric(const VecX<S>&) const override { twice(); }                               \
  MatX<S> frame(const VecX<S>&) const override { twice(); }                                \
  MatX<S> annihilator(const VecX<S>&) const override { twice(); }                          \
  S potential(const VecX<S>&) const override { twice(); }

  NHJ_LIFT_REAL(double, )
  NHJ_LIFT_REAL(Jet1, )
  NHJ_LIFT_REAL(Jet2, )
  NHJ_LIFT_TWICE(Tangent<double>, )
  NHJ_LIFT_TWICE(Tangent<Jet1>, )
  NHJ_LIFT_TWICE(Tangent<Jet2>, )
#undef NHJ_LIFT_REAL
#undef NHJ_LIFT_TWICE

 private:
  [[noreturn]] void twice() const {
    throw InvalidInputError(name_ + ": lifting a lifted model is not supported");
  }

  template <class S>
  VecX<Tangent<S>> dual(const VecX<S>& x) const {
    const int n = base_->dim();
    if (x.size() != 2 * n) throw InvalidInputError(name_ + ": wrong point dimension");
    VecX<Tangent<S>> out(n);
    for (int i = 0; i < n; ++i) out[i] = Tangent<S>(x[i], x[n + i]);
    return out;
  }

  template <class S>
  MatX<S> metric_t(const VecX<S>& x) const {
    const int n = base_->dim();
    const MatX<Tangent<S>> G = base_->metric(dual<S>(x));
    MatX<S> out(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out(i, j) = G(i, j).t;
        out(i, n + j) = G(i, j).v;
        out(n + i, j) = G(i, j).v;
        out(n + i, n + j) = S(0.0);
      }
    }
    return out;
  }

  template <class S>
  MatX<S> frame_t(const VecX<S>& x) const {
    const int n = base_->dim();
    const int k = base_->rank();
    const MatX<Tangent<S>> E = base_->frame(dual<S>(x));
    MatX<S> out(2 * n, 2 * k);
    for (int a = 0; a < k; ++a) {
      for (int i = 0; i < n; ++i) {
        out(i, a) = E(i, a).v;
        out(n + i, a) = E(i, a).t;
        out(i, k + a) = S(0.0);
        out(n + i, k + a) = E(i, a).v;
      }
    }
    return out;
  }

  template <class S>
  MatX<S> annihilator_t(const VecX<S>& x) const {
    const int n = base_->dim();
    const int m = base_->codim();
    const MatX<Tangent<S>> M = base_->annihilator(dual<S>(x));
    MatX<S> out(2 * m, 2 * n);
    for (int a = 0; a < m; ++a) {
      for (int i = 0; i < n; ++i) {
        out(a, i) = M(a, i).v;
        out(a, n + i) = S(0.0);
        out(m + a, i) = M(a, i).t;
        out(m + a, n + i) = M(a, i).v;
      }
    }
    return out;
  }

  ModelPtr base_;
  std::string name_;
};

}  // namespace

ModelPtr lift_model(ModelPtr base) {
  if (!base) throw InvalidInputError("lift_model: null model");
  if (is_lifted(*base)) {
    throw InvalidInputError(base->name() + ": lifting a lifted model is not supported");
  }
  if (2 * base->dim() > kMaxDim) {
    throw InvalidInputError(base->name() + ": lifted dimension exceeds " +
                            std::to_string(kMaxDim));
  }
  return std::make_shared<LiftedModel>(std::move(base));
}

bool is_lifted(const Model& model) { return dynamic_cast<const LiftedModel*>(&model) != nullptr; }

ModelPtr lift_base(const Model& model) {
  const auto* lifted = dynamic_cast<const LiftedModel*>(&model);
  return lifted ? lifted->base() : nullptr;
}

VectorXd kappa(const VectorXd& w) {
  if (w.size() % 4 != 0) {
    throw InvalidInputError("kappa: length " + std::to_string(w.size()) +
                            " is not a multiple of 4");
  }
  const auto n = w.size() / 4;
  VectorXd out(w.size());
  out << w.segment(0, n), w.segment(2 * n, n), w.segment(n, n), w.segment(3 * n, n);
  return out;
}

SignatureReport lifted_signature_check(const Model& lifted, const std::vector<VectorXd>& samples) {
  SignatureReport rep;
  rep.expected_positive = lifted.dim() / 2;
  rep.expected_negative = lifted.dim() - rep.expected_positive;
  rep.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  for (const VectorXd& q : samples) {
    const MatrixXd G = evaluate_metric(lifted, q);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(G, Eigen::EigenvaluesOnly);
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const double lam = eig.eigenvalues()[i];
      rep.min_abs_eigenvalue = std::min(rep.min_abs_eigenvalue, std::abs(lam));
      if (lam > kPivotTolerance) ++pos;
      if (lam < -kPivotTolerance) ++neg;
    }
    ++rep.samples;
    if (pos != rep.expected_positive || neg != rep.expected_negative) ++rep.mismatches;
  }
  return rep;
}

}  // namespace nhj
