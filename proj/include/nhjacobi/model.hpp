#pragma once

// Chart-level mechanical models: metric, distribution frame, annihilator and
// potential, each evaluable on every scalar kind the library differentiates
// with. Models are immutable after construction.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nhjacobi/linalg.hpp"

namespace nhj {

enum class Signature { Riemannian, PseudoRiemannian };

struct TangentState {
  VectorXd q;
  VectorXd v;
};

// Axis-aligned box of chart coordinates used for sampling.
struct ChartBox {
  VectorXd lo;
  VectorXd hi;
};

// One overload set per scalar kind. Tangent<S> kinds exist so that a model
// can be lifted to its tangent bundle: the complete lift of any quantity is
// the tangent part of its evaluation at (q, r) seen as a dual number.
#define NHJ_MODEL_EVALUATORS(S, SPEC)                                  \
  virtual MatX<S> metric(const VecX<S>& q) const SPEC;                 \
  virtual MatX<S> frame(const VecX<S>& q) const SPEC;                  \
  virtual MatX<S> annihilator(const VecX<S>& q) const SPEC;            \
  virtual S potential(const VecX<S>& q) const SPEC;

#define NHJ_FOR_EACH_SCALAR(X, SPEC) \
  X(double, SPEC)                    \
  X(Jet1, SPEC)                      \
  X(Jet2, SPEC)                      \
  X(Tangent<double>, SPEC)           \
  X(Tangent<Jet1>, SPEC)             \
  X(Tangent<Jet2>, SPEC)

#define NHJ_PURE = 0

class Model {
 public:
  virtual ~Model() = default;

  virtual const std::string& name() const = 0;
  virtual int dim() const = 0;
  virtual int rank() const = 0;
  virtual Signature signature() const { return Signature::Riemannian; }
  virtual bool has_potential() const { return false; }
  virtual ChartBox default_box() const = 0;

  // Closed-form flow, when the model has one. `start` must lie in D.
  virtual std::optional<TangentState> reference_solution(const TangentState& start,
                                                         double t) const {
    (void)start;
    (void)t;
    return std::nullopt;
  }

  NHJ_FOR_EACH_SCALAR(NHJ_MODEL_EVALUATORS, NHJ_PURE)

  int codim() const { return dim() - rank(); }
};

using ModelPtr = std::shared_ptr<const Model>;

// CRTP adapter: Derived supplies template members
//   metric_t<S>, frame_t<S>, annihilator_t<S>, potential_t<S>
// and this class routes every virtual overload to them.
template <class Derived>
class GenericModel : public Model {
 public:
#define NHJ_FORWARD(S, SPEC)                                                                \
  MatX<S> metric(const VecX<S>& q) const override { return self().template metric_t<S>(q); } \
  MatX<S> frame(const VecX<S>& q) const override { return self().template frame_t<S>(q); }   \
  MatX<S> annihilator(const VecX<S>& q) const override {                                    \
    return self().template annihilator_t<S>(q);                                              \
  }                                                                                          \
  S potential(const VecX<S>& q) const override { return self().template potential_t<S>(q); }

  NHJ_FOR_EACH_SCALAR(NHJ_FORWARD, )
#undef NHJ_FORWARD

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

// Candidate vector field W on the chart, for the symmetry auditor.
class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual const std::string& name() const = 0;
  virtual VecX<double> eval(const VecX<double>& q) const = 0;
  virtual VecX<Jet1> eval(const VecX<Jet1>& q) const = 0;
  virtual VecX<Jet2> eval(const VecX<Jet2>& q) const = 0;
};

using VectorFieldPtr = std::shared_ptr<const VectorField>;

template <class Derived>
class GenericVectorField : public VectorField {
 public:
  VecX<double> eval(const VecX<double>& q) const override { return self().template eval_t<double>(q); }
  VecX<Jet1> eval(const VecX<Jet1>& q) const override { return self().template eval_t<Jet1>(q); }
  VecX<Jet2> eval(const VecX<Jet2>& q) const override { return self().template eval_t<Jet2>(q); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

// ---------------------------------------------------------------------------
// Checked evaluation at plain points.

void check_point(const Model& model, const VectorXd& q);
MatrixXd evaluate_metric(const Model& model, const VectorXd& q);
MatrixXd evaluate_frame(const Model& model, const VectorXd& q);
MatrixXd evaluate_annihilator(const Model& model, const VectorXd& q);
double evaluate_potential(const Model& model, const VectorXd& q);

// ---------------------------------------------------------------------------
// Validation.

struct ValidationOptions {
  int samples = 64;
  double consistency_tol = 1e-12;
  double symmetry_tol = 1e-14;
  double regularity_tol = kPivotTolerance;
  double reference_tol = 1e-9;
};

struct ValidationReport {
  bool annihilator_consistent = true;
  bool ranks_ok = true;
  bool metric_symmetric = true;
  bool regular = true;
  bool reference_ok = true;
  double max_annihilator_residual = 0.0;
  double max_metric_asymmetry = 0.0;
  double min_regularity_pivot = 0.0;
  double max_reference_residual = 0.0;
  std::vector<std::string> failures;
  std::optional<std::vector<double>> offending_point;

  bool passed() const {
    return annihilator_consistent && ranks_ok && metric_symmetric && regular && reference_ok;
  }
};

ValidationReport validate_model(const Model& model, const ValidationOptions& opts = {});

// ---------------------------------------------------------------------------
// Deterministic low-discrepancy samples.

std::vector<VectorXd> sample_box(const ChartBox& box, int count, int skip = 0);

// Points in the model box with velocities in D (v = E c, c from the sequence
// scaled to `speed`).
std::vector<TangentState> sample_constrained_states(const Model& model, int count,
                                                    double speed = 1.0, int skip = 0);

}  // namespace nhj
