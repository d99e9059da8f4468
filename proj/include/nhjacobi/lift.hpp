#pragma once

// Complete lift of a model to TQ with chart (q, r), r the fiber coordinates.
//
//   metric       [[ r.dG, G ], [ G, 0 ]]
//   frame        columns e^c = (e; r.de) for every e, then e^v = (0; e)
//   annihilator  rows mu^v = (mu, 0) for every mu, then mu^c = (r.dmu, mu)
//   potential    r.dV
//
// All blocks come from evaluating the base model on dual numbers (q + r eps),
// so the lift never needs model-specific code. Lifting twice is unsupported.

#include "nhjacobi/model.hpp"

namespace nhj {

// Throws InvalidInputError when `base` is itself a lift.
ModelPtr lift_model(ModelPtr base);

bool is_lifted(const Model& model);

// The base of a lifted model, or nullptr.
ModelPtr lift_base(const Model& model);

// (q, qdot, r, rdot) -> (q, r, qdot, rdot). Its own inverse.
VectorXd kappa(const VectorXd& w);

struct SignatureReport {
  int samples = 0;
  int expected_positive = 0;
  int expected_negative = 0;
  int mismatches = 0;
  double min_abs_eigenvalue = 0.0;
  bool passed() const { return mismatches == 0; }
};

// Counts eigenvalue signs of the metric at each sample against (n, n).
SignatureReport lifted_signature_check(const Model& lifted, const std::vector<VectorXd>& samples);

}  // namespace nhj
