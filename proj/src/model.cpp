#include "nhjacobi/model.hpp"

#include <Eigen/SVD>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhj {
namespace {

std::vector<double> to_std(const VectorXd& q) { return {q.data(), q.data() + q.size()}; }

double smallest_singular_value(const MatrixXd& A) {
  if (A.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<MatrixXd> svd(A);
  return svd.singularValues().minCoeff();
}

void check_shape(const MatrixXd& A, Eigen::Index rows, Eigen::Index cols, const Model& model,
                 const char* what) {
  if (A.rows() != rows || A.cols() != cols) {
    throw InvalidInputError(model.name() + ": " + what + " has shape " +
                            std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

void check_point(const Model& model, const VectorXd& q) {
  if (q.size() != model.dim()) {
    throw InvalidInputError(model.name() + ": point has " + std::to_string(q.size()) +
                            " coordinates, model dimension is " + std::to_string(model.dim()));
  }
  if (!q.allFinite()) throw InvalidInputError(model.name() + ": point has non-finite entries");
}

MatrixXd evaluate_metric(const Model& model, const VectorXd& q) {
  check_point(model, q);
  MatrixXd G = model.metric(cast_vec<double>(q));
  check_shape(G, model.dim(), model.dim(), model, "metric");
  return G;
}

MatrixXd evaluate_frame(const Model& model, const VectorXd& q) {
  check_point(model, q);
  MatrixXd E = model.frame(cast_vec<double>(q));
  check_shape(E, model.dim(), model.rank(), model, "frame");
  if (smallest_singular_value(E) < kPivotTolerance) {
    throw DegenerateDistributionError(model.name() + ": frame loses rank at q = " +
                                      RegularityError::format_point(to_std(q)));
  }
  return E;
}

MatrixXd evaluate_annihilator(const Model& model, const VectorXd& q) {
  check_point(model, q);
  MatrixXd M = model.annihilator(cast_vec<double>(q));
  check_shape(M, model.codim(), model.dim(), model, "annihilator");
  if (smallest_singular_value(M.transpose()) < kPivotTolerance) {
    throw DegenerateDistributionError(model.name() + ": annihilator loses rank at q = " +
                                      RegularityError::format_point(to_std(q)));
  }
  return M;
}

double evaluate_potential(const Model& model, const VectorXd& q) {
  check_point(model, q);
  return model.potential(cast_vec<double>(q));
}

ValidationReport validate_model(const Model& model, const ValidationOptions& opts) {
  ValidationReport rep;
  rep.min_regularity_pivot = std::numeric_limits<double>::infinity();
  auto fail = [&](bool& flag, const std::string& msg, const VectorXd& q) {
    if (flag) rep.failures.push_back(msg + " at q = " + RegularityError::format_point(to_std(q)));
    flag = false;
    if (!rep.offending_point) rep.offending_point = to_std(q);
  };

  for (const VectorXd& q : sample_box(model.default_box(), opts.samples)) {
    MatrixXd G, E, M;
    try {
      G = evaluate_metric(model, q);
      E = evaluate_frame(model, q);
      M = evaluate_annihilator(model, q);
    } catch (const DegenerateDistributionError&) {
      fail(rep.ranks_ok, "distribution rank drop", q);
      continue;
    }

    const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
    rep.max_metric_asymmetry = std::max(rep.max_metric_asymmetry, asym);
    if (asym > opts.symmetry_tol) fail(rep.metric_symmetric, "metric not symmetric", q);

    if (M.rows() > 0) {
      const double res = (M * E).cwiseAbs().maxCoeff();
      rep.max_annihilator_residual = std::max(rep.max_annihilator_residual, res);
      if (res > opts.consistency_tol) fail(rep.annihilator_consistent, "M E != 0", q);
    }

    const double sigma = smallest_singular_value(E.transpose() * G * E);
    rep.min_regularity_pivot = std::min(rep.min_regularity_pivot, sigma);
    if (sigma < opts.regularity_tol) fail(rep.regular, "E^T G E singular", q);
  }

  if (!rep.passed()) return rep;

  // Reference flows must stay on D.
  const int n_ref = std::max(1, opts.samples / 8);
  for (const TangentState& s : sample_constrained_states(model, n_ref)) {
    for (double t : {0.0, 0.5, 1.0}) {
      const auto ref = model.reference_solution(s, t);
      if (!ref) break;
      double res = 0.0;
      if (model.codim() > 0) {
        res = (evaluate_annihilator(model, ref->q) * ref->v).cwiseAbs().maxCoeff();
      }
      if (t == 0.0) {
        res = std::max(res, (ref->q - s.q).cwiseAbs().maxCoeff());
        res = std::max(res, (ref->v - s.v).cwiseAbs().maxCoeff());
      }
      rep.max_reference_residual = std::max(rep.max_reference_residual, res);
      if (!(res <= opts.reference_tol)) fail(rep.reference_ok, "reference solution leaves D", ref->q);
    }
  }
  return rep;
}

std::vector<VectorXd> sample_box(const ChartBox& box, int count, int skip) {
  const auto n = box.lo.size();
  if (box.hi.size() != n || n == 0) throw InvalidInputError("sample_box: malformed box");
  if (count < 0 || skip < 0) throw InvalidInputError("sample_box: negative count");
  boost::random::sobol gen(static_cast<std::size_t>(n));
  // The first point of the sequence is the origin corner; start one later.
  gen.discard(static_cast<std::uintmax_t>(n) * static_cast<std::uintmax_t>(skip + 1));
  const double scale = std::ldexp(1.0, -64);
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    VectorXd q(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = static_cast<double>(gen()) * scale;
      q[i] = box.lo[i] + u * (box.hi[i] - box.lo[i]);
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<TangentState> sample_constrained_states(const Model& model, int count, double speed,
                                                    int skip) {
  const int n = model.dim();
  const int k = model.rank();
  const ChartBox base = model.default_box();
  ChartBox joint{VectorXd(n + k), VectorXd(n + k)};
  joint.lo << base.lo, VectorXd::Constant(k, -1.0);
  joint.hi << base.hi, VectorXd::Constant(k, 1.0);
  std::vector<TangentState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (const VectorXd& p : sample_box(joint, count, skip)) {
    TangentState s{p.head(n), VectorXd()};
    s.v = speed * (evaluate_frame(model, s.q) * p.tail(k));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nhj
