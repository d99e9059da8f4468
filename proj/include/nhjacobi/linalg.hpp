#pragma once

// Eigen containers over the jet scalars plus a small pivoted solver that
// works for every scalar kind (pivot selection looks at the value part only).

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

#include "nhjacobi/errors.hpp"
#include "nhjacobi/jet.hpp"

namespace Eigen {

template <>
struct NumTraits<nhj::Jet1> : GenericNumTraits<nhj::Jet1> {
  using Real = nhj::Jet1;
  using NonInteger = nhj::Jet1;
  using Nested = nhj::Jet1;
  using Literal = nhj::Jet1;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2 * nhj::kMaxDim,
    MulCost = 4 * nhj::kMaxDim
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <>
struct NumTraits<nhj::Jet2> : GenericNumTraits<nhj::Jet2> {
  using Real = nhj::Jet2;
  using NonInteger = nhj::Jet2;
  using Nested = nhj::Jet2;
  using Literal = nhj::Jet2;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = nhj::kMaxDim * nhj::kMaxDim,
    MulCost = 4 * nhj::kMaxDim * nhj::kMaxDim
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <class S>
struct NumTraits<nhj::Tangent<S>> : GenericNumTraits<nhj::Tangent<S>> {
  using Real = nhj::Tangent<S>;
  using NonInteger = nhj::Tangent<S>;
  using Nested = nhj::Tangent<S>;
  using Literal = nhj::Tangent<S>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2 * NumTraits<S>::AddCost,
    MulCost = 3 * NumTraits<S>::MulCost
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

}  // namespace Eigen

namespace nhj {

template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Smallest admissible pivot magnitude in every dense solve.
inline constexpr double kPivotTolerance = 1e-10;

// Solves A X = B by Gaussian elimination with partial pivoting on value parts.
// Throws SingularMatrixError when a pivot falls below `pivot_tol`.
template <class S>
MatX<S> solve(MatX<S> A, MatX<S> B, double pivot_tol = kPivotTolerance,
              const char* what = "matrix") {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n) {
    throw InvalidInputError(std::string("solve: shape mismatch for ") + what);
  }
  const int m = static_cast<int>(B.cols());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(value_of(A(c, c)));
    for (int r = c + 1; r < n; ++r) {
      const double a = std::abs(value_of(A(r, c)));
      if (a > best) {
        best = a;
        piv = r;
      }
    }
    if (!(best >= pivot_tol)) {
      throw SingularMatrixError(what, best);
    }
    if (piv != c) {
      A.row(c).swap(A.row(piv));
      B.row(c).swap(B.row(piv));
    }
    const S inv = S(1.0) / A(c, c);
    for (int r = c + 1; r < n; ++r) {
      const S f = A(r, c) * inv;
      for (int k = c; k < n; ++k) A(r, k) = A(r, k) - f * A(c, k);
      for (int k = 0; k < m; ++k) B(r, k) = B(r, k) - f * B(c, k);
    }
  }
  MatX<S> X(n, m);
  for (int k = 0; k < m; ++k) {
    for (int r = n - 1; r >= 0; --r) {
      S acc = B(r, k);
      for (int j = r + 1; j < n; ++j) acc = acc - A(r, j) * X(j, k);
      X(r, k) = acc / A(r, r);
    }
  }
  return X;
}

// Plain triple loop; cheaper than Eigen's blocked kernels for jet scalars.
template <class S>
MatX<S> mul(const MatX<S>& A, const MatX<S>& B) {
  if (A.cols() != B.rows()) throw InvalidInputError("mul: inner dimensions differ");
  MatX<S> C(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      S acc(0.0);
      for (Eigen::Index k = 0; k < A.cols(); ++k) acc += A(i, k) * B(k, j);
      C(i, j) = acc;
    }
  }
  return C;
}

template <class S>
VecX<S> mul(const MatX<S>& A, const VecX<S>& x) {
  if (A.cols() != x.size()) throw InvalidInputError("mul: inner dimensions differ");
  VecX<S> y(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    S acc(0.0);
    for (Eigen::Index k = 0; k < A.cols(); ++k) acc += A(i, k) * x[k];
    y[i] = acc;
  }
  return y;
}

template <class S>
MatX<S> inverse(const MatX<S>& A, double pivot_tol = kPivotTolerance,
                const char* what = "matrix") {
  const auto n = A.rows();
  MatX<S> I = MatX<S>::Identity(n, n);
  return solve<S>(A, I, pivot_tol, what);
}

// Seeds q as independent jet variables.
template <class J>
VecX<J> seed(const VectorXd& q) {
  const int n = static_cast<int>(q.size());
  VecX<J> out(n);
  for (int i = 0; i < n; ++i) out[i] = J::variable(q[i], i, n);
  return out;
}

template <class S>
MatrixXd values(const MatX<S>& A) {
  MatrixXd out(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) out(i, j) = value_of(A(i, j));
  return out;
}

template <class S>
VectorXd values(const VecX<S>& v) {
  VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = value_of(v[i]);
  return out;
}

template <class S>
VecX<S> cast_vec(const VectorXd& v) {
  VecX<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = S(v[i]);
  return out;
}

// Dense n x n x n array, indexed (k, i, j) with k the upper index.
template <class S>
class Array3 {
 public:
  Array3() = default;
  explicit Array3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), S(0.0)) {}
  int dim() const { return n_; }
  S& operator()(int k, int i, int j) { return data_[idx(k, i, j)]; }
  const S& operator()(int k, int i, int j) const { return data_[idx(k, i, j)]; }
  const std::vector<S>& data() const { return data_; }

 private:
  std::size_t idx(int k, int i, int j) const {
    return static_cast<std::size_t>((k * n_ + i) * n_ + j);
  }
  int n_ = 0;
  std::vector<S> data_;
};

// Dense n^4 array, indexed (k, i, j, l): d/dq^l of the (k, i, j) entry.
class Array4 {
 public:
  Array4() = default;
  explicit Array4(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}
  int dim() const { return n_; }
  double& operator()(int k, int i, int j, int l) { return data_[idx(k, i, j, l)]; }
  double operator()(int k, int i, int j, int l) const { return data_[idx(k, i, j, l)]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t idx(int k, int i, int j, int l) const {
    return static_cast<std::size_t>(((k * n_ + i) * n_ + j) * n_ + l);
  }
  int n_ = 0;
  std::vector<double> data_;
};

using Array3d = Array3<double>;

}  // namespace nhj
