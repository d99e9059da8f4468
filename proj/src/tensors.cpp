#include "nhjacobi/tensors.hpp"

#include <vector>

namespace nhj {
namespace {

std::vector<double> point_of(const VectorXd& q) { return {q.data(), q.data() + q.size()}; }

template <class S>
VectorXd values_at(const VecX<S>& q) {
  return values(q);
}

// Geometry one derivative order below the seeding jet J: with J = Jet1 the
// results are plain doubles, with J = Jet2 they carry their own gradients.
template <class J>
struct JetGeometry {
  using L = lower_t<J>;
  MatX<L> G;
  MatX<L> P;
  MatX<L> Pp;
  Array3<L> gammaG;
  Array3<L> gammaNH;
  VecX<L> F;
};

template <class J>
JetGeometry<J> jet_geometry(const Model& model, const VectorXd& q) {
  using L = lower_t<J>;
  check_point(model, q);
  const int n = model.dim();
  const VecX<J> x = seed<J>(q);

  const MatX<J> GJ = model.metric(x);
  const MatX<J> PJ = projector<J>(model, x);
  const J V = model.potential(x);

  JetGeometry<J> out;
  out.G = MatX<L>(n, n);
  out.P = MatX<L>(n, n);
  out.Pp = MatX<L>(n, n);
  std::vector<MatX<L>> dG(static_cast<std::size_t>(n), MatX<L>(n, n));
  std::vector<MatX<L>> dPp(static_cast<std::size_t>(n), MatX<L>(n, n));
  VecX<L> dV(n);
  for (int i = 0; i < n; ++i) {
    dV[i] = partial(V, i);
    for (int j = 0; j < n; ++j) {
      const J pp = (i == j ? J(1.0) : J(0.0)) - PJ(i, j);
      out.G(i, j) = value_part(GJ(i, j));
      out.P(i, j) = value_part(PJ(i, j));
      out.Pp(i, j) = value_part(pp);
      for (int l = 0; l < n; ++l) {
        dG[static_cast<std::size_t>(l)](i, j) = partial(GJ(i, j), l);
        dPp[static_cast<std::size_t>(l)](i, j) = partial(pp, l);
      }
    }
  }

  const MatX<L> Ginv = inverse<L>(out.G, kPivotTolerance, "metric");
  auto dg = [&](int l, int i, int j) -> const L& { return dG[static_cast<std::size_t>(l)](i, j); };

  // Christoffel symbols of the first kind, then raise the index.
  Array3<L> first(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const L c = L(0.5) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        first(l, i, j) = c;
        first(l, j, i) = c;
      }
  out.gammaG = Array3<L>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        L acc(0.0);
        for (int l = 0; l < n; ++l) acc += Ginv(k, l) * first(l, i, j);
        out.gammaG(k, i, j) = acc;
        out.gammaG(k, j, i) = acc;
      }

  out.gammaNH = Array3<L>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        L acc = dPp[static_cast<std::size_t>(i)](k, j);
        for (int m = 0; m < n; ++m) {
          acc += out.P(k, m) * out.gammaG(m, i, j) + out.gammaG(k, i, m) * out.Pp(m, j);
        }
        out.gammaNH(k, i, j) = acc;
      }

  out.F = mul<L>(out.P, mul<L>(Ginv, dV));
  return out;
}

Array3d to_values(const Array3<Jet1>& a) {
  const int n = a.dim();
  Array3d out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(k, i, j) = a(k, i, j).value();
  return out;
}

Array3d torsion_of(const Array3d& g) {
  const int n = g.dim();
  Array3d T(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(m, i, j) = g(m, i, j) - g(m, j, i);
  return T;
}

}  // namespace

template <class S>
MatX<S> projector(const Model& model, const VecX<S>& q) {
  const MatX<S> G = model.metric(q);
  const MatX<S> E = model.frame(q);
  const MatX<S> EtG = mul<S>(E.transpose(), G);
  const MatX<S> A = mul<S>(EtG, E);
  try {
    return mul<S>(E, solve<S>(A, EtG, kPivotTolerance, "E^T G E"));
  } catch (const SingularMatrixError&) {
    throw RegularityError(model.name() + ": E^T G E is singular", point_of(values_at<S>(q)));
  }
}

template MatX<double> projector<double>(const Model&, const VecX<double>&);
template MatX<Jet1> projector<Jet1>(const Model&, const VecX<Jet1>&);
template MatX<Jet2> projector<Jet2>(const Model&, const VecX<Jet2>&);

Projectors orthogonal_projector(const Model& model, const VectorXd& q) {
  check_point(model, q);
  Projectors out;
  out.P = projector<double>(model, cast_vec<double>(q));
  out.Pp = MatrixXd::Identity(model.dim(), model.dim()) - out.P;
  return out;
}

ConnectionData connection_data(const Model& model, const VectorXd& q, bool with_gradient) {
  ConnectionData cd;
  cd.q = q;
  const int n = model.dim();
  if (!with_gradient) {
    const JetGeometry<Jet1> g = jet_geometry<Jet1>(model, q);
    cd.G = g.G;
    cd.P = g.P;
    cd.Pp = g.Pp;
    cd.gammaG = g.gammaG;
    cd.gammaNH = g.gammaNH;
    cd.F = g.F;
  } else {
    const JetGeometry<Jet2> g = jet_geometry<Jet2>(model, q);
    cd.G = values(g.G);
    cd.P = values(g.P);
    cd.Pp = values(g.Pp);
    cd.gammaG = to_values(g.gammaG);
    cd.gammaNH = to_values(g.gammaNH);
    cd.F = values(g.F);
    cd.has_gradient = true;
    cd.dGammaNH = Array4(n);
    cd.dF = MatrixXd(n, n);
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        cd.dF(k, l) = g.F[k].d(l);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) cd.dGammaNH(k, i, j, l) = g.gammaNH(k, i, j).d(l);
      }
    }
  }
  cd.torsion = torsion_of(cd.gammaNH);
  return cd;
}

Array3d levi_civita(const Model& model, const VectorXd& q) {
  return jet_geometry<Jet1>(model, q).gammaG;
}

Array3d nh_christoffel(const Model& model, const VectorXd& q) {
  return jet_geometry<Jet1>(model, q).gammaNH;
}

Array4 christoffel_gradient(const Model& model, const VectorXd& q) {
  return connection_data(model, q, true).dGammaNH;
}

Array3d torsion(const Model& model, const VectorXd& q) {
  return torsion_of(nh_christoffel(model, q));
}

VectorXd curvature_apply(const ConnectionData& cd, const VectorXd& X, const VectorXd& Y,
                         const VectorXd& Z) {
  if (!cd.has_gradient) throw InvalidInputError("curvature_apply: connection data lacks gradients");
  const int n = cd.gammaNH.dim();
  if (X.size() != n || Y.size() != n || Z.size() != n) {
    throw InvalidInputError("curvature_apply: argument dimension mismatch");
  }
  const Array3d& g = cd.gammaNH;
  const Array4& dg = cd.dGammaNH;
  VectorXd out = VectorXd::Zero(n);
  for (int m = 0; m < n; ++m) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double xy = X[i] * Y[j];
        const double yx = Y[i] * X[j];
        if (xy == 0.0 && yx == 0.0) continue;
        for (int l = 0; l < n; ++l) {
          if (Z[l] == 0.0) continue;
          // The two halves are the same expression with X and Y exchanged,
          // which keeps R(X, Y)Z = -R(Y, X)Z exact in floating point.
          double s = dg(m, j, l, i);
          for (int k = 0; k < n; ++k) s += g(k, j, l) * g(m, i, k);
          acc += (xy - yx) * Z[l] * s;
        }
      }
    out[m] = acc;
  }
  return out;
}

VectorXd curvature_apply(const Model& model, const VectorXd& q, const VectorXd& X,
                         const VectorXd& Y, const VectorXd& Z) {
  return curvature_apply(connection_data(model, q, true), X, Y, Z);
}

VectorXd covariant_derivative(const Array3d& gamma, const VectorXd& X, const VectorXd& Y,
                              const MatrixXd& dY) {
  return dY * X + contract(gamma, X, Y);
}

VectorXd contract(const Array3d& gamma, const VectorXd& a, const VectorXd& b) {
  const int n = gamma.dim();
  VectorXd out = VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < n; ++j) out[k] += gamma(k, i, j) * a[i] * b[j];
    }
  return out;
}

}  // namespace nhj
