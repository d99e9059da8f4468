#pragma once

// Truncated Taylor scalars used for every derivative in the library.
//
//   Jet1        value + gradient                 (first order, n <= kMaxDim)
//   Jet2        value + gradient + Hessian       (second order)
//   Tangent<S>  value + one directional tangent  (a dual number over S)
//
// Jets carry a runtime variable count n. Constants have n == 0 and behave as
// if their derivative slots were zero, so mixing constants with seeded
// variables never needs explicit promotion.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace nhj {

inline constexpr int kMaxDim = 8;

class Jet1 {
 public:
  Jet1() = default;
  Jet1(double value) : val_(value) {}  // NOLINT: constants convert implicitly

  static Jet1 variable(double value, int index, int n) {
    Jet1 j(value);
    j.n_ = n;
    j.grad_[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  double value() const { return val_; }
  double d(int i) const { return grad_[static_cast<std::size_t>(i)]; }
  int size() const { return n_; }

  double& value_ref() { return val_; }
  double& d_ref(int i) { return grad_[static_cast<std::size_t>(i)]; }
  void resize(int n) { n_ = n; }

  Jet1 operator-() const {
    Jet1 r(-val_);
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) r.grad_[i] = -grad_[i];
    return r;
  }

  Jet1& operator+=(const Jet1& b) { return *this = *this + b; }
  Jet1& operator-=(const Jet1& b) { return *this = *this - b; }
  Jet1& operator*=(const Jet1& b) { return *this = *this * b; }
  Jet1& operator/=(const Jet1& b) { return *this = *this / b; }

  friend Jet1 operator+(const Jet1& a, const Jet1& b) {
    Jet1 r(a.val_ + b.val_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.grad_[i] = a.grad_[i] + b.grad_[i];
    return r;
  }
  friend Jet1 operator-(const Jet1& a, const Jet1& b) {
    Jet1 r(a.val_ - b.val_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.grad_[i] = a.grad_[i] - b.grad_[i];
    return r;
  }
  friend Jet1 operator*(const Jet1& a, const Jet1& b) {
    Jet1 r(a.val_ * b.val_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.grad_[i] = a.val_ * b.grad_[i] + a.grad_[i] * b.val_;
    return r;
  }
  friend Jet1 operator/(const Jet1& a, const Jet1& b) {
    const double inv = 1.0 / b.val_;
    Jet1 r(a.val_ * inv);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.grad_[i] = (a.grad_[i] - r.val_ * b.grad_[i]) * inv;
    return r;
  }

  // f(a) given f(a.val), f'(a.val).
  friend Jet1 chain(const Jet1& a, double f, double df) {
    Jet1 r(f);
    r.n_ = a.n_;
    for (int i = 0; i < r.n_; ++i) r.grad_[i] = df * a.grad_[i];
    return r;
  }

 private:
  double val_ = 0.0;
  int n_ = 0;
  std::array<double, kMaxDim> grad_{};
};

class Jet2 {
 public:
  Jet2() = default;
  Jet2(double value) : val_(value) {}  // NOLINT: constants convert implicitly

  static Jet2 variable(double value, int index, int n) {
    Jet2 j(value);
    j.n_ = n;
    j.grad_[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  double value() const { return val_; }
  double d(int i) const { return grad_[static_cast<std::size_t>(i)]; }
  double dd(int i, int j) const { return hess_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  int size() const { return n_; }

  Jet2 operator-() const {
    Jet2 r(-val_);
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) {
      r.grad_[i] = -grad_[i];
      for (int j = 0; j < n_; ++j) r.hess_[i][j] = -hess_[i][j];
    }
    return r;
  }

  Jet2& operator+=(const Jet2& b) { return *this = *this + b; }
  Jet2& operator-=(const Jet2& b) { return *this = *this - b; }
  Jet2& operator*=(const Jet2& b) { return *this = *this * b; }
  Jet2& operator/=(const Jet2& b) { return *this = *this / b; }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r(a.val_ + b.val_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) {
      r.grad_[i] = a.grad_[i] + b.grad_[i];
      for (int j = 0; j < r.n_; ++j) r.hess_[i][j] = a.hess_[i][j] + b.hess_[i][j];
    }
    return r;
  }
  friend Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2 r(a.val_ - b.val_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) {
      r.grad_[i] = a.grad_[i] - b.grad_[i];
      for (int j = 0; j < r.n_; ++j) r.hess_[i][j] = a.hess_[i][j] - b.hess_[i][j];
    }
    return r;
  }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r(a.val_ * b.val_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) {
      r.grad_[i] = a.val_ * b.grad_[i] + a.grad_[i] * b.val_;
      for (int j = i; j < r.n_; ++j) {
        const double h = (a.val_ * b.hess_[i][j] + a.hess_[i][j] * b.val_) +
                         (a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i]);
        r.hess_[i][j] = h;
        r.hess_[j][i] = h;
      }
    }
    return r;
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    return a * chain(b, 1.0 / b.val_, -1.0 / (b.val_ * b.val_), 2.0 / (b.val_ * b.val_ * b.val_));
  }

  // f(a) given f, f', f'' at a.val.
  friend Jet2 chain(const Jet2& a, double f, double df, double ddf) {
    Jet2 r(f);
    r.n_ = a.n_;
    for (int i = 0; i < r.n_; ++i) {
      r.grad_[i] = df * a.grad_[i];
      for (int j = i; j < r.n_; ++j) {
        const double h = df * a.hess_[i][j] + ddf * (a.grad_[i] * a.grad_[j]);
        r.hess_[i][j] = h;
        r.hess_[j][i] = h;
      }
    }
    return r;
  }

 private:
  double val_ = 0.0;
  int n_ = 0;
  std::array<double, kMaxDim> grad_{};
  std::array<std::array<double, kMaxDim>, kMaxDim> hess_{};
};

// Dual number over S: the value and the derivative along one direction.
template <class S>
struct Tangent {
  S v{};
  S t{};

  Tangent() = default;
  Tangent(double value) : v(value), t(0.0) {}  // NOLINT
  Tangent(S value, S tangent) : v(std::move(value)), t(std::move(tangent)) {}

  Tangent operator-() const { return {-v, -t}; }
  Tangent& operator+=(const Tangent& b) { return *this = *this + b; }
  Tangent& operator-=(const Tangent& b) { return *this = *this - b; }
  Tangent& operator*=(const Tangent& b) { return *this = *this * b; }
  Tangent& operator/=(const Tangent& b) { return *this = *this / b; }

  friend Tangent operator+(const Tangent& a, const Tangent& b) { return {a.v + b.v, a.t + b.t}; }
  friend Tangent operator-(const Tangent& a, const Tangent& b) { return {a.v - b.v, a.t - b.t}; }
  friend Tangent operator*(const Tangent& a, const Tangent& b) {
    return {a.v * b.v, a.v * b.t + a.t * b.v};
  }
  friend Tangent operator/(const Tangent& a, const Tangent& b) {
    S q = a.v / b.v;
    S dq = (a.t - q * b.t) / b.v;
    return {std::move(q), std::move(dq)};
  }
};

// ---------------------------------------------------------------------------
// Value access, used for pivoting and for reading results.

inline double value_of(double x) { return x; }
inline double value_of(const Jet1& x) { return x.value(); }
inline double value_of(const Jet2& x) { return x.value(); }
template <class S>
double value_of(const Tangent<S>& x) {
  return value_of(x.v);
}

// ---------------------------------------------------------------------------
// Elementary functions.

inline Jet1 sin(const Jet1& a) { return chain(a, std::sin(a.value()), std::cos(a.value())); }
inline Jet1 cos(const Jet1& a) { return chain(a, std::cos(a.value()), -std::sin(a.value())); }
inline Jet1 exp(const Jet1& a) {
  const double e = std::exp(a.value());
  return chain(a, e, e);
}
inline Jet1 sqrt(const Jet1& a) {
  const double s = std::sqrt(a.value());
  return chain(a, s, 0.5 / s);
}
inline Jet1 abs(const Jet1& a) { return a.value() < 0.0 ? -a : a; }

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value());
  return chain(a, s, std::cos(a.value()), -s);
}
inline Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.value());
  return chain(a, c, -std::sin(a.value()), -c);
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return chain(a, e, e, e);
}
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value());
  return chain(a, s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet2 abs(const Jet2& a) { return a.value() < 0.0 ? -a : a; }

template <class S>
Tangent<S> sin(const Tangent<S>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.t};
}
template <class S>
Tangent<S> cos(const Tangent<S>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(sin(a.v) * a.t)};
}
template <class S>
Tangent<S> exp(const Tangent<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return {e, e * a.t};
}
template <class S>
Tangent<S> sqrt(const Tangent<S>& a) {
  using std::sqrt;
  S s = sqrt(a.v);
  return {s, a.t / (S(2.0) * s)};
}
template <class S>
Tangent<S> abs(const Tangent<S>& a) {
  return value_of(a) < 0.0 ? -a : a;
}

// ---------------------------------------------------------------------------
// Splitting a jet into its value and its first partials, one order lower.
// For Jet1 the pieces are doubles; for Jet2 they are Jet1 (value-and-gradient
// of the value, and of each partial).

template <class J>
struct LowerOrder;
template <>
struct LowerOrder<Jet1> {
  using type = double;
};
template <>
struct LowerOrder<Jet2> {
  using type = Jet1;
};
template <class J>
using lower_t = typename LowerOrder<J>::type;

inline double value_part(const Jet1& a) { return a.value(); }
inline double partial(const Jet1& a, int k) { return a.d(k); }

inline Jet1 value_part(const Jet2& a) {
  Jet1 r(a.value());
  r.resize(a.size());
  for (int i = 0; i < a.size(); ++i) r.d_ref(i) = a.d(i);
  return r;
}
inline Jet1 partial(const Jet2& a, int k) {
  Jet1 r(a.d(k));
  r.resize(a.size());
  for (int i = 0; i < a.size(); ++i) r.d_ref(i) = a.dd(k, i);
  return r;
}

}  // namespace nhj
