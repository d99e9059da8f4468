#include "nhjacobi/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nhjacobi/lift.hpp"

namespace nhj {
namespace {

class ParticleModel final : public GenericModel<ParticleModel> {
 public:
  explicit ParticleModel(bool with_potential)
      : with_potential_(with_potential),
        name_(with_potential ? "particle_potential" : "particle") {}

  const std::string& name() const override { return name_; }
  int dim() const override { return 3; }
  int rank() const override { return 2; }
  bool has_potential() const override { return with_potential_; }

  ChartBox default_box() const override {
    return {VectorXd::Constant(3, -1.5), VectorXd::Constant(3, 1.5)};
  }

  template <class S>
  MatX<S> metric_t(const VecX<S>&) const {
    return MatX<S>::Identity(3, 3);
  }

  template <class S>
  MatX<S> frame_t(const VecX<S>& q) const {
    MatX<S> E = MatX<S>::Zero(3, 2);
    E(0, 0) = S(1.0);
    E(2, 0) = q[1];
    E(1, 1) = S(1.0);
    return E;
  }

  template <class S>
  MatX<S> annihilator_t(const VecX<S>& q) const {
    MatX<S> M(1, 3);
    M(0, 0) = -q[1];
    M(0, 1) = S(0.0);
    M(0, 2) = S(1.0);
    return M;
  }

  template <class S>
  S potential_t(const VecX<S>& q) const {
    return with_potential_ ? q[2] : S(0.0);
  }

  std::optional<TangentState> reference_solution(const TangentState& s0,
                                                 double t) const override {
    if (with_potential_) return std::nullopt;
    const double x0 = s0.q[0], y0 = s0.q[1], z0 = s0.q[2];
    const double xd = s0.v[0], yd = s0.v[1];
    TangentState out{VectorXd(3), VectorXd(3)};
    if (yd == 0.0) {
      out.q << xd * t + x0, y0, y0 * xd * t + z0;
      out.v << xd, 0.0, y0 * xd;
      return out;
    }
    const double k = xd / yd * std::sqrt(y0 * y0 + 1.0);
    const double y = yd * t + y0;
    const double root = std::sqrt(y * y + 1.0);
    out.q << k * (std::asinh(y) - std::asinh(y0)) + x0, y,
        k * (root - std::sqrt(y0 * y0 + 1.0)) + z0;
    const double xdot = k * yd / root;
    out.v << xdot, yd, y * xdot;
    return out;
  }

 private:
  bool with_potential_;
  std::string name_;
};

class DiskModel final : public GenericModel<DiskModel> {
 public:
  explicit DiskModel(const DiskParams& p) : p_(p) {
    if (!(p.I > 0.0) || !(p.J > 0.0)) {
      throw InvalidInputError("disk: inertias I and J must be positive");
    }
  }

  const std::string& name() const override { return name_; }
  int dim() const override { return 4; }
  int rank() const override { return 2; }

  ChartBox default_box() const override {
    VectorXd lo(4), hi(4);
    lo << -1.0, -1.0, -std::numbers::pi, -std::numbers::pi;
    hi << 1.0, 1.0, std::numbers::pi, std::numbers::pi;
    return {lo, hi};
  }

  template <class S>
  MatX<S> metric_t(const VecX<S>&) const {
    MatX<S> G = MatX<S>::Zero(4, 4);
    G(0, 0) = S(1.0);
    G(1, 1) = S(1.0);
    G(2, 2) = S(p_.I);
    G(3, 3) = S(p_.J);
    return G;
  }

  template <class S>
  MatX<S> frame_t(const VecX<S>& q) const {
    using std::cos;
    using std::sin;
    MatX<S> E = MatX<S>::Zero(4, 2);
    E(0, 0) = S(p_.R) * cos(q[3]);
    E(1, 0) = S(p_.R) * sin(q[3]);
    E(2, 0) = S(1.0);
    E(3, 1) = S(1.0);
    return E;
  }

  template <class S>
  MatX<S> annihilator_t(const VecX<S>& q) const {
    using std::cos;
    using std::sin;
    MatX<S> M = MatX<S>::Zero(2, 4);
    M(0, 0) = S(1.0);
    M(0, 2) = -(S(p_.R) * cos(q[3]));
    M(1, 1) = S(1.0);
    M(1, 2) = -(S(p_.R) * sin(q[3]));
    return M;
  }

  template <class S>
  S potential_t(const VecX<S>&) const {
    return S(0.0);
  }

  // theta and phi advance linearly; (x, y) follow from the constraints.
  std::optional<TangentState> reference_solution(const TangentState& s0,
                                                 double t) const override {
    const double Omega = s0.v[2], omega = s0.v[3];
    const double phi0 = s0.q[3];
    const double phi = omega * t + phi0;
    TangentState out{VectorXd(4), VectorXd(4)};
    if (omega == 0.0) {
      out.q << Omega * t * p_.R * std::cos(phi0) + s0.q[0],
          Omega * t * p_.R * std::sin(phi0) + s0.q[1], Omega * t + s0.q[2], phi0;
    } else {
      const double a = p_.R * Omega / omega;
      out.q << s0.q[0] + a * (std::sin(phi) - std::sin(phi0)),
          s0.q[1] - a * (std::cos(phi) - std::cos(phi0)), Omega * t + s0.q[2], phi;
    }
    out.v << p_.R * Omega * std::cos(phi), p_.R * Omega * std::sin(phi), Omega, omega;
    return out;
  }

 private:
  DiskParams p_;
  std::string name_ = "disk";
};

class FreeModel final : public GenericModel<FreeModel> {
 public:
  explicit FreeModel(int n) : n_(n) {
    if (n < 1 || n > kMaxDim / 2) {
      throw InvalidInputError("free: dimension must be in [1, " +
                              std::to_string(kMaxDim / 2) + "]");
    }
  }

  const std::string& name() const override { return name_; }
  int dim() const override { return n_; }
  int rank() const override { return n_; }

  ChartBox default_box() const override {
    return {VectorXd::Constant(n_, -1.0), VectorXd::Constant(n_, 1.0)};
  }

  template <class S>
  MatX<S> metric_t(const VecX<S>&) const {
    return MatX<S>::Identity(n_, n_);
  }
  template <class S>
  MatX<S> frame_t(const VecX<S>&) const {
    return MatX<S>::Identity(n_, n_);
  }
  template <class S>
  MatX<S> annihilator_t(const VecX<S>&) const {
    return MatX<S>(0, n_);
  }
  template <class S>
  S potential_t(const VecX<S>&) const {
    return S(0.0);
  }

  std::optional<TangentState> reference_solution(const TangentState& s0,
                                                 double t) const override {
    return TangentState{s0.q + t * s0.v, s0.v};
  }

 private:
  int n_;
  std::string name_ = "free";
};

double take(ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

}  // namespace

ModelPtr make_particle(bool with_potential) {
  return std::make_shared<ParticleModel>(with_potential);
}

ModelPtr make_disk(const DiskParams& params) { return std::make_shared<DiskModel>(params); }

ModelPtr make_free(int n) { return std::make_shared<FreeModel>(n); }

ModelPtr make_model(const std::string& name, const ParamMap& params) {
  static const std::string kLift = ":lift";
  if (name.size() > kLift.size() &&
      name.compare(name.size() - kLift.size(), kLift.size(), kLift) == 0) {
    return lift_model(make_model(name.substr(0, name.size() - kLift.size()), params));
  }
  ParamMap rest = params;
  ModelPtr model;
  if (name == "particle") {
    model = make_particle(false);
  } else if (name == "particle_potential") {
    model = make_particle(true);
  } else if (name == "disk") {
    DiskParams p;
    p.R = take(rest, "R", p.R);
    p.I = take(rest, "I", p.I);
    p.J = take(rest, "J", p.J);
    model = make_disk(p);
  } else if (name == "free") {
    const double n = take(rest, "n", 3.0);
    if (n != std::floor(n)) throw InvalidInputError("free: n must be an integer");
    model = make_free(static_cast<int>(n));
  } else {
    throw InvalidInputError("unknown model '" + name + "'");
  }
  if (!rest.empty()) {
    throw InvalidInputError("model '" + name + "' has no parameter '" + rest.begin()->first + "'");
  }
  return model;
}

std::vector<std::string> builtin_model_names() {
  return {"particle", "particle_potential", "disk", "free"};
}

ParamMap parse_params(const std::string& text) {
  ParamMap out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidInputError("malformed parameter '" + item + "', expected key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty()) {
      throw InvalidInputError("parameter '" + key + "' is not a number: '" + val + "'");
    }
    out[key] = x;
  }
  return out;
}

}  // namespace nhj
