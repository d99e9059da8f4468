#pragma once

// Built-in models and name-based lookup.
//
//   particle            R^3, g = I, D = span{dx + y dz, dy}, mu = dz - y dx
//   particle_potential  the particle with V(x, y, z) = z
//   disk                vertical rolling disk on (x, y, theta, phi),
//                       g = diag(1, 1, I, J), xdot = R thetadot cos(phi),
//                       ydot = R thetadot sin(phi)
//   free                euclidean R^n with D = TQ
//
// Appending ":lift" to any name yields its complete lift on TQ.

#include <map>
#include <string>
#include <vector>

#include "nhjacobi/model.hpp"

namespace nhj {

struct DiskParams {
  double R = 1.0;
  double I = 1.0;
  double J = 1.0;
};

ModelPtr make_particle(bool with_potential = false);
ModelPtr make_disk(const DiskParams& params = {});
ModelPtr make_free(int n = 3);

using ParamMap = std::map<std::string, double>;

// Resolves "particle", "disk", "particle_potential", "free" and their
// ":lift" variants. Unknown names or parameters throw InvalidInputError.
ModelPtr make_model(const std::string& name, const ParamMap& params = {});

std::vector<std::string> builtin_model_names();

// Parses "R=1.0,I=2" style lists.
ParamMap parse_params(const std::string& text);

}  // namespace nhj
