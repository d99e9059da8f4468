#pragma once

// Run configuration, argument parsing and CSV/JSON emission.
//
// CSV numbers are printed with 17 significant digits, so reading a file back
// reproduces the in-memory doubles exactly. JSON documents keep insertion
// order for stable output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhjacobi/dynamics.hpp"
#include "nhjacobi/jacobi.hpp"
#include "nhjacobi/models.hpp"
#include "nhjacobi/symmetry.hpp"

namespace nhj {

using Json = nlohmann::ordered_json;

// Bad command line. Maps to exit code 2 like other input errors.
class UsageError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { CSV, JSON };

struct RunConfig {
  std::string command;
  std::string model = "particle";
  ParamMap params;
  std::vector<double> q0;
  std::vector<double> v0;
  std::vector<double> W0;
  std::vector<double> Wd0;
  double dt = 1e-3;
  double t_end = 1.0;
  double eps = 1e-4;
  std::optional<double> tol;
  Scheme scheme = Scheme::RK4;
  bool project = false;
  std::string out;
  OutputFormat format = OutputFormat::CSV;
  std::string method = "direct";
  std::string field = "dz";
  FieldParams field_params;
  int samples = 50;
  bool verify_scoped = false;  // verify --model given explicitly

  bool help = false;
  std::string help_text;
};

// Parses argv (including argv[0]). Fills defaults, then checks vector
// lengths against the model: q0/W0/Wd0 default to zeros; v0 is required by
// geodesic and jacobi. Throws UsageError or InvalidInputError.
RunConfig parse_args(int argc, const char* const* argv);

std::vector<double> parse_list(const std::string& text, const std::string& what);

std::string format_double(double x);
double parse_double(const std::string& text);

// ---------------------------------------------------------------------------
// CSV.

std::vector<std::string> trajectory_header(const Model& model);
void write_trajectory_csv(std::ostream& os, const Model& model, const Trajectory& traj);

std::vector<std::string> jacobi_header(int n);
void write_jacobi_csv(std::ostream& os, const JacobiRun& run);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& is);

// ---------------------------------------------------------------------------
// JSON.

Json to_json(const MatrixXd& m);
Json to_json(const VectorXd& v);
// Nested [k][i][j].
Json to_json(const Array3d& a);

Json tensors_json(const Model& model, const VectorXd& q);
Json trajectory_json(const Model& model, const Trajectory& traj);
Json jacobi_json(const JacobiRun& run);
Json symmetry_json(const SymmetryReport& rep);

std::string dump(const Json& j);

// Writes `content` to `path` or throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace nhj
