#include "nhjacobi/io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nhjacobi/tensors.hpp"

namespace nhj {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void write_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << format_double(row[i]);
  }
  os << '\n';
}

void write_header(std::ostream& os, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
}

std::vector<double> trajectory_row(const Model& model, const DynState& s) {
  std::vector<double> row{s.t};
  row.insert(row.end(), s.q.data(), s.q.data() + s.q.size());
  row.insert(row.end(), s.v.data(), s.v.data() + s.v.size());
  row.push_back(energy(model, s));
  const VectorXd res = constraint_residual(model, s);
  row.insert(row.end(), res.data(), res.data() + res.size());
  return row;
}

std::vector<double> jacobi_row(const JacobiRun& run, std::size_t i) {
  const JacobiState& s = run.samples[i];
  std::vector<double> row{s.t};
  row.insert(row.end(), s.W.data(), s.W.data() + s.W.size());
  row.insert(row.end(), s.Wd.data(), s.Wd.data() + s.Wd.size());
  row.push_back(i < run.res_lifted.size() ? run.res_lifted[i] : std::nan(""));
  row.push_back(i < run.res_jacobi.size() ? run.res_jacobi[i] : std::nan(""));
  return row;
}

Json rows_json(const std::vector<std::vector<double>>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(r);
  return out;
}

VectorXd fit(const std::vector<double>& x, int n, const char* flag, const std::string& model,
             bool required, const std::string& command) {
  if (x.empty()) {
    if (required) throw UsageError(fmt::format("{}: {} is required", command, flag));
    return VectorXd::Zero(n);
  }
  if (static_cast<int>(x.size()) != n) {
    throw InvalidInputError(fmt::format("{} has {} entries but model '{}' has dimension {}", flag,
                                        x.size(), model, n));
  }
  return Eigen::Map<const VectorXd>(x.data(), n);
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (const std::string& item : split(text, ',')) {
    try {
      out.push_back(parse_double(item));
    } catch (const InvalidInputError&) {
      throw UsageError(fmt::format("{}: '{}' is not a number", what, item));
    }
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size()) {
    throw InvalidInputError("'" + text + "' is not a number");
  }
  return x;
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Nonholonomic geodesics, Jacobi fields and symmetry audits.", "nhjacobi"};
  app.require_subcommand(1);

  std::string params_text, field_params_text, scheme = "rk4", format = "csv";
  std::string q0, v0, W0, Wd0;
  double tol = 0.0;

  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "model name; append :lift for the lifted system");
    sub->add_option("--params", params_text, "model parameters, e.g. R=1,I=2,J=1");
  };
  auto point_opt = [&](CLI::App* sub) {
    sub->add_option("--q0,--q", q0, "configuration, comma separated (default 0)");
  };
  auto flow_opts = [&](CLI::App* sub) {
    sub->add_option("--v0", v0, "velocity, comma separated");
    sub->add_option("--dt", cfg.dt, "step size")->capture_default_str();
    sub->add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
    sub->add_option("--scheme", scheme, "rk4 or rk2")->capture_default_str();
    sub->add_flag("--project", cfg.project, "project velocities onto D after every step");
  };
  auto out_opts = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--out,-o", cfg.out, "output file (default stdout)");
    if (with_format) sub->add_option("--format", format, "csv or json")->capture_default_str();
  };

  app.add_subcommand("list-models", "list built-in models");

  CLI::App* tensors = app.add_subcommand("tensors", "projector, connection and torsion at a point");
  model_opts(tensors);
  point_opt(tensors);
  out_opts(tensors, false);

  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a nonholonomic trajectory");
  model_opts(geodesic);
  point_opt(geodesic);
  flow_opts(geodesic);
  out_opts(geodesic, true);

  CLI::App* jacobi = app.add_subcommand("jacobi", "Jacobi field along a trajectory");
  model_opts(jacobi);
  point_opt(jacobi);
  flow_opts(jacobi);
  out_opts(jacobi, true);
  jacobi->add_option("--W0", W0, "initial field (default 0)");
  jacobi->add_option("--Wd0", Wd0, "initial field derivative (default 0)");
  jacobi->add_option("--method", cfg.method, "direct, lift, fd or all")
      ->check(CLI::IsMember({"direct", "lift", "fd", "all"}))
      ->capture_default_str();
  jacobi->add_option("--eps", cfg.eps, "finite-difference half width")->capture_default_str();

  CLI::App* symmetry = app.add_subcommand("symmetry", "audit a candidate symmetry field");
  model_opts(symmetry);
  symmetry->add_option("--field", cfg.field, "dz, dtheta, counterexample1, counterexample2, zero")
      ->capture_default_str();
  symmetry->add_option("--field-params", field_params_text, "u, x0, z0, xdot0 for counterexamples");
  symmetry->add_option("--samples", cfg.samples, "sample points")->capture_default_str();
  CLI::Option* sym_tol = symmetry->add_option("--tol", tol, "verdict threshold (default 1e-10)");
  point_opt(symmetry);
  flow_opts(symmetry);
  out_opts(symmetry, false);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  CLI::Option* verify_model = verify->add_option("--model", cfg.model, "only checks involving this model");
  CLI::Option* verify_tol = verify->add_option("--tol", tol, "override every numeric tolerance");
  out_opts(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    cfg.help = true;
    cfg.help_text = app.help();
    for (const CLI::App* sub : app.get_subcommands()) cfg.help_text = sub->help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.params = parse_params(params_text);
  cfg.field_params = parse_params(field_params_text);
  cfg.scheme = parse_scheme(scheme);
  if (format == "csv") cfg.format = OutputFormat::CSV;
  else if (format == "json") cfg.format = OutputFormat::JSON;
  else throw UsageError("--format must be csv or json");
  if ((sym_tol->count() > 0) || (verify_tol->count() > 0)) {
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    cfg.tol = tol;
  }
  cfg.verify_scoped = verify_model->count() > 0;
  cfg.q0 = parse_list(q0, "--q0");
  cfg.v0 = parse_list(v0, "--v0");
  cfg.W0 = parse_list(W0, "--W0");
  cfg.Wd0 = parse_list(Wd0, "--Wd0");

  if (cfg.command == "list-models") return cfg;

  const ModelPtr model = make_model(cfg.model, cfg.params);
  if (cfg.command == "verify") return cfg;

  const int n = model->dim();
  const bool needs_v = cfg.command == "geodesic" || cfg.command == "jacobi";
  auto canon = [](const VectorXd& x) { return std::vector<double>(x.data(), x.data() + x.size()); };
  cfg.q0 = canon(fit(cfg.q0, n, "--q0", cfg.model, false, cfg.command));
  if (needs_v || !cfg.v0.empty()) cfg.v0 = canon(fit(cfg.v0, n, "--v0", cfg.model, needs_v, cfg.command));
  cfg.W0 = canon(fit(cfg.W0, n, "--W0", cfg.model, false, cfg.command));
  cfg.Wd0 = canon(fit(cfg.Wd0, n, "--Wd0", cfg.model, false, cfg.command));
  if (cfg.command != "tensors") step_count(cfg.dt, cfg.t_end);
  if (!(cfg.eps > 0.0)) throw UsageError("--eps must be positive");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  return cfg;
}

// ---------------------------------------------------------------------------

std::vector<std::string> trajectory_header(const Model& model) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= model.dim(); ++i) h.push_back(fmt::format("q{}", i));
  for (int i = 1; i <= model.dim(); ++i) h.push_back(fmt::format("v{}", i));
  h.emplace_back("energy");
  for (int i = 1; i <= model.codim(); ++i) h.push_back(fmt::format("res{}", i));
  return h;
}

void write_trajectory_csv(std::ostream& os, const Model& model, const Trajectory& traj) {
  write_header(os, trajectory_header(model));
  for (const DynState& s : traj.samples) write_row(os, trajectory_row(model, s));
}

std::vector<std::string> jacobi_header(int n) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= n; ++i) h.push_back(fmt::format("W{}", i));
  for (int i = 1; i <= n; ++i) h.push_back(fmt::format("Wd{}", i));
  h.emplace_back("res_lifted");
  h.emplace_back("res_jacobi");
  return h;
}

void write_jacobi_csv(std::ostream& os, const JacobiRun& run) {
  const int n = run.samples.empty() ? 0 : static_cast<int>(run.samples.front().W.size());
  write_header(os, jacobi_header(n));
  for (std::size_t i = 0; i < run.samples.size(); ++i) write_row(os, jacobi_row(run, i));
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw IoError("csv: empty input");
  table.header = split(line, ',');
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != table.header.size()) {
      throw IoError(fmt::format("csv line {}: {} cells, header has {}", lineno, cells.size(),
                                table.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      try {
        row.push_back(parse_double(c));
      } catch (const InvalidInputError&) {
        throw IoError(fmt::format("csv line {}: '{}' is not a number", lineno, c));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------

Json to_json(const MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const Array3d& a) {
  const int n = a.dim();
  Json out = Json::array();
  for (int k = 0; k < n; ++k) {
    Json mat = Json::array();
    for (int i = 0; i < n; ++i) {
      Json row = Json::array();
      for (int j = 0; j < n; ++j) row.push_back(a(k, i, j));
      mat.push_back(std::move(row));
    }
    out.push_back(std::move(mat));
  }
  return out;
}

Json tensors_json(const Model& model, const VectorXd& q) {
  const ConnectionData cd = connection_data(model, q);
  Json j;
  j["model"] = model.name();
  j["q"] = to_json(q);
  j["P"] = to_json(cd.P);
  j["gammaNH"] = to_json(cd.gammaNH);
  j["torsion"] = to_json(cd.torsion);
  return j;
}

Json trajectory_json(const Model& model, const Trajectory& traj) {
  Json j;
  j["model"] = traj.model;
  j["scheme"] = to_string(traj.scheme);
  j["dt"] = traj.dt;
  j["projected"] = traj.projected;
  j["max_constraint_residual"] = traj.max_constraint_residual;
  j["columns"] = trajectory_header(model);
  std::vector<std::vector<double>> rows;
  for (const DynState& s : traj.samples) rows.push_back(trajectory_row(model, s));
  j["rows"] = rows_json(rows);
  return j;
}

Json jacobi_json(const JacobiRun& run) {
  Json j;
  j["model"] = run.model;
  j["method"] = to_string(run.method);
  j["dt"] = run.dt;
  const int n = run.samples.empty() ? 0 : static_cast<int>(run.samples.front().W.size());
  j["columns"] = jacobi_header(n);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < run.samples.size(); ++i) rows.push_back(jacobi_row(run, i));
  j["rows"] = rows_json(rows);
  return j;
}

Json symmetry_json(const SymmetryReport& rep) {
  auto cond = [&](double r, bool pass) {
    Json c;
    c["residual"] = r;
    c["pass"] = pass;
    return c;
  };
  Json j;
  j["field"] = rep.field;
  j["samples"] = rep.samples;
  j["tol"] = rep.tol;
  j["cond_i"] = cond(rep.cond_i, rep.pass_i());
  j["cond_ii"] = cond(rep.cond_ii, rep.pass_ii());
  j["cond_iii"] = cond(rep.cond_iii, rep.pass_iii());
  j["killing"] = cond(rep.killing, rep.pass_killing());
  j["symmetry"] = rep.symmetry();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace nhj
