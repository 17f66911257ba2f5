#include "popdyn/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "popdyn/dynamics.hpp"
#include "popdyn/report_io.hpp"

namespace popdyn {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

Json tool_json() { return {{"name", kToolName}, {"version", kToolVersion}}; }

std::optional<Eigen::VectorXd> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t\r");
    const auto last = item.find_last_not_of(" \t\r");
    if (first == std::string::npos) return std::nullopt;
    const std::string token = item.substr(first, last - first + 1);
    double v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
    values.push_back(v);
  }
  if (values.empty()) return std::nullopt;
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

/// --x0 is a comma-separated list or a path to a one-column file.
Eigen::VectorXd read_initial_population(const std::string& arg) {
  if (auto list = parse_number_list(arg)) return *list;
  std::ifstream in(arg);
  if (!in) throw ValidationError("--x0: '" + arg + "' is neither a number list nor a readable file");
  std::vector<double> values;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto v = parse_number_list(line);
    if (!v || v->size() != 1)
      throw ValidationError("--x0 file " + arg + ": line " + std::to_string(lineno) +
                            ": expected one number");
    values.push_back((*v)(0));
  }
  if (values.empty()) throw ValidationError("--x0 file " + arg + " is empty");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

struct Loaded {
  ModelFile file;
  PopulationModel model;
};

Loaded load(const std::string& path, const Tolerances& tol) {
  ModelFile file = read_model_file(path);
  PopulationModel model = to_model(file, tol);
  return {std::move(file), std::move(model)};
}

int cmd_analyze(const std::string& path, const Tolerances& tol, std::ostream& out) {
  const Loaded loaded = load(path, tol);
  const AnalysisReport report = analyze(loaded.model, tol);
  ReportPayload payload = make_payload(report, static_cast<long>(loaded.model.size()), tol);
  if (const auto* l = std::get_if<LeslieModel>(&loaded.file))
    payload.leslie = LeslieSummary{leslie_r0(*l), leslie_growth_rate(*l)};
  out << emit(to_json(payload)) << '\n';
  return kExitOk;
}

int cmd_scale(const std::string& path, bool stationary, std::optional<double> target,
              const Tolerances& tol, std::ostream& out) {
  const Loaded loaded = load(path, tol);
  const PopulationModel& m = loaded.model;
  Json j;
  j["tool"] = tool_json();
  if (stationary) {
    const double r0 = spectral_radius(next_generation_matrix(m, tol), tol);
    const PopulationModel scaled = stabilizing_scale(m, tol);
    const Eigen::MatrixXd p = scaled.projection();
    j["mode"] = "stationary";
    j["target"] = 1.0;
    j["q"] = r0;
    j["scaled_fertility"] = matrix_json(scaled.fertility());
    j["achieved_growth"] = spectral_radius(p, tol);
    j["R0_s"] = spectral_radius(next_generation_matrix(scaled, tol), tol);
    j["stable_population"] =
        analyze_structure(p).irreducible ? vector_json(perron_pair(p, tol).right) : Json(nullptr);
    j["warnings"] = scaled.warnings();
  } else {
    const TargetScaling s = target_growth_scale(m, *target, tol);
    j["mode"] = "target-growth";
    j["target"] = *target;
    j["q"] = s.q;
    j["scaled_fertility"] = matrix_json(s.scaled.fertility());
    j["achieved_growth"] = s.achieved_growth;
    j["R0_s"] = s.r0_scaled;
    j["stable_population"] = vector_json(s.stable_population);
    j["warnings"] = s.scaled.warnings();
  }
  out << emit(j) << '\n';
  return kExitOk;
}

bool limits_agree(const std::vector<Eigen::VectorXd>& limits) {
  for (const auto& w : limits) {
    const double scale = std::max(1.0, limits.front().cwiseAbs().maxCoeff());
    if ((w - limits.front()).cwiseAbs().maxCoeff() > 1e-6 * scale) return false;
  }
  return true;
}

Json simulate_summary(const PopulationModel& m, const Eigen::VectorXd& x0, const Tolerances& tol) {
  const StructureReport structure = analyze_structure(m.projection());
  Json s;
  s["r"] = spectral_radius(m.projection(), tol);
  s["irreducible"] = structure.irreducible;
  s["primitive"] = structure.primitive;
  if (!structure.irreducible) {
    s["period"] = nullptr;
    s["limits"] = nullptr;
    s["note"] = "reducible projection matrix: long-run limits are not computed";
    return s;
  }
  try {
    const PeriodicLimits pl = periodic_limits(m, x0, tol);
    const double r = pl.growth_rate;
    s["fate"] = to_string(r < 1.0 - tol.cls   ? Fate::Extinct
                          : r > 1.0 + tol.cls ? Fate::Unbounded
                                              : Fate::Finite);
    s["period"] = pl.period;
    Json limits = Json::array();
    for (const auto& w : pl.limits) limits.push_back(vector_json(w));
    s["limits"] = limits;
    s["single_limit"] = limits_agree(pl.limits);
  } catch (const NumericError& e) {
    s["period"] = *structure.imprimitivity_index;
    s["limits"] = nullptr;
    s["note"] = std::string("limits not computed: ") + e.what();
  }
  return s;
}

int cmd_simulate(const std::string& path, const std::string& x0_arg, long steps, bool normalize,
                 const std::string& out_path, const std::string& summary_path,
                 const Tolerances& tol, std::ostream& out, std::ostream& err) {
  const Loaded loaded = load(path, tol);
  const Eigen::VectorXd x0 = read_initial_population(x0_arg);
  const Trajectory traj = iterate(loaded.model, x0, steps, normalize, tol);

  std::ostringstream csv;
  csv << "step,total";
  for (Eigen::Index i = 0; i < loaded.model.size(); ++i) csv << ",class_" << i + 1;
  csv << '\n';
  for (const auto& rec : traj.steps) {
    csv << rec.step << ',' << format_number(rec.total);
    for (Eigen::Index i = 0; i < rec.x.size(); ++i) csv << ',' << format_number(rec.x(i));
    csv << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw ValidationError("--out: cannot write " + out_path);
    f << csv.str();
  }

  Json summary = simulate_summary(loaded.model, x0, tol);
  summary["steps"] = steps;
  summary["normalized"] = normalize;
  Json rounded = Json::parse(emit(summary));
  const std::string line = rounded.dump();
  if (summary_path.empty()) {
    err << line << '\n';
  } else {
    std::ofstream f(summary_path);
    if (!f) throw ValidationError("--summary: cannot write " + summary_path);
    f << line << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perron-Frobenius analysis of matrix population models"};
  app.require_subcommand(1);
  app.fallthrough();

  Tolerances tol;
  app.add_option("--tol-spec", tol.spec, "Relative Perron-root bracket width")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-class", tol.cls, "Band around 1 for growth classification")
      ->check(CLI::PositiveNumber);

  std::string path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Growth rate, R0, trichotomy and structure");
  analyze_cmd->add_option("file", path, "Model file")->required();

  bool stationary = false;
  std::optional<double> target;
  auto* scale_cmd = app.add_subcommand("scale", "Rescale fertility to reach a growth rate");
  scale_cmd->add_option("file", path, "Model file")->required();
  auto* mode = scale_cmd->add_option_group("mode", "Exactly one of");
  mode->add_flag("--stationary", stationary, "Divide F by R0");
  mode->add_option("--target-growth", target, "Divide F by q(s) to reach growth rate s");
  mode->require_option(1);

  std::string x0_arg, out_path, summary_path;
  long steps = 0;
  bool normalize = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Iterate x_k = P x_{k-1} and write CSV");
  sim_cmd->add_option("file", path, "Model file")->required();
  sim_cmd->add_option("--x0", x0_arg, "Initial population: comma list or one-column file")
      ->required();
  sim_cmd->add_option("--steps", steps, "Number of steps")->required()->check(CLI::NonNegativeNumber);
  sim_cmd->add_flag("--normalize", normalize, "Divide step k by r^k");
  sim_cmd->add_option("--out", out_path, "CSV output file (default: stdout)");
  sim_cmd->add_option("--summary", summary_path, "Summary JSON file (default: stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(path, tol, out);
    if (*scale_cmd) return cmd_scale(path, stationary, target, tol, out);
    return cmd_simulate(path, x0_arg, steps, normalize, out_path, summary_path, tol, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const StructureError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitNumericFailure;
  }
}

}  // namespace popdyn
