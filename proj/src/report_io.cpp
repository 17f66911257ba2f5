#include "popdyn/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace popdyn {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

double read_number(const Json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(path, "number is not finite");
  return v;
}

Eigen::VectorXd read_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = read_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd read_square(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) field_error(row_path, "expected an array of numbers");
    if (static_cast<Eigen::Index>(row.size()) != n)
      field_error(row_path, "has " + std::to_string(row.size()) + " entries, expected " +
                                std::to_string(n) + " (matrix must be square)");
    for (Eigen::Index k = 0; k < n; ++k)
      m(i, k) = read_number(row[static_cast<std::size_t>(k)],
                            row_path + "[" + std::to_string(k) + "]");
  }
  return m;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + end, '\n'));
}

Json indices_to_json(const std::vector<int>& idx) {
  Json a = Json::array();
  for (int i : idx) a.push_back(i + 1);
  return a;
}

std::vector<int> indices_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array of indices");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long>() < 1) field_error(path, "expected 1-based indices");
    out.push_back(v.get<int>() - 1);
  }
  return out;
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) field_error(key, "missing field");
  return j.at(key);
}

bool read_bool(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_boolean()) field_error(key, "expected a boolean");
  return v.get<bool>();
}

Trichotomy trichotomy_from(const std::string& s) {
  if (s == "Stationary") return Trichotomy::Stationary;
  if (s == "Growing") return Trichotomy::Growing;
  if (s == "Declining") return Trichotomy::Declining;
  field_error("trichotomy", "unknown value '" + s + "'");
}

void round_numbers(Json& j) {
  if (j.is_number_float()) {
    j = round_significant(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_numbers(child);
  }
}

}  // namespace

ModelFile parse_model_file(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream msg;
    msg << "line " << line_of(text, e.byte) << ": malformed model file (" << e.what() << ")";
    throw ParseError(msg.str());
  }
  if (!j.is_object()) field_error("<root>", "expected an object");

  const bool general = j.contains("transition") || j.contains("fertility");
  const bool leslie = j.contains("leslie");
  if (general == leslie)
    field_error("<root>", "expected exactly one of {transition, fertility} or {leslie}");
  for (const auto& [key, value] : j.items())
    if (key != "transition" && key != "fertility" && key != "leslie")
      field_error(key, "unknown field");

  if (leslie) {
    const Json& l = j.at("leslie");
    if (!l.is_object()) field_error("leslie", "expected an object");
    if (!l.contains("survival")) field_error("leslie.survival", "missing field");
    if (!l.contains("fertility")) field_error("leslie.fertility", "missing field");
    return LeslieModel(read_vector(l.at("survival"), "leslie.survival"),
                       read_vector(l.at("fertility"), "leslie.fertility"));
  }
  if (!j.contains("transition")) field_error("transition", "missing field");
  if (!j.contains("fertility")) field_error("fertility", "missing field");
  GeneralModelSpec spec{read_square(j.at("transition"), "transition"),
                        read_square(j.at("fertility"), "fertility")};
  if (spec.transition.rows() != spec.fertility.rows())
    field_error("fertility", "order " + std::to_string(spec.fertility.rows()) +
                                 " differs from transition order " +
                                 std::to_string(spec.transition.rows()));
  return spec;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open model file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_model_file(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

PopulationModel to_model(const ModelFile& file, const Tolerances& tol) {
  if (const auto* l = std::get_if<LeslieModel>(&file)) return assemble(*l, tol);
  const auto& g = std::get<GeneralModelSpec>(file);
  return validate_model(g.transition, g.fertility, tol);
}

double round_significant(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string emit(const Json& j) {
  Json copy = j;
  round_numbers(copy);
  return copy.dump(2);
}

ReportPayload make_payload(const AnalysisReport& report, long n, const Tolerances& tol) {
  ReportPayload p;
  p.tol_spec = tol.spec;
  p.tol_class = tol.cls;
  p.tol_stab = tol.stab;
  p.n = n;
  p.r = report.r;
  p.r0 = report.r0;
  p.trichotomy = report.trichotomy;
  p.strict = report.strict;
  p.structure = report.structure;
  p.q_pattern = report.q_pattern;
  p.warnings = report.warnings;
  return p;
}

Json to_json(const ReportPayload& p) {
  Json j;
  j["tool"] = {{"name", p.tool}, {"version", p.version}};
  j["tolerances"] = {{"spec", p.tol_spec}, {"class", p.tol_class}, {"stab", p.tol_stab}};
  j["n"] = p.n;
  j["r"] = p.r;
  j["R0"] = p.r0;
  j["trichotomy"] = to_string(p.trichotomy);
  j["strict"] = p.strict;
  j["irreducible"] = p.structure.irreducible;
  j["primitive"] = p.structure.primitive;
  j["imprimitivity_index"] =
      p.structure.imprimitivity_index ? Json(*p.structure.imprimitivity_index) : Json(nullptr);
  Json components = Json::array();
  for (const auto& c : p.structure.components) components.push_back(indices_to_json(c));
  j["components"] = components;
  if (p.q_pattern) {
    j["q_pattern"] = {{"permutation", indices_to_json(p.q_pattern->permutation)},
                      {"q11_indices", indices_to_json(p.q_pattern->q11_indices)},
                      {"zero_rows", indices_to_json(p.q_pattern->zero_rows)},
                      {"q_irreducible", p.q_pattern->q_irreducible}};
  } else {
    j["q_pattern"] = nullptr;
  }
  if (p.leslie) j["leslie"] = {{"R0", p.leslie->r0}, {"growth_rate", p.leslie->growth_rate}};
  j["warnings"] = p.warnings;
  return j;
}

namespace {

ReportPayload read_payload(const Json& j) {
  ReportPayload p;
  const Json& tool = member(j, "tool");
  p.tool = member(tool, "name").get<std::string>();
  p.version = member(tool, "version").get<std::string>();
  const Json& tols = member(j, "tolerances");
  p.tol_spec = read_number(member(tols, "spec"), "tolerances.spec");
  p.tol_class = read_number(member(tols, "class"), "tolerances.class");
  p.tol_stab = read_number(member(tols, "stab"), "tolerances.stab");
  p.n = member(j, "n").get<long>();
  p.r = read_number(member(j, "r"), "r");
  p.r0 = read_number(member(j, "R0"), "R0");
  p.trichotomy = trichotomy_from(member(j, "trichotomy").get<std::string>());
  p.strict = read_bool(j, "strict");
  p.structure.irreducible = read_bool(j, "irreducible");
  p.structure.primitive = read_bool(j, "primitive");
  if (const Json& d = member(j, "imprimitivity_index"); !d.is_null())
    p.structure.imprimitivity_index = d.get<int>();
  for (const auto& c : member(j, "components"))
    p.structure.components.push_back(indices_from_json(c, "components"));
  if (const Json& q = member(j, "q_pattern"); !q.is_null()) {
    QPatternReport qp;
    qp.permutation = indices_from_json(member(q, "permutation"), "q_pattern.permutation");
    qp.q11_indices = indices_from_json(member(q, "q11_indices"), "q_pattern.q11_indices");
    qp.zero_rows = indices_from_json(member(q, "zero_rows"), "q_pattern.zero_rows");
    qp.q_irreducible = read_bool(q, "q_irreducible");
    p.q_pattern = qp;
  }
  if (j.contains("leslie")) {
    const Json& l = j.at("leslie");
    p.leslie = LeslieSummary{read_number(member(l, "R0"), "leslie.R0"),
                             read_number(member(l, "growth_rate"), "leslie.growth_rate")};
  }
  for (const auto& w : member(j, "warnings")) p.warnings.push_back(w.get<std::string>());
  return p;
}

}  // namespace

ReportPayload payload_from_json(const Json& j) {
  try {
    return read_payload(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report payload: ") + e.what());
  }
}

}  // namespace popdyn
