#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>
#include <json.hpp>

#include "popdyn/errors.hpp"
#include "popdyn/leslie.hpp"
#include "popdyn/model.hpp"

namespace popdyn {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "popdyn";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed model file. The message names the line (syntax errors) or the
/// field path (shape and type errors).
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct GeneralModelSpec {
  Eigen::MatrixXd transition;
  Eigen::MatrixXd fertility;
};

/// Either {"transition": [[..]], "fertility": [[..]]} or
/// {"leslie": {"survival": [..], "fertility": [..]}}.
using ModelFile = std::variant<GeneralModelSpec, LeslieModel>;

ModelFile parse_model_file(std::string_view text);
ModelFile read_model_file(const std::string& path);
PopulationModel to_model(const ModelFile& file, const Tolerances& tol = {});

/// Nearest double to the value printed with 9 significant digits.
double round_significant(double v);
/// The value with 9 significant digits, shortest form.
std::string format_number(double v);

/// Pretty-prints with every floating-point number rounded to 9 significant
/// digits, so output is reproducible byte for byte.
std::string emit(const Json& j);

struct LeslieSummary {
  double r0 = 0;
  double growth_rate = 0;
  bool operator==(const LeslieSummary&) const = default;
};

/// What `popdyn analyze` prints.
struct ReportPayload {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  double tol_spec = Tolerances{}.spec;
  double tol_class = Tolerances{}.cls;
  double tol_stab = Tolerances{}.stab;
  long n = 0;
  double r = 0;
  double r0 = 0;
  Trichotomy trichotomy = Trichotomy::Stationary;
  bool strict = false;
  StructureReport structure;
  std::optional<QPatternReport> q_pattern;
  std::optional<LeslieSummary> leslie;
  std::vector<std::string> warnings;

  bool operator==(const ReportPayload&) const = default;
};

ReportPayload make_payload(const AnalysisReport& report, long n, const Tolerances& tol);
Json to_json(const ReportPayload& p);
/// Inverse of to_json. Throws ParseError on a malformed payload.
ReportPayload payload_from_json(const Json& j);

}  // namespace popdyn
