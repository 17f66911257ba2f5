#include "popdyn/model.hpp"

#include <cmath>
#include <sstream>

#include "popdyn/errors.hpp"

namespace popdyn {

PopulationModel validate_model(Eigen::MatrixXd transition, Eigen::MatrixXd fertility,
                               const Tolerances& tol) {
  require_nonnegative(transition, "transition matrix T");
  require_nonnegative(fertility, "fertility matrix F");
  if (transition.rows() != fertility.rows())
    throw ValidationError("T and F have different orders (" + std::to_string(transition.rows()) +
                          " vs " + std::to_string(fertility.rows()) + ")");
  if ((fertility.array() == 0.0).all()) throw ValidationError("fertility matrix is zero");

  PopulationModel m;
  m.transition_radius_ = spectral_radius(transition, tol);
  if (m.transition_radius_ >= 1.0 - tol.spec) {
    std::ostringstream msg;
    msg << "mortality condition violated: rho(T) >= 1 (rho(T) = " << m.transition_radius_ << ")";
    throw ValidationError(msg.str());
  }
  const Eigen::RowVectorXd column_sums = transition.colwise().sum();
  for (Eigen::Index j = 0; j < column_sums.size(); ++j) {
    if (column_sums(j) > 1.0) {
      std::ostringstream msg;
      msg << "column " << j + 1 << " of T sums to " << column_sums(j) << " > 1";
      m.warnings_.push_back(msg.str());
    }
  }
  m.transition_ = std::move(transition);
  m.fertility_ = std::move(fertility);
  return m;
}

Eigen::MatrixXd next_generation_matrix(const PopulationModel& m, const Tolerances& tol) {
  return m.fertility() * resolvent_inverse(m.transition(), tol);
}

const char* to_string(Trichotomy t) noexcept {
  switch (t) {
    case Trichotomy::Stationary:
      return "Stationary";
    case Trichotomy::Growing:
      return "Growing";
    case Trichotomy::Declining:
      return "Declining";
  }
  return "?";
}

Trichotomy classify_growth(double r, double r0, bool strict, const Tolerances& tol) {
  auto fail = [&](const char* what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " (r = " << r << ", R0 = " << r0 << ")";
    throw ConsistencyError(msg.str());
  };
  if (std::abs(r - 1) <= tol.cls && std::abs(r0 - 1) <= tol.cls) return Trichotomy::Stationary;
  if (r > 1) {
    if (r > r0 + tol.cls) fail("growing model with r > R0");
    if (strict && !(r < r0)) fail("strict ordering 1 < r < R0 violated");
    return Trichotomy::Growing;
  }
  if (r0 > r + tol.cls) fail("declining model with R0 > r");
  if (strict && !(r0 < r && r0 > 0)) fail("strict ordering 0 < R0 < r < 1 violated");
  return Trichotomy::Declining;
}

namespace {

bool has_nonzero(const Eigen::MatrixXd& m) { return (m.array() != 0.0).any(); }

}  // namespace

AnalysisReport analyze(const PopulationModel& m, const Tolerances& tol) {
  const Eigen::MatrixXd p = m.projection();
  const Eigen::MatrixXd q = next_generation_matrix(m, tol);

  AnalysisReport report;
  report.r = spectral_radius(p, tol);
  report.r0 = spectral_radius(q, tol);
  report.structure = analyze_structure(p);
  report.strict = report.structure.irreducible && has_nonzero(m.transition());
  report.warnings = m.warnings();

  if (report.structure.irreducible) {
    if (report.r0 <= tol.cls)
      throw ConsistencyError("irreducible model has R0 = 0; Q must have a nontrivial irreducible block");
    report.q_pattern = next_gen_pattern(m.fertility(), q, tol.pattern);
  }
  if (report.r0 > tol.cls) {
    const double rho = spectral_radius(Eigen::MatrixXd(m.transition() + m.fertility() / report.r0), tol);
    report.stability_residual = std::abs(rho - 1.0);
    if (*report.stability_residual > tol.stab) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "rho(T + F/R0) = " << rho << " differs from 1";
      throw ConsistencyError(msg.str());
    }
  }
  report.trichotomy = classify_growth(report.r, report.r0, report.strict, tol);
  return report;
}

PopulationModel stabilizing_scale(const PopulationModel& m, const Tolerances& tol) {
  const double r0 = spectral_radius(next_generation_matrix(m, tol), tol);
  if (r0 <= tol.cls)
    throw ValidationError("net reproductive rate is zero; no fertility scaling reaches growth rate 1");
  PopulationModel scaled = validate_model(m.transition(), m.fertility() / r0, tol);
  const double achieved = spectral_radius(scaled.projection(), tol);
  if (std::abs(achieved - 1.0) > tol.stab) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "stabilized model has growth rate " << achieved << " instead of 1";
    throw ConsistencyError(msg.str());
  }
  return scaled;
}

double growth_scaling_factor(const PopulationModel& m, double s, const Tolerances& tol) {
  if (!(s > m.transition_radius() + tol.spec) || !(s > 0)) {
    std::ostringstream msg;
    msg << "target below rho(T): growth rate " << s << " must exceed rho(T) = "
        << m.transition_radius() << " and 0";
    throw ValidationError(msg.str());
  }
  const Eigen::MatrixXd scaled_transition = m.transition() / s;
  const Eigen::MatrixXd qs = m.fertility() * resolvent_inverse(scaled_transition, tol);
  return spectral_radius(qs, tol) / s;
}

TargetScaling target_growth_scale(const PopulationModel& m, double s, const Tolerances& tol) {
  if (!analyze_structure(m.projection()).irreducible)
    throw StructureError("target growth scaling needs an irreducible projection matrix");
  const double q = growth_scaling_factor(m, s, tol);
  if (!(q > 0)) throw ConsistencyError("q(s) is not positive for an irreducible model");

  PopulationModel scaled = validate_model(m.transition(), m.fertility() / q, tol);
  const auto pair = perron_pair(scaled.projection(), tol);
  if (std::abs(pair.rho - s) > tol.stab * std::max(1.0, s)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "scaled model has growth rate " << pair.rho << " instead of " << s;
    throw ConsistencyError(msg.str());
  }
  const double r0 = spectral_radius(next_generation_matrix(m, tol), tol);
  const double r0_scaled = r0 / q;
  classify_growth(s, r0_scaled, has_nonzero(m.transition()), tol);

  return TargetScaling{q, std::move(scaled), r0_scaled, pair.rho, pair.right};
}

bool r0_positive(const PopulationModel& m, const Tolerances& tol) {
  const Eigen::MatrixXd q = next_generation_matrix(m, tol);
  if (analyze_structure(m.projection()).irreducible) {
    const auto pattern = next_gen_pattern(m.fertility(), q, tol.pattern);
    return !pattern.q11_indices.empty();
  }

  const double base = m.transition_radius();
  bool found = false;
  double a = 1.0;
  for (int k = 0; k <= 32 && !found; ++k, a *= 2.0) {
    const Eigen::MatrixXd perturbed = m.transition() + a * m.fertility();
    found = spectral_radius(perturbed, tol) > base + tol.spec * std::max(1.0, base);
  }
  const double r0 = spectral_radius(q, tol);
  if (found && !(r0 > 0))
    throw ConsistencyError("rho(T + aF) exceeds rho(T) but rho(Q) = 0");
  if (!found && r0 > tol.cls) {
    std::ostringstream msg;
    msg << "no a <= 2^32 raises rho(T + aF) although rho(Q) = " << r0;
    throw ConsistencyError(msg.str());
  }
  return found;
}

}  // namespace popdyn
