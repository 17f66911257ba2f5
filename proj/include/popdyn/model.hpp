#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "popdyn/matrix_core.hpp"
#include "popdyn/structure.hpp"
#include "popdyn/tolerances.hpp"

namespace popdyn {

/// A validated standard matrix model x_k = (T + F) x_{k-1}.
///
/// T holds survival/transition fractions, F holds newborns per individual
/// per step. Construction enforces nonnegativity, F != 0 and the mortality
/// condition rho(T) < 1. Column sums of T above 1 are allowed and only
/// recorded as warnings.
class PopulationModel {
 public:
  const Eigen::MatrixXd& transition() const noexcept { return transition_; }
  const Eigen::MatrixXd& fertility() const noexcept { return fertility_; }
  Eigen::MatrixXd projection() const { return transition_ + fertility_; }
  Eigen::Index size() const noexcept { return transition_.rows(); }
  double transition_radius() const noexcept { return transition_radius_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  friend PopulationModel validate_model(Eigen::MatrixXd, Eigen::MatrixXd, const Tolerances&);
  PopulationModel() = default;

  Eigen::MatrixXd transition_;
  Eigen::MatrixXd fertility_;
  double transition_radius_ = 0;
  std::vector<std::string> warnings_;
};

PopulationModel validate_model(Eigen::MatrixXd transition, Eigen::MatrixXd fertility,
                               const Tolerances& tol = {});

/// Q = F (I - T)^-1.
Eigen::MatrixXd next_generation_matrix(const PopulationModel& m, const Tolerances& tol = {});

enum class Trichotomy { Stationary, Growing, Declining };

const char* to_string(Trichotomy t) noexcept;

/// Places (r, R0) in one branch of r = R0 = 1 | 1 < r <= R0 | R0 <= r < 1.
/// With `strict` the inequalities must hold strictly and R0 > 0.
/// Throws ConsistencyError when no branch fits.
Trichotomy classify_growth(double r, double r0, bool strict, const Tolerances& tol = {});

struct AnalysisReport {
  double r = 0;
  double r0 = 0;
  Trichotomy trichotomy = Trichotomy::Stationary;
  /// True when the strict form of the trichotomy applies: P irreducible
  /// and T nonzero.
  bool strict = false;
  StructureReport structure;
  /// Present when P is irreducible.
  std::optional<QPatternReport> q_pattern;
  /// |rho(T + F/R0) - 1|, present when R0 > 0.
  std::optional<double> stability_residual;
  std::vector<std::string> warnings;
};

AnalysisReport analyze(const PopulationModel& m, const Tolerances& tol = {});

/// The model (T, F/R0), whose growth rate is 1.
PopulationModel stabilizing_scale(const PopulationModel& m, const Tolerances& tol = {});

/// q(s) = rho(F (I - T/s)^-1) / s, defined for s > rho(T).
double growth_scaling_factor(const PopulationModel& m, double s, const Tolerances& tol = {});

struct TargetScaling {
  double q = 0;
  PopulationModel scaled;
  double r0_scaled = 0;
  double achieved_growth = 0;
  /// Right Perron vector of T + F/q, entries summing to 1.
  Eigen::VectorXd stable_population;
};

/// Divides F by q(s) so the growth rate becomes s. Needs P irreducible.
TargetScaling target_growth_scale(const PopulationModel& m, double s, const Tolerances& tol = {});

/// Whether R0 > 0. Irreducible models answer from the block pattern of Q;
/// otherwise searches a = 1, 2, 4, ..., 2^32 for rho(T + aF) > rho(T).
bool r0_positive(const PopulationModel& m, const Tolerances& tol = {});

}  // namespace popdyn
