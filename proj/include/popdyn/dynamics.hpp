#pragma once

#include <vector>

#include <Eigen/Dense>

#include "popdyn/model.hpp"

namespace popdyn {

struct TrajectoryStep {
  long step = 0;
  Eigen::VectorXd x;
  /// Entry sum of x.
  double total = 0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  /// When set, record k holds x_k / r^k.
  bool normalized = false;
  /// r used for normalization (0 when not normalized).
  double growth_rate = 0;
};

/// Records x_0 .. x_k of x_k = P x_{k-1}. Unnormalized runs fail on
/// overflow; the normalized mode is the long-horizon path.
Trajectory iterate(const PopulationModel& m, const Eigen::VectorXd& x0, long steps, bool normalize,
                   const Tolerances& tol = {});

enum class Fate { Extinct, Finite, Unbounded };

const char* to_string(Fate f) noexcept;

struct EventualLimit {
  /// (v' x0) u from the Perron pair.
  Eigen::VectorXd limit;
  /// The same limit reached by iterating x_k / r^k.
  Eigen::VectorXd iterated_limit;
  long iterations = 0;
  double growth_rate = 0;
  Fate fate = Fate::Finite;
};

/// lim x_k / r^k for a primitive projection matrix.
EventualLimit eventual_limit(const PopulationModel& m, const Eigen::VectorXd& x0,
                             const Tolerances& tol = {});

struct PeriodicLimits {
  int period = 1;
  /// limits[i] = lim_k x_{kd+i} / r^{kd+i}.
  std::vector<Eigen::VectorXd> limits;
  double growth_rate = 0;
};

/// Subsequence limits for an irreducible projection matrix with
/// imprimitivity index d. For d = 1 this is the single eventual limit.
PeriodicLimits periodic_limits(const PopulationModel& m, const Eigen::VectorXd& x0,
                               const Tolerances& tol = {});

enum class PopulationKind { Stable, Stationary, Neither };

const char* to_string(PopulationKind k) noexcept;

struct PopulationClass {
  PopulationKind kind = PopulationKind::Neither;
  /// Eigenvalue estimate the residual was measured against.
  double lambda = 0;
  /// ||P x - lambda x||_inf / ||x||_inf.
  double residual = 0;
};

PopulationClass classify_population(const PopulationModel& m, const Eigen::VectorXd& x,
                                    const Tolerances& tol = {});

}  // namespace popdyn
