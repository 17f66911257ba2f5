#include "popdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "popdyn/errors.hpp"

namespace popdyn {

namespace {

constexpr double kOverflowGuard = 1e300;
constexpr int kSettledWindow = 3;

void require_population(const PopulationModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.size())
    throw ValidationError("population vector has length " + std::to_string(x.size()) +
                          ", model has " + std::to_string(m.size()) + " classes");
  if (!x.allFinite() || (x.array() < 0.0).any())
    throw ValidationError("population vector must be finite and nonnegative");
  if ((x.array() == 0.0).all()) throw ValidationError("population vector is zero");
}

double inf_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

/// Applies `step` until kSettledWindow consecutive updates move the vector
/// by at most tol.dyn (relative to max(1, |y|)).
template <typename Step>
Eigen::VectorXd settle(Eigen::VectorXd y, Step step, const Tolerances& tol, long& iterations) {
  int agreeing = 0;
  for (iterations = 0; iterations < tol.max_steps; ++iterations) {
    Eigen::VectorXd next = step(y);
    const double moved = inf_norm(next - y);
    const double scale = std::max(1.0, inf_norm(y));
    y = std::move(next);
    if (!y.allFinite()) throw NumericError("normalized trajectory became non-finite");
    agreeing = moved <= tol.dyn * scale ? agreeing + 1 : 0;
    if (agreeing >= kSettledWindow) return y;
  }
  throw NumericError("normalized trajectory did not settle within " +
                     std::to_string(tol.max_steps) + " steps");
}

}  // namespace

const char* to_string(Fate f) noexcept {
  switch (f) {
    case Fate::Extinct:
      return "Extinct";
    case Fate::Finite:
      return "Finite";
    case Fate::Unbounded:
      return "Unbounded";
  }
  return "?";
}

const char* to_string(PopulationKind k) noexcept {
  switch (k) {
    case PopulationKind::Stable:
      return "Stable";
    case PopulationKind::Stationary:
      return "Stationary";
    case PopulationKind::Neither:
      return "Neither";
  }
  return "?";
}

Trajectory iterate(const PopulationModel& m, const Eigen::VectorXd& x0, long steps, bool normalize,
                   const Tolerances& tol) {
  require_population(m, x0);
  if (steps < 0) throw ValidationError("step count must be >= 0");
  const Eigen::MatrixXd p = m.projection();

  Trajectory traj;
  traj.normalized = normalize;
  if (normalize) {
    traj.growth_rate = spectral_radius(p, tol);
    if (traj.growth_rate <= tol.spec)
      throw ValidationError("cannot normalize by r^k: growth rate is zero");
  }
  const double divisor = normalize ? traj.growth_rate : 1.0;

  traj.steps.reserve(static_cast<std::size_t>(steps) + 1);
  Eigen::VectorXd x = x0;
  traj.steps.push_back({0, x, x.sum()});
  for (long k = 1; k <= steps; ++k) {
    x = p * x / divisor;
    if (!x.allFinite() || x.maxCoeff() > kOverflowGuard)
      throw NumericError("population overflowed at step " + std::to_string(k) +
                         "; use normalized mode for long horizons");
    traj.steps.push_back({k, x, x.sum()});
  }
  return traj;
}

EventualLimit eventual_limit(const PopulationModel& m, const Eigen::VectorXd& x0,
                             const Tolerances& tol) {
  require_population(m, x0);
  const Eigen::MatrixXd p = m.projection();
  if (!analyze_structure(p).primitive)
    throw StructureError("projection matrix is not primitive; use periodic limits");

  const auto pair = perron_pair(p, tol);
  EventualLimit out;
  out.growth_rate = pair.rho;
  out.limit = pair.left.dot(x0) * pair.right;
  const Eigen::MatrixXd normalized = p / pair.rho;
  out.iterated_limit = settle(
      x0, [&](const Eigen::VectorXd& y) { return Eigen::VectorXd(normalized * y); }, tol,
      out.iterations);

  const double gap = inf_norm(out.limit - out.iterated_limit);
  if (gap > 1e-6 * std::max(1.0, inf_norm(out.limit))) {
    std::ostringstream msg;
    msg << "iterated limit differs from (v'x0)u by " << gap;
    throw NumericError(msg.str());
  }
  if (pair.rho < 1.0 - tol.cls)
    out.fate = Fate::Extinct;
  else if (pair.rho > 1.0 + tol.cls)
    out.fate = Fate::Unbounded;
  else
    out.fate = Fate::Finite;
  return out;
}

PeriodicLimits periodic_limits(const PopulationModel& m, const Eigen::VectorXd& x0,
                               const Tolerances& tol) {
  require_population(m, x0);
  const Eigen::MatrixXd p = m.projection();
  const StructureReport structure = analyze_structure(p);
  if (!structure.irreducible)
    throw StructureError("long-run behaviour of a reducible model is not analyzed");

  PeriodicLimits out;
  out.period = *structure.imprimitivity_index;
  if (out.period == 1) {
    const EventualLimit single = eventual_limit(m, x0, tol);
    out.growth_rate = single.growth_rate;
    out.limits.push_back(single.limit);
    return out;
  }

  out.growth_rate = spectral_radius(p, tol);
  const Eigen::MatrixXd normalized = p / out.growth_rate;
  Eigen::MatrixXd cycle = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  for (int k = 0; k < out.period; ++k) cycle = normalized * cycle;

  Eigen::VectorXd start = x0;
  for (int i = 0; i < out.period; ++i) {
    long iterations = 0;
    out.limits.push_back(settle(
        start, [&](const Eigen::VectorXd& y) { return Eigen::VectorXd(cycle * y); }, tol,
        iterations));
    start = normalized * start;
  }
  const bool any_nonzero = std::any_of(out.limits.begin(), out.limits.end(),
                                       [](const Eigen::VectorXd& w) { return w.maxCoeff() > 0; });
  if (!any_nonzero) throw ConsistencyError("all periodic limits vanished for an irreducible model");
  return out;
}

PopulationClass classify_population(const PopulationModel& m, const Eigen::VectorXd& x,
                                    const Tolerances& tol) {
  require_population(m, x);
  const Eigen::MatrixXd p = m.projection();
  const Eigen::VectorXd px = p * x;

  PopulationClass out;
  if (analyze_structure(p).irreducible) {
    const auto pair = perron_pair(p, tol);
    out.lambda = pair.left.dot(px) / pair.left.dot(x);
  } else {
    std::vector<double> ratios;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) > 0) ratios.push_back(px(i) / x(i));
    const auto mid = ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2);
    std::nth_element(ratios.begin(), mid, ratios.end());
    out.lambda = *mid;
  }
  out.residual = inf_norm(px - out.lambda * x) / inf_norm(x);

  const bool stable = out.lambda > tol.spec && out.residual <= tol.dyn * std::max(1.0, out.lambda);
  if (!stable)
    out.kind = PopulationKind::Neither;
  else if (std::abs(out.lambda - 1.0) <= tol.cls)
    out.kind = PopulationKind::Stationary;
  else
    out.kind = PopulationKind::Stable;
  return out;
}

}  // namespace popdyn
