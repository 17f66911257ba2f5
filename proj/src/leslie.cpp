#include "popdyn/leslie.hpp"

#include <cmath>
#include <string>

#include "popdyn/errors.hpp"

namespace popdyn {

LeslieModel::LeslieModel(Eigen::VectorXd survival, Eigen::VectorXd fertility)
    : survival_(std::move(survival)), fertility_(std::move(fertility)) {
  if (fertility_.size() < 1) throw ValidationError("Leslie fertility needs at least one class");
  if (survival_.size() != fertility_.size() - 1)
    throw ValidationError("Leslie survival must have " + std::to_string(fertility_.size() - 1) +
                          " entries, got " + std::to_string(survival_.size()));
  for (Eigen::Index i = 0; i < survival_.size(); ++i)
    if (!std::isfinite(survival_(i)) || !(survival_(i) > 0.0) || survival_(i) > 1.0)
      throw ValidationError("Leslie survival[" + std::to_string(i + 1) + "] must lie in (0, 1]");
  for (Eigen::Index i = 0; i < fertility_.size(); ++i)
    if (!std::isfinite(fertility_(i)) || fertility_(i) < 0.0)
      throw ValidationError("Leslie fertility[" + std::to_string(i + 1) + "] must be finite and >= 0");
  if (!(fertility_.sum() > 0.0)) throw ValidationError("fertility matrix is zero");
}

Eigen::VectorXd LeslieModel::lifetime_coefficients() const {
  Eigen::VectorXd c(fertility_.size());
  double survivorship = 1.0;
  for (Eigen::Index i = 0; i < fertility_.size(); ++i) {
    c(i) = fertility_(i) * survivorship;
    if (i < survival_.size()) survivorship *= survival_(i);
  }
  return c;
}

PopulationModel assemble(const LeslieModel& l, const Tolerances& tol) {
  const auto n = l.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) t(i + 1, i) = l.survival()(i);
  f.row(0) = l.fertility().transpose();
  return validate_model(std::move(t), std::move(f), tol);
}

double q_poly_eval(const LeslieModel& l, double s) {
  if (!(s > 0.0)) throw ValidationError("q(s) needs s > 0");
  const Eigen::VectorXd c = l.lifetime_coefficients();
  const double u = 1.0 / s;
  double acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = c(i) + u * acc;
  return u * acc;
}

double leslie_r0(const LeslieModel& l) { return q_poly_eval(l, 1.0); }

namespace {

double q_derivative(const Eigen::VectorXd& c, double s) {
  // d/ds sum_i c_i s^-(i+1) over zero-based i.
  const double u = 1.0 / s;
  double acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = double(i + 1) * c(i) + u * acc;
  return -u * u * acc;
}

}  // namespace

double leslie_growth_rate(const LeslieModel& l) {
  // q is strictly decreasing from +inf to 0 on (0, inf).
  double lo = 1e-8;
  double hi = 1.0;
  for (int k = 0; k < 2000 && q_poly_eval(l, lo) <= 1.0; ++k) lo *= 0.5;
  for (int k = 0; k < 2000 && q_poly_eval(l, hi) > 1.0; ++k) hi *= 2.0;

  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (q_poly_eval(l, mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  double r = 0.5 * (lo + hi);
  const Eigen::VectorXd c = l.lifetime_coefficients();
  for (int k = 0; k < 8; ++k) {
    const double residual = q_poly_eval(l, r) - 1.0;
    if (std::abs(residual) <= 1e-15) break;
    const double step = residual / q_derivative(c, r);
    const double next = r - step;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    r = next;
  }
  if (!(std::abs(q_poly_eval(l, r) - 1.0) <= 1e-12))
    throw NumericError("Euler-Lotka root did not reach |q(r) - 1| <= 1e-12");
  return r;
}

}  // namespace popdyn
