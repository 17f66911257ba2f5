#pragma once

#include <Eigen/Dense>

#include "popdyn/model.hpp"

namespace popdyn {

/// Age-structured model: survival t_i from class i to i+1 on the first
/// subdiagonal of T, fertility f_j in the first row of F.
class LeslieModel {
 public:
  /// survival has n-1 entries in (0, 1]; fertility has n entries >= 0, not
  /// all zero.
  LeslieModel(Eigen::VectorXd survival, Eigen::VectorXd fertility);

  const Eigen::VectorXd& survival() const noexcept { return survival_; }
  const Eigen::VectorXd& fertility() const noexcept { return fertility_; }
  Eigen::Index size() const noexcept { return fertility_.size(); }

  /// Coefficients c_i = f_i t_1 ... t_{i-1} of q(s) = sum_i c_i s^-i.
  Eigen::VectorXd lifetime_coefficients() const;

 private:
  Eigen::VectorXd survival_;
  Eigen::VectorXd fertility_;
};

PopulationModel assemble(const LeslieModel& l, const Tolerances& tol = {});

/// q(s) = f_1/s + f_2 t_1/s^2 + ... + f_n t_{n-1}...t_1/s^n, by Horner in 1/s.
double q_poly_eval(const LeslieModel& l, double s);

/// Expected offspring per newborn over its lifetime, q(1).
double leslie_r0(const LeslieModel& l);

/// The unique positive root of q(r) = 1, which is rho(T + F).
double leslie_growth_rate(const LeslieModel& l);

}  // namespace popdyn
