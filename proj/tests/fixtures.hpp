#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace fixture {

/// Plant life cycle with vegetative and seed reproduction, five classes.
inline Eigen::MatrixXd plant_transition() {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(5, 5);
  t(1, 0) = 1;
  t(2, 0) = 1;
  t(3, 1) = 1;
  t(3, 2) = 1;
  t(4, 3) = 1;
  return t / 2;
}

inline Eigen::MatrixXd plant_fertility() {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(5, 5);
  f(0, 4) = 1;
  f(2, 3) = 1;
  return f / 2;
}

inline Eigen::MatrixXd plant_next_generation() {
  Eigen::MatrixXd q(5, 5);
  q << 1, 1, 1, 2, 4,  //
      0, 0, 0, 0, 0,   //
      2, 2, 2, 4, 0,   //
      0, 0, 0, 0, 0,   //
      0, 0, 0, 0, 0;
  return q / 8;
}

inline Eigen::VectorXd plant_stable_population() {
  const double r2 = std::sqrt(2.0);
  Eigen::VectorXd u(5);
  u << r2, 1, 3, 2 * r2, 2;
  return u;
}

/// Stable population of T + F/q(s).
inline Eigen::VectorXd plant_stable_population_at(double s) {
  Eigen::VectorXd u(5);
  u << 4 * std::pow(s, 3), 2 * s * s, 2 * s * s + 8 * std::pow(s, 4), 2 * s + 4 * std::pow(s, 3),
      1 + 2 * s * s;
  return u;
}

inline double plant_q(double s) { return (1 + 2 * s * s) / (8 * std::pow(s, 4)); }

inline Eigen::MatrixXd cyclic3() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
  p(1, 0) = 1;
  p(2, 1) = 1;
  p(0, 2) = 1;
  return p;
}

inline Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

/// Sum-normalized copy.
inline Eigen::VectorXd normalized(const Eigen::VectorXd& v) { return v / v.sum(); }

}  // namespace fixture
