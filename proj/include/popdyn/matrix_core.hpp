#pragma once

// Perron-Frobenius machinery for dense nonnegative matrices.
//
// The spectral radius of a nonnegative matrix is the largest Perron root
// over the diagonal blocks of its Frobenius normal form, so every routine
// here first condenses the positivity digraph into strongly connected
// components and then runs power iteration on each irreducible block.
// The iteration is on A + cI with c an upper estimate of rho(A); the shift
// makes the operator primitive, and c close to rho(A) damps the peripheral
// eigenvalues of an imprimitive block. Stopping uses the Collatz-Wielandt
// bracket min_i (Ax)_i/x_i <= rho(A) <= max_i (Ax)_i/x_i, which is a
// certificate rather than a heuristic.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "popdyn/errors.hpp"
#include "popdyn/structure.hpp"
#include "popdyn/tolerances.hpp"

namespace popdyn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SpectralPair {
  Scalar rho{};
  /// Right Perron vector, entries summing to 1.
  Vector<Scalar> right;
  /// Left Perron vector, scaled so that left . right == 1.
  Vector<Scalar> left;
};

template <typename Scalar>
struct Bracket {
  Scalar lo{};
  Scalar hi{};
};

template <typename Derived>
void require_nonnegative(const Eigen::MatrixBase<Derived>& m, std::string_view name) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw ValidationError(std::string(name) + " must be a non-empty square matrix");
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto v = m(i, j);
      if (!std::isfinite(static_cast<double>(v)))
        throw ValidationError(std::string(name) + " has a non-finite entry at (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (v < 0)
        throw ValidationError(std::string(name) + " has a negative entry at (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
}

/// Componentwise ratio bounds of A x against x. For irreducible A and
/// positive x they enclose rho(A), with equality exactly at the Perron
/// vector.
template <typename Derived, typename VecDerived>
Bracket<typename Derived::Scalar> wielandt_bracket(const Eigen::MatrixBase<Derived>& a,
                                                   const Eigen::MatrixBase<VecDerived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() != a.cols()) throw ValidationError("wielandt_bracket: vector length mismatch");
  if (!(x.array() > Scalar(0)).all())
    throw ValidationError("wielandt_bracket: test vector must be entrywise positive");
  const Vector<Scalar> ratios = (a * x).cwiseQuotient(x);
  return {ratios.minCoeff(), ratios.maxCoeff()};
}

namespace detail {

template <typename Scalar>
struct BlockIteration {
  Scalar rho{};
  Vector<Scalar> vector;
  long iterations = 0;
};

/// Power iteration on an irreducible block of order >= 2.
template <typename Scalar>
BlockIteration<Scalar> perron_block(const Matrix<Scalar>& a, const Tolerances& tol) {
  const auto n = a.rows();
  Vector<Scalar> x = Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n));
  Scalar shift = a.colwise().sum().maxCoeff();
  Scalar lo = 0, hi = shift;
  for (long it = 1; it <= tol.max_iterations; ++it) {
    const Vector<Scalar> y = a * x;
    const Vector<Scalar> ratios = y.cwiseQuotient(x);
    lo = ratios.minCoeff();
    hi = ratios.maxCoeff();
    if (hi - lo <= Scalar(tol.spec) * hi) return {(lo + hi) / 2, x / x.sum(), it};
    shift = hi;
    x = y + shift * x;
    x /= x.sum();
  }
  throw ConvergenceError("power iteration did not converge within " +
                             std::to_string(tol.max_iterations) + " iterations",
                         static_cast<double>(lo), static_cast<double>(hi), tol.max_iterations);
}

template <typename Derived>
Matrix<typename Derived::Scalar> principal_block(const Eigen::MatrixBase<Derived>& m,
                                                 const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix<typename Derived::Scalar> block(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) block(a, b) = m(idx[a], idx[b]);
  return block;
}

}  // namespace detail

/// rho(M) for a nonnegative matrix, to relative accuracy tol.spec.
template <typename Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& m,
                                         const Tolerances& tol = {}) {
  using Scalar = typename Derived::Scalar;
  require_nonnegative(m, "matrix");
  const Digraph g = positivity_digraph(m);
  Scalar rho = 0;
  for (const auto& component : strong_components(g)) {
    if (component.size() == 1) {
      rho = std::max(rho, Scalar(m(component.front(), component.front())));
      continue;
    }
    rho = std::max(rho, detail::perron_block(detail::principal_block(m, component), tol).rho);
  }
  return rho;
}

/// Perron root with right and left Perron vectors of an irreducible matrix.
template <typename Derived>
SpectralPair<typename Derived::Scalar> perron_pair(const Eigen::MatrixBase<Derived>& m,
                                                   const Tolerances& tol = {}) {
  using Scalar = typename Derived::Scalar;
  require_nonnegative(m, "matrix");
  if (!analyze_structure(m).irreducible)
    throw StructureError(
        "Perron vectors need an irreducible matrix; analyze each strongly connected "
        "component separately");
  const auto n = m.rows();
  if (n == 1) {
    return {Scalar(m(0, 0)), Vector<Scalar>::Ones(1), Vector<Scalar>::Ones(1)};
  }
  const Matrix<Scalar> a = m;
  auto right = detail::perron_block<Scalar>(a, tol);
  auto left = detail::perron_block<Scalar>(a.transpose(), tol);
  SpectralPair<Scalar> pair;
  pair.rho = right.rho;
  pair.right = right.vector / right.vector.sum();
  pair.left = left.vector / left.vector.dot(pair.right);
  return pair;
}

/// (I - T)^-1 for a nonnegative T with rho(T) < 1, by Gaussian elimination
/// with partial pivoting. The exact inverse is the nonnegative Neumann sum
/// I + T + T^2 + ..., so round-off negatives down to -tol.neg are clamped.
template <typename Derived>
Matrix<typename Derived::Scalar> resolvent_inverse(const Eigen::MatrixBase<Derived>& t,
                                                   const Tolerances& tol = {}) {
  using Scalar = typename Derived::Scalar;
  const Scalar rho = spectral_radius(t, tol);
  if (rho >= Scalar(1) - Scalar(tol.spec))
    throw ValidationError("mortality condition violated: rho(T) >= 1 (rho(T) = " +
                          std::to_string(static_cast<double>(rho)) + ")");
  const auto n = t.rows();
  const Matrix<Scalar> i_minus_t = Matrix<Scalar>::Identity(n, n) - t;
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(i_minus_t);
  const Scalar min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > Scalar(0)))
    throw NumericError("I - T is singular to working precision");
  Matrix<Scalar> inv = lu.inverse();
  if (!inv.allFinite()) throw NumericError("(I - T)^-1 has non-finite entries");
  if (inv.minCoeff() < -Scalar(tol.neg))
    throw NumericError("(I - T)^-1 has a negative entry beyond round-off");
  return inv.cwiseMax(Scalar(0));
}

}  // namespace popdyn
