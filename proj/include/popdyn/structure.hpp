#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace popdyn {

/// Adjacency lists of successors. Vertex j has an edge to i when the
/// matrix entry (i, j) is positive: mass in class j moves to class i.
using Digraph = std::vector<std::vector<int>>;

template <typename Derived>
Digraph positivity_digraph(const Eigen::MatrixBase<Derived>& m,
                           typename Derived::Scalar threshold = 0) {
  const auto n = static_cast<int>(m.rows());
  Digraph g(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (m(i, j) > threshold) g[j].push_back(i);
  return g;
}

/// Strongly connected components in topological order of the
/// condensation: every edge between two components runs from an earlier
/// component to a later one. Indices inside a component are sorted.
std::vector<std::vector<int>> strong_components(const Digraph& g);

/// True when the component is a single vertex without a self-loop.
bool is_trivial_component(const Digraph& g, const std::vector<int>& component);

/// Period of a strongly connected component: the gcd of the lengths of all
/// its cycles. Computed from BFS levels as gcd over internal edges u->v of
/// level(u) + 1 - level(v). Returns 0 for a trivial component.
int component_period(const Digraph& g, const std::vector<int>& component);

struct StructureReport {
  std::vector<std::vector<int>> components;
  bool irreducible = false;
  /// Present only when irreducible.
  std::optional<int> imprimitivity_index;
  bool primitive = false;

  bool operator==(const StructureReport&) const = default;
};

StructureReport analyze_digraph(const Digraph& g);

template <typename Derived>
StructureReport analyze_structure(const Eigen::MatrixBase<Derived>& m,
                                  typename Derived::Scalar threshold = 0) {
  return analyze_digraph(positivity_digraph(m, threshold));
}

/// Block form of a next generation matrix Q = F (I - T)^-1 after moving
/// its nonzero rows to the front:
///
///     Q = [ Q11 Q12 ]
///         [  0   0  ]
struct QPatternReport {
  /// permutation[k] is the original index placed at position k.
  std::vector<int> permutation;
  std::vector<int> q11_indices;
  std::vector<int> zero_rows;
  bool q_irreducible = false;

  bool operator==(const QPatternReport&) const = default;
};

/// Extracts the block pattern of Q and checks the laws it must obey when
/// T + F is irreducible: zero rows of Q are exactly the zero rows of F,
/// Q11 is irreducible, every column of [Q11 Q12] has a positive entry, and
/// Q is irreducible iff F has no zero row. A violated law raises
/// ConsistencyError. Entries of Q at or below `relative_threshold` times
/// its largest entry count as zero.
QPatternReport next_gen_pattern(const Eigen::MatrixXd& fertility,
                                const Eigen::MatrixXd& next_gen,
                                double relative_threshold = 1e-12);

}  // namespace popdyn
