#include "popdyn/structure.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "popdyn/errors.hpp"

namespace popdyn {

std::vector<std::vector<int>> strong_components(const Digraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  // Iterative Tarjan: each frame is (vertex, next successor position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < g[v].size()) {
        const int w = g[v][pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<int> component;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != done);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  // Tarjan closes sink components first.
  std::reverse(components.begin(), components.end());
  return components;
}

bool is_trivial_component(const Digraph& g, const std::vector<int>& component) {
  if (component.size() != 1) return false;
  const int v = component.front();
  return std::find(g[v].begin(), g[v].end(), v) == g[v].end();
}

int component_period(const Digraph& g, const std::vector<int>& component) {
  if (component.empty() || is_trivial_component(g, component)) return 0;
  const int n = static_cast<int>(g.size());
  std::vector<bool> member(n, false);
  for (int v : component) member[v] = true;

  std::vector<int> level(n, -1);
  std::queue<int> frontier;
  level[component.front()] = 0;
  frontier.push(component.front());
  int period = 0;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : g[u]) {
      if (!member[v]) continue;
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        frontier.push(v);
      } else {
        period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  // Tree edges contribute 0 to the gcd, so only non-tree edges were folded in.
  return period;
}

StructureReport analyze_digraph(const Digraph& g) {
  StructureReport report;
  report.components = strong_components(g);
  const std::size_t n = g.size();
  report.irreducible = report.components.size() == 1 && report.components.front().size() == n &&
                       !is_trivial_component(g, report.components.front());
  if (report.irreducible) {
    report.imprimitivity_index = component_period(g, report.components.front());
    report.primitive = *report.imprimitivity_index == 1;
  }
  return report;
}

namespace {

std::string index_list(const std::vector<int>& idx) {
  std::string s = "{";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k] + 1);
  }
  return s + "}";
}

}  // namespace

QPatternReport next_gen_pattern(const Eigen::MatrixXd& fertility, const Eigen::MatrixXd& next_gen,
                                double relative_threshold) {
  const auto n = next_gen.rows();
  if (fertility.rows() != n || fertility.cols() != n || next_gen.cols() != n)
    throw ValidationError("next_gen_pattern: F and Q must be square of the same order");

  const double scale = next_gen.cwiseAbs().maxCoeff();
  const double threshold = relative_threshold * scale;
  Eigen::MatrixXd q_pattern = (next_gen.array() > threshold).cast<double>().matrix();

  QPatternReport report;
  std::vector<int> f_zero_rows;
  for (int i = 0; i < n; ++i) {
    const bool q_zero = (q_pattern.row(i).array() == 0.0).all();
    if (q_zero)
      report.zero_rows.push_back(i);
    else
      report.q11_indices.push_back(i);
    if ((fertility.row(i).array() <= 0.0).all()) f_zero_rows.push_back(i);
  }
  report.permutation = report.q11_indices;
  report.permutation.insert(report.permutation.end(), report.zero_rows.begin(),
                            report.zero_rows.end());

  if (report.zero_rows != f_zero_rows)
    throw ConsistencyError("zero rows of Q " + index_list(report.zero_rows) +
                           " differ from zero rows of F " + index_list(f_zero_rows));
  if (report.q11_indices.empty()) throw ConsistencyError("next generation matrix is zero");

  const auto k = static_cast<Eigen::Index>(report.q11_indices.size());
  Eigen::MatrixXd q11(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      q11(a, b) = q_pattern(report.q11_indices[a], report.q11_indices[b]);
  if (!analyze_structure(q11).irreducible)
    throw ConsistencyError("leading block Q11 on rows " + index_list(report.q11_indices) +
                           " is not irreducible");

  for (int j = 0; j < n; ++j) {
    bool positive = false;
    for (int i : report.q11_indices) positive = positive || q_pattern(i, j) > 0;
    if (!positive)
      throw ConsistencyError("column " + std::to_string(j + 1) +
                             " of the nonzero-row block of Q has no positive entry");
  }

  report.q_irreducible = analyze_structure(q_pattern).irreducible;
  if (report.q_irreducible != f_zero_rows.empty())
    throw ConsistencyError("irreducibility of Q disagrees with the zero-row pattern of F");
  return report;
}

}  // namespace popdyn
