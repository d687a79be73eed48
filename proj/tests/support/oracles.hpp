#pragma once

// Brute-force reference computations used by the tests. Everything here
// works directly on the node table or on closed formulas and deliberately
// avoids the library's own evaluation, tracing and weighting code.

#include "bddqsp/diagram.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using bddqsp::Assignment;
using bddqsp::Diagram;
using bddqsp::Node;
using bddqsp::NodeId;
using bddqsp::NodeKind;

inline const Node &at(const Diagram &d, NodeId id) {
  return d.nodes()[bddqsp::index_of(id)];
}

inline bool bit(Assignment x, int var) { return (x >> (var - 1)) & 1U; }

/// Follows edges straight through the node table.
inline bool eval(const Diagram &d, Assignment x) {
  NodeId id = d.root();
  while (at(d, id).kind == NodeKind::internal)
    id = at(d, id).edges[bit(x, at(d, id).var) ? 1 : 0].head;
  return at(d, id).kind == NodeKind::terminal1;
}

inline std::uint64_t count(const Diagram &d) {
  std::uint64_t total = 0;
  for (Assignment x = 0; x < (Assignment{1} << d.num_vars()); ++x)
    total += eval(d, x) ? 1 : 0;
  return total;
}

/// Calls visit(tested_mask, values, terminal, weight_product, length) for every
/// root-to-terminal path; length counts the internal nodes on the path.
inline void for_each_path(
    const Diagram &d,
    const std::function<void(std::uint64_t, std::uint64_t, NodeKind,
                             std::complex<double>, int)> &visit) {
  std::function<void(NodeId, std::uint64_t, std::uint64_t, std::complex<double>,
                     int)>
      walk = [&](NodeId id, std::uint64_t mask, std::uint64_t values,
                 std::complex<double> product, int length) {
        const Node &node = at(d, id);
        if (node.kind != NodeKind::internal) {
          visit(mask, values, node.kind, product, length);
          return;
        }
        const double norm = std::sqrt(std::norm(node.edges[0].weight) +
                                      std::norm(node.edges[1].weight));
        const std::uint64_t b = std::uint64_t{1} << (node.var - 1);
        for (int k = 0; k < 2; ++k) {
          const std::complex<double> factor =
              d.weighted() ? node.edges[k].weight / norm : 1.0;
          walk(node.edges[k].head, mask | b, k ? (values | b) : values,
               product * factor, length + 1);
        }
      };
  walk(d.root(), 0, 0, 1.0, 0);
}

/// Amplitudes by path enumeration: each path to the 1-terminal contributes
/// its normalized weight product times 2^{-(untested variables)/2} to every
/// input consistent with it.
inline std::vector<std::complex<double>> path_amplitudes(const Diagram &d) {
  const int n = d.num_vars();
  std::vector<std::complex<double>> amps(std::size_t{1} << n);
  for_each_path(d, [&](std::uint64_t mask, std::uint64_t values, NodeKind kind,
                       std::complex<double> product, int length) {
    if (kind != NodeKind::terminal1)
      return;
    const double spread = std::pow(2.0, -(n - length) / 2.0);
    for (Assignment z = 0; z < amps.size(); ++z)
      if ((z & mask) == values)
        amps[z] = product * spread;
  });
  return amps;
}

/// Freeness by walking every path.
inline bool free_by_paths(const Diagram &d) {
  bool ok = true;
  std::function<void(NodeId, std::uint64_t)> walk = [&](NodeId id,
                                                        std::uint64_t seen) {
    const Node &node = at(d, id);
    if (node.kind != NodeKind::internal || !ok)
      return;
    const std::uint64_t b = std::uint64_t{1} << (node.var - 1);
    if (seen & b) {
      ok = false;
      return;
    }
    walk(node.edges[0].head, seen | b);
    walk(node.edges[1].head, seen | b);
  };
  walk(d.root(), 0);
  return ok;
}

inline double choose(int n, int k) {
  std::vector<std::vector<double>> pascal(n + 1);
  for (int r = 0; r <= n; ++r) {
    pascal[r].assign(r + 1, 1.0);
    for (int c = 1; c < r; ++c)
      pascal[r][c] = pascal[r - 1][c - 1] + pascal[r - 1][c];
  }
  return (k < 0 || k > n) ? 0.0 : pascal[n][k];
}

/// Normalized delta^{|x|} / C(n, |x|).
inline double binomial_amplitude(int n, double delta, Assignment x) {
  auto raw = [&](int w) { return std::pow(delta, w) / choose(n, w); };
  double norm = 0.0;
  for (int j = 0; j <= n; ++j)
    norm += choose(n, j) * raw(j) * raw(j);
  return raw(std::popcount(x)) / std::sqrt(norm);
}

/// S^i over the listed variables.
inline bool symmetric(Assignment x, const std::vector<int> &vars, int i) {
  int ones = 0;
  for (int v : vars)
    ones += bit(x, v) ? 1 : 0;
  return ones == i;
}

/// f1(A, B, C) = OR_i a_i (S^{i-1}(B, C) + S^{n+i}(B, C)).
inline bool f1(Assignment x, const std::vector<int> &a, const std::vector<int> &b,
               const std::vector<int> &c) {
  const int n = static_cast<int>(a.size());
  std::vector<int> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  for (int i = 1; i <= n; ++i)
    if (bit(x, a[i - 1]) &&
        (symmetric(x, bc, i - 1) || symmetric(x, bc, n + i)))
      return true;
  return false;
}

/// h over v = 1, w = 2, X = 3..n+2, Y = n+3..2n+2, Z = 2n+3..3n+2.
inline bool h(int n, Assignment x) {
  std::vector<int> xs, ys, zs;
  for (int i = 1; i <= n; ++i) {
    xs.push_back(2 + i);
    ys.push_back(2 + n + i);
    zs.push_back(2 + 2 * n + i);
  }
  const bool v = bit(x, 1), w = bit(x, 2);
  if (!v && !w)
    return f1(x, xs, ys, zs);
  if (!v && w)
    return f1(x, ys, zs, xs);
  if (v && !w)
    return f1(x, zs, xs, ys);
  return false;
}

/// Random ordered (natural order) BDD that is usually not reduced: internal
/// nodes pick children among terminals and nodes with a larger variable.
inline Diagram random_unreduced_bdd(std::mt19937_64 &rng, int n, int internals) {
  using bddqsp::Edge;
  std::vector<Node> nodes{Node::terminal(false), Node::terminal(true)};
  std::vector<int> vars;
  std::uniform_int_distribution<int> pick_var(1, n);
  for (int k = 0; k < internals; ++k)
    vars.push_back(pick_var(rng));
  std::sort(vars.rbegin(), vars.rend()); // deepest variables first
  for (int k = 0; k < internals; ++k) {
    std::vector<std::uint32_t> candidates{0, 1};
    for (std::uint32_t j = 2; j < nodes.size(); ++j)
      if (nodes[j].var > vars[k])
        candidates.push_back(j);
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    nodes.push_back(Node::internal(
        vars[k], Edge{bddqsp::node_id(candidates[pick(rng)]), {}},
        Edge{bddqsp::node_id(candidates[pick(rng)]), {}}));
  }
  // Root is the last node; drop nothing, so unreachable nodes may exist.
  return Diagram(n, std::move(nodes),
                 bddqsp::node_id(static_cast<std::uint32_t>(internals + 1)),
                 false);
}

} // namespace oracle
