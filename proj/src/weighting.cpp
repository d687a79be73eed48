#include "bddqsp/weighting.hpp"

#include "bddqsp/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

namespace bddqsp {

namespace {

bool reaches_one(const Diagram &d) {
  const auto t1 = d.terminal1();
  if (!t1)
    return false;
  std::vector<bool> seen(d.size(), false);
  std::vector<NodeId> stack{d.root()};
  seen[index_of(d.root())] = true;
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (id == *t1)
      return true;
    const Node &node = d.node(id);
    if (!node.is_internal())
      continue;
    for (int b = 0; b < 2; ++b)
      if (!seen[index_of(node.head(b))]) {
        seen[index_of(node.head(b))] = true;
        stack.push_back(node.head(b));
      }
  }
  return false;
}

} // namespace

WeightingResult uniform_weights(const Diagram &d) {
  require_usable(d);
  if (!reaches_one(d))
    throw Unsatisfiable("the diagram has no satisfying input");

  const std::size_t size = d.size();
  const VarSet everything = all_vars(d.num_vars());

  std::vector<std::vector<NodeId>> tails(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    const Node &node = d.nodes()[i];
    if (!node.is_internal())
      continue;
    for (int b = 0; b < 2; ++b)
      tails[index_of(node.head(b))].push_back(node_id(i));
  }
  for (auto &list : tails)
    list.erase(std::unique(list.begin(), list.end()), list.end());

  WeightingResult result;
  result.diagram = d;
  result.diagram.set_weighted(true);
  result.unassigned.assign(size, 0);

  // W(u) = |w0(u)|^2 + |w1(u)|^2, kept both as a double and as an exact count.
  std::vector<double> norm(size, 0.0);
  std::vector<std::uint64_t> exact(size, 0);
  std::vector<bool> known(size, false);
  for (std::uint32_t i = 0; i < size; ++i) {
    const NodeKind kind = d.nodes()[i].kind;
    if (kind == NodeKind::internal)
      continue;
    known[i] = true;
    result.unassigned[i] = everything;
    if (kind == NodeKind::terminal1) {
      norm[i] = 1.0;
      exact[i] = 1;
    }
  }

  std::uint64_t queries = 0;
  std::deque<NodeId> queue;
  auto enqueue = [&](NodeId id) {
    queue.push_back(id);
    ++queries;
  };
  enqueue(*d.terminal1());

  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    ++queries;
    for (NodeId u : tails[index_of(v)]) {
      ++queries;
      const Node &node = d.node(u);
      if (known[index_of(u)] || !known[index_of(node.head(0))] ||
          !known[index_of(node.head(1))])
        continue;
      enqueue(u);
      queries += 2;
      const VarSet common = result.unassigned[index_of(node.head(0))] &
                            result.unassigned[index_of(node.head(1))];
      std::uint64_t count = 0;
      for (int b = 0; b < 2; ++b) {
        const auto h = index_of(node.head(b));
        const int skipped = std::popcount(result.unassigned[h] & ~common);
        const double w = std::sqrt(norm[h] * std::ldexp(1.0, skipped));
        result.diagram.set_weight(u, b, Weight{w, 0.0});
        count += exact[h] << skipped;
      }
      const auto ui = index_of(u);
      exact[ui] = count;
      norm[ui] = static_cast<double>(count);
      result.unassigned[ui] = common & ~var_bit(node.var);
      known[ui] = true;
    }
  }

  for (std::uint32_t i = 0; i < size; ++i)
    if (!known[i])
      throw InvalidDiagram("node " + std::to_string(i) +
                           " has no path to the 1-terminal");

  const auto r = index_of(d.root());
  const int free_at_root = std::popcount(result.unassigned[r]);
  result.model_count = exact[r] << free_at_root;
  double root_norm = 1.0;
  if (d.node(d.root()).is_internal()) {
    const Node &root = result.diagram.node(d.root());
    root_norm = std::norm(root.weight(0)) + std::norm(root.weight(1));
  }
  const double from_weights = std::ldexp(root_norm, free_at_root);
  const double expected = static_cast<double>(result.model_count);
  if (std::abs(from_weights - expected) > 1e-6 * std::max(1.0, expected))
    throw Error("weight propagation drifted: root weights give " +
                std::to_string(from_weights) + ", exact count is " +
                std::to_string(result.model_count));
  result.query_count = queries;
  return result;
}

std::uint64_t model_count(const Diagram &d) {
  require_usable(d);
  if (!reaches_one(d))
    return 0;
  return uniform_weights(d).model_count;
}

} // namespace bddqsp
