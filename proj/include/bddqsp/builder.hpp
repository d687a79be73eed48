#pragma once

#include "bddqsp/diagram.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace bddqsp {

/// Hash-consing constructor for unweighted diagrams. `make` never creates a
/// redundant node and returns the existing node for a repeated
/// (var, low, high) triple, so every diagram it builds is reduced.
class DiagramBuilder {
public:
  explicit DiagramBuilder(int num_vars);

  int num_vars() const noexcept { return num_vars_; }
  NodeId zero() const noexcept { return node_id(0); }
  NodeId one() const noexcept { return node_id(1); }
  NodeId constant(bool value) const noexcept { return value ? one() : zero(); }

  NodeId make(int var, NodeId low, NodeId high);

  std::size_t internal_count() const noexcept { return nodes_.size() - 2; }
  /// Variables tested in the sub-diagram rooted at `id`.
  VarSet support(NodeId id) const { return support_[index_of(id)]; }
  const Node &node(NodeId id) const { return nodes_[index_of(id)]; }

  /// Extracts the sub-diagram reachable from `root`. Ids are renumbered:
  /// reachable terminals first (0-terminal before 1-terminal), then internal
  /// nodes in breadth-first order from the root, 0-edge before 1-edge.
  Diagram finish(NodeId root) const;

private:
  int num_vars_;
  std::vector<Node> nodes_;
  std::vector<VarSet> support_;
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, NodeId> unique_;
};

} // namespace bddqsp
