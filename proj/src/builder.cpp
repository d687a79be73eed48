#include "bddqsp/builder.hpp"

#include "bddqsp/errors.hpp"

#include <deque>

namespace bddqsp {

DiagramBuilder::DiagramBuilder(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > kMaxVars)
    throw Error("variable count out of range");
  nodes_.push_back(Node::terminal(false));
  nodes_.push_back(Node::terminal(true));
  support_.assign(2, 0);
}

NodeId DiagramBuilder::make(int var, NodeId low, NodeId high) {
  if (var < 1 || var > num_vars_)
    throw Error("variable x" + std::to_string(var) + " out of range");
  if (low == high)
    return low;
  const auto key = std::make_tuple(var, index_of(low), index_of(high));
  if (auto it = unique_.find(key); it != unique_.end())
    return it->second;
  const NodeId id = node_id(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back(Node::internal(var, {low, {}}, {high, {}}));
  support_.push_back(support_[index_of(low)] | support_[index_of(high)] |
                     var_bit(var));
  unique_.emplace(key, id);
  return id;
}

Diagram DiagramBuilder::finish(NodeId root) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeId> internal_order;
  std::deque<NodeId> queue{root};
  seen[index_of(root)] = true;
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    const Node &node = nodes_[index_of(id)];
    if (!node.is_internal())
      continue;
    internal_order.push_back(id);
    for (int b = 0; b < 2; ++b) {
      const NodeId h = node.head(b);
      if (!seen[index_of(h)]) {
        seen[index_of(h)] = true;
        queue.push_back(h);
      }
    }
  }

  std::vector<NodeId> renumber(nodes_.size());
  std::vector<Node> out;
  auto keep = [&](NodeId id) {
    renumber[index_of(id)] = node_id(static_cast<std::uint32_t>(out.size()));
    out.push_back(nodes_[index_of(id)]);
  };
  for (NodeId t : {zero(), one()})
    if (seen[index_of(t)])
      keep(t);
  for (NodeId id : internal_order)
    keep(id);
  for (Node &node : out)
    if (node.is_internal())
      for (auto &e : node.edges)
        e.head = renumber[index_of(e.head)];
  return Diagram(num_vars_, std::move(out), renumber[index_of(root)], false);
}

} // namespace bddqsp
