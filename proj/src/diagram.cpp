#include "bddqsp/diagram.hpp"

#include "bddqsp/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace bddqsp {

namespace {

std::string id_str(NodeId id) { return std::to_string(index_of(id)); }

// Iterative DFS over every node (not only the reachable ones). Returns the
// nodes in post-order (children before parents), or nullopt on a cycle.
// Assumes all heads are in range.
std::optional<std::vector<NodeId>> postorder_all(const Diagram &d,
                                                 NodeId *cycle_at = nullptr) {
  enum class Mark : std::uint8_t { white, grey, black };
  const auto nodes = d.nodes();
  std::vector<Mark> mark(nodes.size(), Mark::white);
  std::vector<NodeId> order;
  order.reserve(nodes.size());
  std::vector<std::pair<std::uint32_t, int>> stack;

  for (std::uint32_t start = 0; start < nodes.size(); ++start) {
    if (mark[start] != Mark::white)
      continue;
    stack.push_back({start, 0});
    mark[start] = Mark::grey;
    while (!stack.empty()) {
      auto &[u, next] = stack.back();
      const Node &node = nodes[u];
      if (node.is_internal() && next < 2) {
        const std::uint32_t child = index_of(node.head(next++));
        if (mark[child] == Mark::grey) {
          if (cycle_at)
            *cycle_at = node_id(u);
          return std::nullopt;
        }
        if (mark[child] == Mark::white) {
          mark[child] = Mark::grey;
          stack.push_back({child, 0});
        }
        continue;
      }
      mark[u] = Mark::black;
      order.push_back(node_id(u));
      stack.pop_back();
    }
  }
  return order;
}

std::vector<bool> reachable_from_root(const Diagram &d) {
  std::vector<bool> seen(d.size(), false);
  if (!d.contains(d.root()))
    return seen;
  std::vector<NodeId> stack{d.root()};
  seen[index_of(d.root())] = true;
  while (!stack.empty()) {
    const Node &node = d.node(stack.back());
    stack.pop_back();
    if (!node.is_internal())
      continue;
    for (int b = 0; b < 2; ++b) {
      const NodeId h = node.head(b);
      if (!seen[index_of(h)]) {
        seen[index_of(h)] = true;
        stack.push_back(h);
      }
    }
  }
  return seen;
}

double squared_norm(const Node &node) {
  return std::norm(node.weight(0)) + std::norm(node.weight(1));
}

bool same_weight(Weight a, Weight b) {
  return std::abs(a - b) <= kZeroWeightTolerance;
}

} // namespace

Assignment parse_bits(std::string_view text) {
  if (text.size() > 64)
    throw Error("bit string longer than 64 characters");
  Assignment x = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1')
      x |= Assignment{1} << i;
    else if (text[i] != '0')
      throw Error("bit string may only contain '0' and '1': " +
                  std::string(text));
  }
  return x;
}

std::string format_bits(Assignment x, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if ((x >> i) & 1U)
      s[static_cast<std::size_t>(i)] = '1';
  return s;
}

// ---------------------------------------------------------------------------

Diagram::Diagram(int num_vars, std::vector<Node> nodes, NodeId root,
                 bool weighted)
    : num_vars_(num_vars), nodes_(std::move(nodes)), root_(root),
      weighted_(weighted) {}

const Node &Diagram::node(NodeId id) const {
  if (!contains(id))
    throw InvalidDiagram("dangling node id " + id_str(id));
  return nodes_[index_of(id)];
}

std::optional<NodeId> Diagram::terminal0() const noexcept {
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::terminal0)
      return node_id(i);
  return std::nullopt;
}

std::optional<NodeId> Diagram::terminal1() const noexcept {
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::terminal1)
      return node_id(i);
  return std::nullopt;
}

std::size_t Diagram::internal_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const Node &n) { return n.is_internal(); }));
}

void Diagram::set_weight(NodeId id, int branch, Weight w) {
  if (!contains(id) || !nodes_[index_of(id)].is_internal())
    throw InvalidDiagram("cannot weight an edge of node " + id_str(id));
  nodes_[index_of(id)].edges[static_cast<std::size_t>(branch)].weight = w;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
  case ViolationKind::structure: return "structure";
  case ViolationKind::duplicate_terminal: return "duplicate terminal";
  case ViolationKind::cycle: return "cycle";
  case ViolationKind::root_indegree: return "root indegree";
  case ViolationKind::unreachable: return "unreachable";
  case ViolationKind::redundant_node: return "redundant node";
  case ViolationKind::equivalent_nodes: return "equivalent nodes";
  case ViolationKind::freeness: return "freeness";
  case ViolationKind::weight_into_terminal0: return "weight into 0-terminal";
  case ViolationKind::nonfinite_weight: return "non-finite weight";
  case ViolationKind::degenerate_node: return "degenerate node";
  case ViolationKind::empty_support: return "empty support";
  }
  return "unknown";
}

bool is_blocking(ViolationKind kind) noexcept {
  return kind != ViolationKind::redundant_node &&
         kind != ViolationKind::equivalent_nodes;
}

bool ValidationReport::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation &v) { return v.kind == kind; });
}

bool ValidationReport::usable() const noexcept {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation &v) { return is_blocking(v.kind); });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto &v : violations) {
    out << to_string(v.kind);
    if (v.node)
      out << " at node " << index_of(*v.node);
    out << ": " << v.message << '\n';
  }
  return out.str();
}

ValidationReport validate(const Diagram &d) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::optional<NodeId> at,
                 std::string message) {
    report.violations.push_back({kind, at, std::move(message)});
  };

  const auto nodes = d.nodes();
  const int n = d.num_vars();

  // Structural checks. Deeper checks need an in-range table.
  bool broken = false;
  if (n < 0 || n > kMaxVars) {
    add(ViolationKind::structure, std::nullopt,
        "variable count " + std::to_string(n) + " outside [0, " +
            std::to_string(kMaxVars) + "]");
    broken = true;
  }
  if (!d.contains(d.root())) {
    add(ViolationKind::structure, std::nullopt,
        "root id " + id_str(d.root()) + " is not a node");
    broken = true;
  }
  int terminal_counts[2] = {0, 0};
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    const Node &node = nodes[i];
    if (node.kind == NodeKind::terminal0)
      ++terminal_counts[0];
    if (node.kind == NodeKind::terminal1)
      ++terminal_counts[1];
    if (!node.is_internal())
      continue;
    if (node.var < 1 || node.var > n) {
      add(ViolationKind::structure, node_id(i),
          "variable index " + std::to_string(node.var) + " outside [1, " +
              std::to_string(n) + "]");
      broken = true;
    }
    for (int b = 0; b < 2; ++b) {
      if (!d.contains(node.head(b))) {
        add(ViolationKind::structure, node_id(i),
            "edge " + std::to_string(b) + " points to missing node " +
                id_str(node.head(b)));
        broken = true;
      }
    }
  }
  for (int t = 0; t < 2; ++t)
    if (terminal_counts[t] > 1)
      add(ViolationKind::duplicate_terminal, std::nullopt,
          std::to_string(terminal_counts[t]) + " nodes of kind terminal" +
              std::to_string(t));
  if (broken)
    return report;

  NodeId cycle_at{};
  const auto post = postorder_all(d, &cycle_at);
  if (!post) {
    add(ViolationKind::cycle, cycle_at, "directed cycle through this node");
    return report;
  }

  // Root indegree and reachability.
  std::vector<std::uint32_t> indegree(nodes.size(), 0);
  for (const Node &node : nodes)
    if (node.is_internal())
      for (int b = 0; b < 2; ++b)
        ++indegree[index_of(node.head(b))];
  if (indegree[index_of(d.root())] != 0)
    add(ViolationKind::root_indegree, d.root(),
        "root has " + std::to_string(indegree[index_of(d.root())]) +
            " incoming edges");
  const auto reach = reachable_from_root(d);
  for (std::uint32_t i = 0; i < nodes.size(); ++i)
    if (!reach[i])
      add(ViolationKind::unreachable, node_id(i), "not reachable from root");

  // Reducedness.
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::vector<NodeId>>
      by_signature;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    const Node &node = nodes[i];
    if (!node.is_internal())
      continue;
    if (node.head(0) == node.head(1) &&
        (!d.weighted() || same_weight(node.weight(0), node.weight(1))))
      add(ViolationKind::redundant_node, node_id(i),
          "both edges lead to node " + id_str(node.head(0)));
    by_signature[{node.var, index_of(node.head(0)), index_of(node.head(1))}]
        .push_back(node_id(i));
  }
  for (const auto &[sig, group] : by_signature) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const Node &u = d.node(group[a]);
        const Node &v = d.node(group[b]);
        if (d.weighted() && !(same_weight(u.weight(0), v.weight(0)) &&
                              same_weight(u.weight(1), v.weight(1))))
          continue;
        add(ViolationKind::equivalent_nodes, group[b],
            "equivalent to node " + id_str(group[a]));
      }
    }
  }

  // Freeness via descendant variable sets.
  std::vector<VarSet> below(nodes.size(), 0);
  for (NodeId id : *post) {
    const Node &node = d.node(id);
    if (!node.is_internal())
      continue;
    const VarSet children = below[index_of(node.head(0))] |
                            below[index_of(node.head(1))];
    if (children & var_bit(node.var))
      add(ViolationKind::freeness, id,
          "variable x" + std::to_string(node.var) +
              " is tested again below this node");
    below[index_of(id)] = children | var_bit(node.var);
  }

  if (d.weighted()) {
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      const Node &node = nodes[i];
      if (!node.is_internal())
        continue;
      for (int b = 0; b < 2; ++b) {
        const Weight w = node.weight(b);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
          add(ViolationKind::nonfinite_weight, node_id(i),
              "edge " + std::to_string(b) + " weight is not finite");
        else if (d.node(node.head(b)).kind == NodeKind::terminal0 &&
                 std::abs(w) > kZeroWeightTolerance)
          add(ViolationKind::weight_into_terminal0, node_id(i),
              "edge " + std::to_string(b) + " enters the 0-terminal with weight " +
                  std::to_string(std::abs(w)));
      }
      if (squared_norm(node) == 0.0)
        add(ViolationKind::degenerate_node, node_id(i),
            "both outgoing weights are zero");
    }
    const auto t1 = d.terminal1();
    if (!t1 || !reach[index_of(*t1)])
      add(ViolationKind::empty_support, std::nullopt,
          "the 1-terminal is not reachable");
  }
  return report;
}

void require_usable(const Diagram &d) {
  const auto report = validate(d);
  if (report.usable())
    return;
  ValidationReport blocking;
  for (const auto &v : report.violations)
    if (is_blocking(v.kind))
      blocking.violations.push_back(v);
  throw InvalidDiagram("invalid diagram:\n" + blocking.summary());
}

// ---------------------------------------------------------------------------
// Reduction

Reduction reduce_with_log(const Diagram &d) {
  if (d.weighted())
    throw Error("reduce expects an unweighted diagram; contraction precedes "
                "weighting");
  {
    const auto report = validate(d);
    if (report.has(ViolationKind::structure) || report.has(ViolationKind::cycle))
      throw InvalidDiagram("cannot reduce:\n" + report.summary());
  }

  const auto decomposition = layers(d);
  std::vector<Node> work(d.nodes().begin(), d.nodes().end());
  std::vector<NodeId> repr(work.size());
  for (std::uint32_t i = 0; i < work.size(); ++i)
    repr[i] = node_id(i);

  Reduction result;
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, NodeId> unique;
  for (std::size_t k = 1; k < decomposition.layers.size(); ++k) {
    for (NodeId id : decomposition.layers[k]) {
      Node &node = work[index_of(id)];
      const NodeId low = repr[index_of(node.head(0))];
      const NodeId high = repr[index_of(node.head(1))];
      node.edges[0].head = low;
      node.edges[1].head = high;
      if (low == high) {
        repr[index_of(id)] = low;
        result.steps.push_back(
            {ReductionRule::redundant_node_deletion, id, low});
        continue;
      }
      const auto key = std::make_tuple(node.var, index_of(low), index_of(high));
      if (auto it = unique.find(key); it != unique.end()) {
        repr[index_of(id)] = it->second;
        result.steps.push_back(
            {ReductionRule::equivalent_node_sharing, id, it->second});
        continue;
      }
      unique.emplace(key, id);
    }
  }

  // Keep nodes that are their own representative and reachable from the new
  // root, renumbered in ascending original order.
  const NodeId new_root = repr[index_of(d.root())];
  std::vector<bool> keep(work.size(), false);
  std::vector<NodeId> stack{new_root};
  keep[index_of(new_root)] = true;
  while (!stack.empty()) {
    const Node &node = work[index_of(stack.back())];
    stack.pop_back();
    if (!node.is_internal())
      continue;
    for (int b = 0; b < 2; ++b) {
      const NodeId h = node.head(b);
      if (!keep[index_of(h)]) {
        keep[index_of(h)] = true;
        stack.push_back(h);
      }
    }
  }
  std::vector<NodeId> renumber(work.size());
  std::vector<Node> out;
  for (std::uint32_t i = 0; i < work.size(); ++i) {
    if (!keep[i])
      continue;
    renumber[i] = node_id(static_cast<std::uint32_t>(out.size()));
    out.push_back(work[i]);
  }
  for (Node &node : out)
    if (node.is_internal())
      for (auto &e : node.edges)
        e.head = renumber[index_of(e.head)];
  result.diagram =
      Diagram(d.num_vars(), std::move(out), renumber[index_of(new_root)], false);
  return result;
}

Diagram reduce(const Diagram &d) { return reduce_with_log(d).diagram; }

// ---------------------------------------------------------------------------
// Paths

PathTrace trace(const Diagram &d, Assignment z) {
  PathTrace path;
  NodeId at = d.root();
  // A valid diagram's path visits at most n internal nodes.
  const std::size_t limit = d.size() + 1;
  while (true) {
    path.nodes.push_back(at);
    const Node &node = d.node(at);
    if (!node.is_internal())
      break;
    if (path.nodes.size() > limit)
      throw InvalidDiagram("path does not terminate; the diagram has a cycle");
    const int b = bit_of(z, node.var) ? 1 : 0;
    path.edges.emplace_back(at, b);
    at = node.head(b);
  }
  path.free_var_count =
      d.num_vars() - static_cast<int>(path.nodes.size()) + 1;
  return path;
}

bool evaluate(const Diagram &d, Assignment x) {
  NodeId at = d.root();
  std::size_t steps = 0;
  while (true) {
    const Node &node = d.node(at);
    if (!node.is_internal())
      return node.kind == NodeKind::terminal1;
    if (++steps > d.size())
      throw InvalidDiagram("path does not terminate; the diagram has a cycle");
    at = node.head(bit_of(x, node.var) ? 1 : 0);
  }
}

Weight amplitude(const Diagram &d, Assignment z) {
  NodeId at = d.root();
  Weight product{1.0, 0.0};
  int path_nodes = 1;
  while (true) {
    const Node &node = d.node(at);
    if (node.kind == NodeKind::terminal0)
      return {0.0, 0.0};
    if (node.kind == NodeKind::terminal1)
      break;
    if (path_nodes > static_cast<int>(d.size()))
      throw InvalidDiagram("path does not terminate; the diagram has a cycle");
    const double norm = squared_norm(node);
    if (norm == 0.0)
      throw DegenerateNode("node " + id_str(at) +
                           " has both outgoing weights equal to zero");
    const int b = bit_of(z, node.var) ? 1 : 0;
    product *= node.weight(b) / std::sqrt(norm);
    at = node.head(b);
    ++path_nodes;
  }
  const int free_vars = d.num_vars() - path_nodes + 1;
  return product * std::pow(2.0, -0.5 * free_vars);
}

// ---------------------------------------------------------------------------
// Orders

LayerDecomposition layers(const Diagram &d) {
  NodeId cycle_at{};
  const auto post = postorder_all(d, &cycle_at);
  if (!post)
    throw InvalidDiagram("diagram has a cycle through node " + id_str(cycle_at));
  LayerDecomposition result;
  result.layer_of.assign(d.size(), 0);
  for (NodeId id : *post) {
    const Node &node = d.node(id);
    std::size_t layer = 0;
    if (node.is_internal())
      layer = 1 + std::max(result.layer_of[index_of(node.head(0))],
                           result.layer_of[index_of(node.head(1))]);
    result.layer_of[index_of(id)] = layer;
    if (result.layers.size() <= layer)
      result.layers.resize(layer + 1);
    result.layers[layer].push_back(id);
  }
  for (auto &layer : result.layers)
    std::sort(layer.begin(), layer.end());
  return result;
}

std::vector<NodeId> topological_order(const Diagram &d) {
  const auto reach = reachable_from_root(d);
  std::vector<std::uint32_t> indegree(d.size(), 0);
  std::size_t internal = 0;
  for (std::uint32_t i = 0; i < d.size(); ++i) {
    const Node &node = d.nodes()[i];
    if (!reach[i] || !node.is_internal())
      continue;
    ++internal;
    for (int b = 0; b < 2; ++b)
      ++indegree[index_of(node.head(b))];
  }

  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  if (d.node(d.root()).is_internal())
    ready.push(d.root());
  std::vector<NodeId> order;
  order.reserve(internal);
  while (!ready.empty()) {
    const NodeId u = ready.top();
    ready.pop();
    order.push_back(u);
    const Node &node = d.node(u);
    for (int b = 0; b < 2; ++b) {
      const NodeId h = node.head(b);
      if (--indegree[index_of(h)] == 0 && d.node(h).is_internal())
        ready.push(h);
    }
  }
  if (order.size() != internal)
    throw InvalidDiagram("diagram has a cycle or a root with incoming edges");
  return order;
}

bool is_obdd_under(const Diagram &d, std::span<const int> order) {
  const int n = d.num_vars();
  if (static_cast<int>(order.size()) != n)
    throw Error("variable order must list all " + std::to_string(n) +
                " variables");
  std::vector<int> rank(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int v = order[k];
    if (v < 1 || v > n || rank[static_cast<std::size_t>(v)] != -1)
      throw Error("variable order is not a permutation of 1..n");
    rank[static_cast<std::size_t>(v)] = static_cast<int>(k);
  }
  for (const Node &node : d.nodes()) {
    if (!node.is_internal())
      continue;
    for (int b = 0; b < 2; ++b) {
      const Node &child = d.node(node.head(b));
      if (child.is_internal() &&
          rank[static_cast<std::size_t>(node.var)] >=
              rank[static_cast<std::size_t>(child.var)])
        return false;
    }
  }
  return true;
}

std::vector<VarSet> descendant_vars(const Diagram &d) {
  NodeId cycle_at{};
  const auto post = postorder_all(d, &cycle_at);
  if (!post)
    throw InvalidDiagram("diagram has a cycle through node " + id_str(cycle_at));
  std::vector<VarSet> below(d.size(), 0);
  for (NodeId id : *post) {
    const Node &node = d.node(id);
    if (node.is_internal())
      below[index_of(id)] = below[index_of(node.head(0))] |
                            below[index_of(node.head(1))] | var_bit(node.var);
  }
  return below;
}

} // namespace bddqsp
