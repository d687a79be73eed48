#pragma once

// Core data model for (weighted) free binary decision diagrams and the
// path/amplitude semantics defined over them.
//
// Conventions used throughout the library:
//   * variables are numbered 1..n, as in the text file format;
//   * an input assignment is a 64-bit word whose bit (i-1) holds x_i;
//   * a variable set is a 64-bit word whose bit (i-1) marks variable i.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bddqsp {

enum class NodeId : std::uint32_t {};

constexpr std::uint32_t index_of(NodeId id) noexcept {
  return static_cast<std::uint32_t>(id);
}
constexpr NodeId node_id(std::uint32_t index) noexcept {
  return static_cast<NodeId>(index);
}

using Weight = std::complex<double>;
using Assignment = std::uint64_t;
using VarSet = std::uint64_t;

inline constexpr int kMaxVars = 63;

/// Tolerance for "weight into the 0-terminal is zero".
inline constexpr double kZeroWeightTolerance = 1e-12;

constexpr bool bit_of(Assignment x, int var) noexcept {
  return ((x >> (var - 1)) & 1U) != 0;
}
constexpr VarSet var_bit(int var) noexcept { return VarSet{1} << (var - 1); }
constexpr VarSet all_vars(int n) noexcept {
  return n >= 64 ? ~VarSet{0} : (VarSet{1} << n) - 1;
}

/// Parses "x1 x2 ... xn" (first character is x1).
Assignment parse_bits(std::string_view text);
/// Formats the low `width` bits, x1 first.
std::string format_bits(Assignment x, int width);

enum class NodeKind : std::uint8_t { terminal0, terminal1, internal };

struct Edge {
  NodeId head{};
  Weight weight{};

  friend bool operator==(const Edge &, const Edge &) = default;
};

struct Node {
  NodeKind kind = NodeKind::internal;
  int var = 0; // 1-based; 0 for terminals
  std::array<Edge, 2> edges{};

  bool is_terminal() const noexcept { return kind != NodeKind::internal; }
  bool is_internal() const noexcept { return kind == NodeKind::internal; }
  NodeId head(int branch) const noexcept { return edges[branch].head; }
  Weight weight(int branch) const noexcept { return edges[branch].weight; }

  static Node terminal(bool value) {
    return Node{value ? NodeKind::terminal1 : NodeKind::terminal0, 0, {}};
  }
  static Node internal(int var, Edge low, Edge high) {
    return Node{NodeKind::internal, var, {low, high}};
  }

  friend bool operator==(const Node &, const Node &) = default;
};

/// A rooted node table. NodeIds index `nodes()` densely.
///
/// Construction performs no semantic checks so that malformed tables can
/// still be handed to `validate`; every other operation assumes a diagram
/// without blocking violations.
class Diagram {
public:
  Diagram() = default;
  Diagram(int num_vars, std::vector<Node> nodes, NodeId root, bool weighted);

  int num_vars() const noexcept { return num_vars_; }
  NodeId root() const noexcept { return root_; }
  bool weighted() const noexcept { return weighted_; }

  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool contains(NodeId id) const noexcept { return index_of(id) < nodes_.size(); }

  /// Throws InvalidDiagram on a dangling id.
  const Node &node(NodeId id) const;

  std::optional<NodeId> terminal0() const noexcept;
  std::optional<NodeId> terminal1() const noexcept;
  std::size_t internal_count() const noexcept;
  std::size_t edge_count() const noexcept { return 2 * internal_count(); }

  void set_weight(NodeId id, int branch, Weight w);
  void set_weighted(bool weighted) noexcept { weighted_ = weighted; }

  friend bool operator==(const Diagram &, const Diagram &) = default;

private:
  int num_vars_ = 0;
  std::vector<Node> nodes_;
  NodeId root_{};
  bool weighted_ = false;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  structure,           // dangling id, bad variable index, bad root
  duplicate_terminal,  // two terminals of the same kind
  cycle,
  root_indegree,
  unreachable,
  redundant_node,      // h0(u) == h1(u) (and equal weights when weighted)
  equivalent_nodes,    // same (var, h0, h1) (and weights when weighted)
  freeness,            // a variable repeats on some root-to-terminal path
  weight_into_terminal0,
  nonfinite_weight,
  degenerate_node,     // w0 == w1 == 0
  empty_support,       // weighted diagram whose 1-terminal is unreachable
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::optional<NodeId> node;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const noexcept;
  /// True when nothing but reducedness findings were reported. The state
  /// semantics, weighting and synthesis only depend on these checks.
  bool usable() const noexcept;
  std::string summary() const;
};

/// Reducedness kinds do not block the state-level operations.
bool is_blocking(ViolationKind kind) noexcept;

ValidationReport validate(const Diagram &d);

/// Throws InvalidDiagram listing the blocking violations, if any.
void require_usable(const Diagram &d);

// ---------------------------------------------------------------------------
// Reduction

enum class ReductionRule { redundant_node_deletion, equivalent_node_sharing };

struct ReductionStep {
  ReductionRule rule;
  NodeId removed;     // id in the input diagram
  NodeId replacement; // id in the input diagram
};

struct Reduction {
  Diagram diagram;
  std::vector<ReductionStep> steps;
};

/// Applies both contraction rules bottom-up until neither applies. Survivors
/// keep their relative id order; nodes that become unreachable are dropped.
/// Throws Error on a weighted input.
Reduction reduce_with_log(const Diagram &d);
Diagram reduce(const Diagram &d);

// ---------------------------------------------------------------------------
// Paths and amplitudes

struct PathTrace {
  std::vector<NodeId> nodes;                  // root ... terminal
  std::vector<std::pair<NodeId, int>> edges;  // (tail, branch bit)
  int free_var_count = 0;                     // n - |nodes| + 1
};

PathTrace trace(const Diagram &d, Assignment z);
bool evaluate(const Diagram &d, Assignment x);

/// alpha(z) = 2^{-(n-|V_z|+1)/2} * prod_u w_{z_i(u)}(u) / sqrt(|w0(u)|^2+|w1(u)|^2).
/// Throws DegenerateNode when the path meets a node with both weights zero.
Weight amplitude(const Diagram &d, Assignment z);

// ---------------------------------------------------------------------------
// Graph orders

struct LayerDecomposition {
  /// layers[0] holds the terminals; every node in layers[k] has all children
  /// in layers[0..k-1] and at least one in layers[k-1].
  std::vector<std::vector<NodeId>> layers;

  /// 0-based layer index per node id.
  std::vector<std::size_t> layer_of;
};

LayerDecomposition layers(const Diagram &d);

/// Kahn order over the internal nodes; among ready nodes the smallest id is
/// emitted first. Throws InvalidDiagram on a cycle.
std::vector<NodeId> topological_order(const Diagram &d);

/// `order` lists the variables from first to last. True iff every edge
/// between internal nodes goes to a strictly later variable.
bool is_obdd_under(const Diagram &d, std::span<const int> order);

/// For every node, the set of variables labelling nodes reachable from it
/// (itself included).
std::vector<VarSet> descendant_vars(const Diagram &d);

} // namespace bddqsp
