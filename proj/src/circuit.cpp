#include "bddqsp/circuit.hpp"

#include "bddqsp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bddqsp {

namespace {

Diagram without_weights(const Diagram &d) {
  std::vector<Node> nodes(d.nodes().begin(), d.nodes().end());
  for (Node &node : nodes)
    for (Edge &e : node.edges)
      e.weight = {};
  return Diagram(d.num_vars(), std::move(nodes), d.root(), false);
}

template <class... Ts> struct Overloaded : Ts... {
  using Ts::operator()...;
};

void check_degenerate(const Diagram &d) {
  for (std::uint32_t i = 0; i < d.size(); ++i) {
    const Node &node = d.nodes()[i];
    if (node.is_internal() && std::norm(node.weight(0)) == 0.0 &&
        std::norm(node.weight(1)) == 0.0)
      throw DegenerateNode("node " + std::to_string(i) +
                           " has two zero outgoing weights");
  }
}

QubitLayout node_layout(const Diagram &d) {
  QubitLayout layout;
  const auto n = static_cast<Qubit>(d.num_vars());
  for (Qubit q = 0; q < n; ++q)
    layout.var_qubits.push_back(q);
  Qubit next = n;
  for (std::uint32_t i = 0; i < d.size(); ++i)
    if (d.nodes()[i].is_internal())
      layout.node_qubits.emplace_back(node_id(i), next++);
  return layout;
}

std::uint32_t qubit_total(const QubitLayout &layout) {
  return static_cast<std::uint32_t>(layout.var_qubits.size() +
                                     layout.node_qubits.size() +
                                     (layout.terminal_qubit ? 1 : 0));
}

/// Out-edge block of one node: X-conjugated Toffoli for the 0-edge, plain
/// Toffoli for the 1-edge, skipping heads without a qubit.
void emit_edge_block(Circuit &c, const Diagram &d, NodeId u) {
  const QubitLayout &layout = c.layout();
  const Node &node = d.node(u);
  const Qubit control = *layout.qubit_of(u);
  const Qubit x = layout.var_qubits[node.var - 1];
  for (int b = 0; b < 2; ++b) {
    const Node &head = d.node(node.head(b));
    std::optional<Qubit> target;
    if (head.is_internal())
      target = layout.qubit_of(node.head(b));
    else if (head.kind == NodeKind::terminal1)
      target = layout.terminal_qubit;
    if (!target)
      continue;
    if (b == 0)
      c.append(XGate{x});
    c.append(CCXGate{control, x, *target});
    if (b == 0)
      c.append(XGate{x});
  }
}

} // namespace

bool is_unitary(const Matrix2 &m, double tolerance) {
  // Columns orthonormal.
  const Amplitude c00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
  const Amplitude c11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
  const Amplitude c01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
  for (const Amplitude &a : m)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      return false;
  return std::abs(c00 - 1.0) <= tolerance && std::abs(c11 - 1.0) <= tolerance &&
         std::abs(c01) <= tolerance;
}

Matrix2 adjoint(const Matrix2 &m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

std::vector<Qubit> qubits_of(const Gate &g) {
  return std::visit(
      Overloaded{
          [](const XGate &x) { return std::vector<Qubit>{x.target}; },
          [](const HGate &x) { return std::vector<Qubit>{x.target}; },
          [](const CHGate &x) { return std::vector<Qubit>{x.control, x.target}; },
          [](const CUGate &x) { return std::vector<Qubit>{x.control, x.target}; },
          [](const CCXGate &x) {
            return std::vector<Qubit>{x.control1, x.control2, x.target};
          },
          [](const PhaseGate &x) { return std::vector<Qubit>{x.target}; },
      },
      g);
}

Gate inverse(const Gate &g) {
  if (const auto *cu = std::get_if<CUGate>(&g))
    return CUGate{cu->control, cu->target, adjoint(cu->matrix)};
  if (const auto *p = std::get_if<PhaseGate>(&g))
    return PhaseGate{p->target, -p->theta};
  return g;
}

std::optional<Qubit> QubitLayout::qubit_of(NodeId id) const {
  const auto it = std::lower_bound(
      node_qubits.begin(), node_qubits.end(), id,
      [](const auto &entry, NodeId key) { return entry.first < key; });
  if (it == node_qubits.end() || it->first != id)
    return std::nullopt;
  return it->second;
}

Circuit::Circuit(std::uint32_t num_qubits)
    : num_qubits_(num_qubits), prep_(num_qubits, Prep::zero) {}

void Circuit::check_qubit(Qubit q) const {
  if (q >= num_qubits_)
    throw InvalidCircuit("qubit q" + std::to_string(q) + " out of range (" +
                         std::to_string(num_qubits_) + " qubits)");
}

void Circuit::set_prep(Qubit q, Prep p) {
  check_qubit(q);
  prep_[q] = p;
}

void Circuit::append(const Gate &g) {
  auto qubits = qubits_of(g);
  for (Qubit q : qubits)
    check_qubit(q);
  std::sort(qubits.begin(), qubits.end());
  if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end())
    throw InvalidCircuit("gate acts twice on one qubit");
  if (const auto *cu = std::get_if<CUGate>(&g); cu && !is_unitary(cu->matrix))
    throw InvalidCircuit("CU matrix is not unitary");
  if (const auto *p = std::get_if<PhaseGate>(&g); p && !std::isfinite(p->theta))
    throw InvalidCircuit("phase angle is not finite");
  gates_.push_back(g);
}

void Circuit::append(const Circuit &other) {
  if (other.num_qubits() > num_qubits_)
    throw InvalidCircuit("appended circuit is wider than the target");
  for (const Gate &g : other.gates())
    append(g);
}

void Circuit::begin_segment(std::string label) {
  if (open_segment_)
    end_segment();
  open_segment_ = segments_.size();
  segments_.push_back({std::move(label), gates_.size(), gates_.size()});
}

void Circuit::end_segment() {
  if (!open_segment_)
    return;
  segments_[*open_segment_].end = gates_.size();
  open_segment_.reset();
}

void Circuit::add_segment(Segment s) {
  if (s.begin > s.end || s.end > gates_.size())
    throw InvalidCircuit("segment '" + s.label + "' is out of range");
  segments_.push_back(std::move(s));
}

const Segment *Circuit::segment(std::string_view label) const {
  for (const Segment &s : segments_)
    if (s.label == label)
      return &s;
  return nullptr;
}

void Circuit::set_layout(QubitLayout layout) {
  std::vector<Qubit> all = layout.var_qubits;
  for (const auto &[id, q] : layout.node_qubits)
    all.push_back(q);
  if (layout.terminal_qubit)
    all.push_back(*layout.terminal_qubit);
  for (Qubit q : all)
    check_qubit(q);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw InvalidCircuit("layout assigns one qubit twice");
  if (!std::is_sorted(layout.node_qubits.begin(), layout.node_qubits.end()))
    std::sort(layout.node_qubits.begin(), layout.node_qubits.end());
  layout_ = std::move(layout);
}

GateCounts Circuit::counts() const {
  GateCounts counts;
  for (const Gate &g : gates_)
    std::visit(Overloaded{
                   [&](const XGate &) { ++counts.x; },
                   [&](const HGate &) { ++counts.h; },
                   [&](const CHGate &) { ++counts.ch; },
                   [&](const CUGate &) { ++counts.cu; },
                   [&](const CCXGate &) { ++counts.ccx; },
                   [&](const PhaseGate &) { ++counts.phase; },
               },
               g);
  return counts;
}

Circuit Circuit::inverse() const {
  Circuit out(num_qubits_);
  out.layout_ = layout_;
  out.source_ = source_;
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it)
    out.gates_.push_back(bddqsp::inverse(*it));
  return out;
}

GateCounts gate_counts(const Circuit &c) { return c.counts(); }

Matrix2 node_rotation(Weight w0, Weight w1) {
  const double norm = std::sqrt(std::norm(w0) + std::norm(w1));
  if (norm == 0.0)
    throw DegenerateNode("both outgoing weights are zero");
  return {w0 / norm, -std::conj(w1) / norm, w1 / norm, std::conj(w0) / norm};
}

Circuit synth_state(const Diagram &d) {
  if (!d.weighted())
    throw InvalidDiagram("state synthesis needs a weighted diagram");
  check_degenerate(d);
  require_usable(d);

  QubitLayout layout = node_layout(d);
  Circuit c(qubit_total(layout));
  c.set_layout(std::move(layout));
  c.set_source(d);
  const QubitLayout &l = c.layout();

  c.begin_segment("prep");
  for (Qubit q : l.var_qubits)
    c.append(HGate{q});
  const auto root_qubit = l.qubit_of(d.root());
  if (root_qubit)
    c.append(XGate{*root_qubit});

  const std::vector<NodeId> order = topological_order(d);
  c.begin_segment("main");
  for (NodeId u : order) {
    const Node &node = d.node(u);
    const Qubit control = *l.qubit_of(u);
    const Qubit x = l.var_qubits[node.var - 1];
    c.append(CHGate{control, x});
    c.append(CUGate{control, x, node_rotation(node.weight(0), node.weight(1))});
    emit_edge_block(c, d, u);
  }
  c.begin_segment("undo");
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    emit_edge_block(c, d, *it);
  c.end_segment();
  return c;
}

Circuit synth_phase(const Diagram &d, double theta) {
  if (!std::isfinite(theta))
    throw Error("phase angle must be finite");
  const Diagram plain = without_weights(d);
  require_usable(plain);
  if (!plain.terminal1())
    throw InvalidDiagram("the phase oracle needs a 1-terminal");

  QubitLayout layout = node_layout(plain);
  layout.terminal_qubit = qubit_total(layout);
  Circuit c(qubit_total(layout));
  c.set_layout(std::move(layout));
  c.set_source(plain);
  const QubitLayout &l = c.layout();
  const Qubit t1 = *l.terminal_qubit;
  const Qubit raised = l.qubit_of(plain.root()).value_or(t1);

  c.begin_segment("prep");
  c.append(XGate{raised});
  const std::vector<NodeId> order = topological_order(plain);
  c.begin_segment("main");
  for (NodeId u : order)
    emit_edge_block(c, plain, u);
  c.begin_segment("phase");
  c.append(PhaseGate{t1, theta});
  c.begin_segment("undo");
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    emit_edge_block(c, plain, *it);
  c.begin_segment("finish");
  c.append(XGate{raised});
  c.end_segment();
  return c;
}

} // namespace bddqsp
