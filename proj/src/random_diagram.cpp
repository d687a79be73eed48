#include "bddqsp/random_diagram.hpp"

#include "bddqsp/builder.hpp"
#include "bddqsp/errors.hpp"

#include <bit>
#include <numbers>

namespace bddqsp {

namespace {

class Grower {
public:
  Grower(std::mt19937_64 &rng, const RandomDiagramOptions &options)
      : rng_(rng), options_(options), builder_(options.num_vars) {}

  NodeId grow(VarSet available, int depth) {
    if (available == 0)
      return terminal();
    const double r = uniform_(rng_);
    if (depth > 0 && r < options_.terminal_probability)
      return terminal();

    std::vector<NodeId> compatible;
    for (std::uint32_t i = 2; i < 2 + builder_.internal_count(); ++i)
      if ((builder_.support(node_id(i)) & ~available) == 0)
        compatible.push_back(node_id(i));
    const bool full =
        static_cast<int>(builder_.internal_count()) >= options_.max_internal;
    if (!compatible.empty() &&
        (full || r < options_.terminal_probability + options_.share_probability))
      return pick(compatible);
    if (full)
      return terminal();

    const int var = pick_var(available);
    const VarSet rest = available & ~var_bit(var);
    const NodeId low = grow(rest, depth + 1);
    const NodeId high = grow(rest, depth + 1);
    if (static_cast<int>(builder_.internal_count()) >= options_.max_internal)
      return low;
    return builder_.make(var, low, high);
  }

  const DiagramBuilder &builder() const { return builder_; }

private:
  NodeId terminal() {
    return builder_.constant(uniform_(rng_) < 0.55);
  }

  NodeId pick(const std::vector<NodeId> &candidates) {
    std::uniform_int_distribution<std::size_t> dist(0, candidates.size() - 1);
    return candidates[dist(rng_)];
  }

  int pick_var(VarSet available) {
    const int count = std::popcount(available);
    std::uniform_int_distribution<int> dist(0, count - 1);
    int skip = dist(rng_);
    for (int v = 1; v <= options_.num_vars; ++v) {
      if (!(available & var_bit(v)))
        continue;
      if (skip-- == 0)
        return v;
    }
    return 0; // unreachable for nonempty `available`
  }

  std::mt19937_64 &rng_;
  const RandomDiagramOptions &options_;
  DiagramBuilder builder_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace

Diagram random_fbdd(std::mt19937_64 &rng, const RandomDiagramOptions &options) {
  if (options.num_vars < 1 || options.num_vars > kMaxVars)
    throw Error("random_fbdd: variable count out of range");
  if (options.min_internal > options.max_internal)
    throw Error("random_fbdd: min_internal exceeds max_internal");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Grower grower(rng, options);
    const NodeId root = grower.grow(all_vars(options.num_vars), 0);
    Diagram d = grower.builder().finish(root);
    const auto internal = static_cast<int>(d.internal_count());
    if (internal >= options.min_internal && internal <= options.max_internal)
      return d;
  }
  throw Error("random_fbdd: could not meet the requested size bounds");
}

void assign_random_weights(Diagram &d, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> magnitude(0.1, 1.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::uint32_t i = 0; i < d.size(); ++i) {
    const Node &node = d.nodes()[i];
    if (!node.is_internal())
      continue;
    for (int b = 0; b < 2; ++b) {
      const bool into_zero = d.node(node.head(b)).kind == NodeKind::terminal0;
      const double m = magnitude(rng);
      const double p = phase(rng);
      d.set_weight(node_id(i), b, into_zero ? Weight{} : std::polar(m, p));
    }
  }
  d.set_weighted(true);
}

Diagram random_wfbdd(std::mt19937_64 &rng, const RandomDiagramOptions &options) {
  Diagram d = random_fbdd(rng, options);
  assign_random_weights(d, rng);
  return d;
}

} // namespace bddqsp
