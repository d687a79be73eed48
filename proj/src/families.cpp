#include "bddqsp/families.hpp"

#include "bddqsp/builder.hpp"
#include "bddqsp/errors.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace bddqsp {

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n)
    return 0.0;
  double c = 1.0;
  for (int t = 1; t <= k; ++t)
    c = c * (n - k + t) / t;
  return std::round(c);
}

Diagram symmetric_obdd(int n, int i) {
  if (n < 1 || n > kMaxVars)
    throw Error("symmetric_obdd: n must lie in [1, 63]");
  if (i < 0 || i > n)
    throw Error("symmetric_obdd: i must lie in [0, n]");
  DiagramBuilder b(n);
  std::map<std::pair<int, int>, NodeId> memo;
  // Node (k, c): about to test x_k with c ones seen so far.
  std::function<NodeId(int, int)> grid = [&](int k, int c) -> NodeId {
    if (c > i || c + (n - k + 1) < i)
      return b.zero();
    if (k > n)
      return b.one();
    if (auto it = memo.find({k, c}); it != memo.end())
      return it->second;
    const NodeId id = b.make(k, grid(k + 1, c), grid(k + 1, c + 1));
    memo.emplace(std::make_pair(k, c), id);
    return id;
  };
  return b.finish(grid(1, 0));
}

std::size_t h_family_node_bound(int n) {
  const auto m = static_cast<std::size_t>(n);
  return 3 * (2 * m * m + 2 * m) + 3;
}

Diagram h_family_fbdd(int n) {
  if (n < 1 || 3 * n + 2 > kMaxVars)
    throw Error("h_family_fbdd: n must lie in [1, 20]");
  const HFamilyVars vars{n};
  DiagramBuilder b(vars.count());

  // One branch f1(A, B, C) = sum_i a_i (S^{i-1}(B, C) + S^{n+i}(B, C)).
  // With c ones among (B, C) the sum reduces to a_{(c mod (n+1)) + 1}, and to
  // 0 when c = n, so counting modulo n+1 is enough.
  auto branch = [&](const std::vector<int> &a, const std::vector<int> &counted) {
    const int width = static_cast<int>(counted.size());
    std::map<std::pair<int, int>, NodeId> memo;
    std::function<NodeId(int, int)> grid = [&](int k, int residue) -> NodeId {
      if (k == width)
        return residue == n ? b.zero() : b.make(a[residue], b.zero(), b.one());
      if (auto it = memo.find({k, residue}); it != memo.end())
        return it->second;
      const NodeId id = b.make(counted[k], grid(k + 1, residue),
                               grid(k + 1, (residue + 1) % (n + 1)));
      memo.emplace(std::make_pair(k, residue), id);
      return id;
    };
    return grid(0, 0);
  };

  std::vector<int> xs, ys, zs;
  for (int i = 1; i <= n; ++i) {
    xs.push_back(vars.x(i));
    ys.push_back(vars.y(i));
    zs.push_back(vars.z(i));
  }
  auto concat = [](std::vector<int> p, const std::vector<int> &q) {
    p.insert(p.end(), q.begin(), q.end());
    return p;
  };
  const NodeId f1 = branch(xs, concat(ys, zs));
  const NodeId f2 = branch(ys, concat(zs, xs));
  const NodeId f3 = branch(zs, concat(xs, ys));

  const NodeId v0 = b.make(vars.w(), f1, f2);
  const NodeId v1 = b.make(vars.w(), f3, b.zero());
  return b.finish(b.make(vars.v(), v0, v1));
}

double binomial_alpha(int n, double delta, int k) {
  return std::pow(delta, k) / binomial_coefficient(n, k);
}

NodeId binomial_node(int n, int i, int j) {
  if (i < 1 || i > n || j < 1 || j > i)
    throw Error("binomial_node: no node (" + std::to_string(i) + ", " +
                std::to_string(j) + ")");
  return node_id(static_cast<std::uint32_t>(1 + (i - 1) * i / 2 + (j - 1)));
}

Diagram binomial_wobdd(int n, double delta) {
  if (n < 1 || n > kMaxVars)
    throw Error("binomial_wobdd: n must lie in [1, 63]");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw Error("binomial_wobdd: delta must lie in [0, 1]");

  const std::size_t count = 1 + static_cast<std::size_t>(n) * (n + 1) / 2;
  std::vector<Node> nodes(count);
  nodes[0] = Node::terminal(true);
  const NodeId t1 = node_id(0);
  // Squared norm of the weights leaving each node.
  std::vector<double> mass(count, 0.0);

  for (int i = n; i >= 1; --i) {
    for (int j = 1; j <= i; ++j) {
      const auto id = index_of(binomial_node(n, i, j));
      Edge low, high;
      if (i == n) {
        const int ones = n - j; // ones read before x_n
        low = {t1, Weight{binomial_alpha(n, delta, ones), 0.0}};
        high = {t1, Weight{binomial_alpha(n, delta, ones + 1), 0.0}};
      } else {
        const NodeId h0 = binomial_node(n, i + 1, j + 1);
        const NodeId h1 = binomial_node(n, i + 1, j);
        low = {h0, Weight{std::sqrt(mass[index_of(h0)]), 0.0}};
        high = {h1, Weight{std::sqrt(mass[index_of(h1)]), 0.0}};
      }
      nodes[id] = Node::internal(i, low, high);
      mass[id] = std::norm(low.weight) + std::norm(high.weight);
    }
  }
  return Diagram(n, std::move(nodes), binomial_node(n, 1, 1), true);
}

RatioBreakdown amplification_ratio(int n, double delta) {
  if (n < 1 || n > kMaxVars)
    throw Error("amplification_ratio: n must lie in [1, 63]");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw Error("amplification_ratio: delta must lie in [0, 1]");
  RatioBreakdown r;
  r.n = n;
  r.delta = delta;
  double a_bar_sq = 0.0;
  double geometric = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double c = binomial_coefficient(n, j);
    const double dj = std::pow(delta, j);
    r.a_bar.push_back(std::sqrt(c * dj));
    r.alpha.push_back(dj / c);
    r.alpha_l1 += c * r.alpha.back();
    a_bar_sq += c * dj;
    geometric += dj;
  }
  r.a_bar_l2 = std::sqrt(a_bar_sq);
  const double root_n = std::pow(2.0, n / 2.0);
  r.direct_ratio = root_n * r.alpha_l1 / r.a_bar_l2;
  r.closed_form = std::sqrt(geometric) * std::pow(2.0 / (1.0 + delta), n / 2.0);
  r.identity_form = root_n * geometric / std::pow(1.0 + delta, n / 2.0);
  r.relative_deviation = std::abs(r.direct_ratio - r.closed_form) / r.direct_ratio;
  return r;
}

} // namespace bddqsp
