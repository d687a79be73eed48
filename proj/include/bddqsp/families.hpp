#pragma once

#include "bddqsp/diagram.hpp"

#include <vector>

namespace bddqsp {

/// OBDD over x_1..x_n (natural order) for S_n^i: exactly i inputs are one.
Diagram symmetric_obdd(int n, int i);

/// Variable numbering of the h family over 3n+2 variables:
/// v = 1, w = 2, x_i = 2+i, y_i = 2+n+i, z_i = 2+2n+i.
struct HFamilyVars {
  int n;
  int v() const noexcept { return 1; }
  int w() const noexcept { return 2; }
  int x(int i) const noexcept { return 2 + i; }
  int y(int i) const noexcept { return 2 + n + i; }
  int z(int i) const noexcept { return 2 + 2 * n + i; }
  int count() const noexcept { return 3 * n + 2; }
};

/// FBDD for h = !v!w f1(X,Y,Z) + !v w f2 + v !w f3 with f2 = f1(Y,Z,X) and
/// f3 = f1(Z,X,Y). Each branch counts ones in its two "counting" blocks
/// modulo n+1 and finishes with a single test of the remaining block, so
/// the three branches read the blocks in rotated orders.
Diagram h_family_fbdd(int n);

/// Upper bound 3(2n^2 + 2n) + 3 on the internal node count.
std::size_t h_family_node_bound(int n);

/// delta^k / C(n, k).
double binomial_alpha(int n, double delta, int k);

/// Weighted OBDD with nodes (i, j), 1 <= j <= i <= n, testing x_i. The
/// 1-edge of (i, j) leads to (i+1, j), the 0-edge to (i+1, j+1); layer n
/// sends both edges to the 1-terminal weighted by binomial_alpha of the
/// resulting Hamming weight, and every other edge carries the square root
/// of the sum of squared weights leaving its head.
Diagram binomial_wobdd(int n, double delta);

/// Id of node (i, j) in the diagram returned by binomial_wobdd.
NodeId binomial_node(int n, int i, int j);

struct RatioBreakdown {
  int n = 0;
  double delta = 0.0;
  std::vector<double> a_bar;  // indexed by Hamming weight j
  std::vector<double> alpha;  // per basis state of weight j
  double alpha_l1 = 0.0;      // sum over all 2^n basis states
  double a_bar_l2 = 0.0;
  double direct_ratio = 0.0;  // 2^{n/2} ||alpha||_1 / ||A_bar||_2
  double closed_form = 0.0;   // sqrt(sum_j delta^j) (2/(1+delta))^{n/2}
  /// 2^{n/2} (sum_j delta^j) / (1+delta)^{n/2}
  double identity_form = 0.0;
  /// |direct - closed| / direct
  double relative_deviation = 0.0;
};

RatioBreakdown amplification_ratio(int n, double delta);

double binomial_coefficient(int n, int k);

} // namespace bddqsp
