#include "doctest.h"

#include "bddqsp/circuit.hpp"
#include "bddqsp/families.hpp"
#include "bddqsp/simulator.hpp"

#include "support/oracles.hpp"

#include <bit>
#include <cmath>
#include <numeric>

using namespace bddqsp;

namespace {

std::vector<int> natural(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  return order;
}

} // namespace

TEST_CASE("S_2^0 holds only on 00") {
  const Diagram d = symmetric_obdd(2, 0);
  for (Assignment x = 0; x < 4; ++x)
    CHECK(oracle::eval(d, x) == (x == 0));
}

TEST_CASE("S_4^2 has six models and is ordered") {
  const Diagram d = symmetric_obdd(4, 2);
  CHECK(oracle::count(d) == 6);
  CHECK(is_obdd_under(d, natural(4)));
  CHECK(validate(d).ok());
}

TEST_CASE("symmetric functions agree with popcount") {
  for (int n = 1; n <= 10; ++n)
    for (int i = 0; i <= n; ++i) {
      const Diagram d = symmetric_obdd(n, i);
      for (Assignment x = 0; x < (Assignment{1} << n); ++x)
        REQUIRE(oracle::eval(d, x) == (std::popcount(x) == i));
    }
}

TEST_CASE("h is zero whenever v and w are both set") {
  const Diagram d = h_family_fbdd(2);
  for (Assignment rest = 0; rest < 64; ++rest)
    CHECK_FALSE(oracle::eval(d, 0b11 | (rest << 2)));
}

TEST_CASE("h family agrees with the formula, is free and within the bound") {
  for (int n = 2; n <= 4; ++n) {
    const Diagram d = h_family_fbdd(n);
    CHECK(d.num_vars() == 3 * n + 2);
    CHECK(oracle::free_by_paths(d));
    CHECK(validate(d).ok());
    CHECK(d.internal_count() <= h_family_node_bound(n));
    for (Assignment x = 0; x < (Assignment{1} << d.num_vars()); ++x)
      REQUIRE(oracle::eval(d, x) == oracle::h(n, x));
  }
  CHECK(h_family_node_bound(4) == 123);
}

TEST_CASE("h family is not ordered under the natural order") {
  CHECK_FALSE(is_obdd_under(h_family_fbdd(3), natural(11)));
}

TEST_CASE("h family node count stays within the bound up to n = 8") {
  for (int n = 2; n <= 8; ++n)
    CHECK(h_family_fbdd(n).internal_count() <= h_family_node_bound(n));
}

TEST_CASE("binomial diagram with n = 2 and delta = 1") {
  const Diagram d = binomial_wobdd(2, 1.0);
  const auto amps = oracle::path_amplitudes(d);
  const double norm = std::sqrt(2.5);
  CHECK(std::abs(amps[0b00] - 1.0 / norm) < 1e-12);
  CHECK(std::abs(amps[0b01] - 0.5 / norm) < 1e-12);
  CHECK(std::abs(amps[0b10] - 0.5 / norm) < 1e-12);
  CHECK(std::abs(amps[0b11] - 1.0 / norm) < 1e-12);
}

TEST_CASE("binomial diagram with n = 1") {
  const double delta = 0.3;
  const auto amps = oracle::path_amplitudes(binomial_wobdd(1, delta));
  const double norm = std::sqrt(1.0 + delta * delta);
  CHECK(std::abs(amps[0] - 1.0 / norm) < 1e-12);
  CHECK(std::abs(amps[1] - delta / norm) < 1e-12);
}

TEST_CASE("edge into node (4, 2) carries the square root of its mass") {
  const double delta = 0.5;
  const Diagram d = binomial_wobdd(4, delta);
  const NodeId target = binomial_node(4, 4, 2);
  const double expected =
      std::sqrt(std::pow(delta, 4) / 36 + std::pow(delta, 6) / 16);
  int seen = 0;
  for (const Node &node : d.nodes())
    for (int b = 0; node.is_internal() && b < 2; ++b)
      if (node.head(b) == target) {
        CHECK(std::abs(node.weight(b)) == doctest::Approx(expected).epsilon(1e-14));
        ++seen;
      }
  CHECK(seen == 2);
}

TEST_CASE("binomial diagram size, order and amplitudes") {
  for (int n = 1; n <= 10; ++n)
    for (double delta : {0.25, 0.5, 0.9}) {
      const Diagram d = binomial_wobdd(n, delta);
      CHECK(d.internal_count() == static_cast<std::size_t>(n * (n + 1) / 2));
      CHECK(is_obdd_under(d, natural(n)));
      const auto amps = oracle::path_amplitudes(d);
      for (Assignment x = 0; x < amps.size(); ++x)
        REQUIRE(std::abs(amps[x] - oracle::binomial_amplitude(n, delta, x)) <
                1e-12);
    }
}

TEST_CASE("binomial state circuit reproduces the amplitudes") {
  for (int n = 2; n <= 6; ++n) {
    const Diagram d = binomial_wobdd(n, 0.5);
    const Circuit c = synth_state(d);
    const SparseState out = simulate(c);
    const BasisIndex flag = BasisIndex{1} << *c.layout().qubit_of(d.root());
    for (Assignment x = 0; x < (Assignment{1} << n); ++x)
      CHECK(std::abs(out.amplitude(x | flag) -
                     oracle::binomial_amplitude(n, 0.5, x)) < 1e-9);
  }
}

TEST_CASE("amplification ratio at delta = 0") {
  for (int n = 1; n <= 12; ++n) {
    const RatioBreakdown r = amplification_ratio(n, 0.0);
    const double expected = std::pow(2.0, n / 2.0);
    CHECK(std::abs(r.direct_ratio - expected) < 1e-12 * expected);
    CHECK(std::abs(r.closed_form - expected) < 1e-12 * expected);
  }
  CHECK(amplification_ratio(1, 0.0).direct_ratio ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("direct ratio matches exact summation") {
  for (int n = 1; n <= 10; ++n)
    for (double delta : {0.25, 0.5, 0.9, 1.0}) {
      const RatioBreakdown r = amplification_ratio(n, delta);
      double geometric = 0.0;
      for (int j = 0; j <= n; ++j)
        geometric += std::pow(delta, j);
      const double expected =
          std::pow(2.0, n / 2.0) * geometric / std::pow(1.0 + delta, n / 2.0);
      CHECK(std::abs(r.direct_ratio - expected) < 1e-12 * expected);
      CHECK(std::abs(r.identity_form - expected) < 1e-12 * expected);
      CHECK(r.alpha_l1 == doctest::Approx(geometric).epsilon(1e-13));
      CHECK(r.a_bar_l2 ==
            doctest::Approx(std::pow(1.0 + delta, n / 2.0)).epsilon(1e-13));
      CHECK(std::isfinite(r.closed_form));
      CHECK(r.relative_deviation >= 0.0);
    }
}

TEST_CASE("direct ratio grows at least like (2/(1+delta))^{n/2}") {
  for (double delta : {0.25, 0.5, 0.9}) {
    const double step = std::sqrt(2.0 / (1.0 + delta));
    for (int n = 2; n < 12; ++n)
      CHECK(amplification_ratio(n + 1, delta).direct_ratio >=
            amplification_ratio(n, delta).direct_ratio * step * (1 - 1e-12));
  }
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial_coefficient(4, 2) == 6.0);
  CHECK(binomial_coefficient(10, 0) == 1.0);
  CHECK(binomial_coefficient(30, 15) == oracle::choose(30, 15));
}
