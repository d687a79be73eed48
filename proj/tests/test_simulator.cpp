#include "doctest.h"

#include "bddqsp/circuit.hpp"
#include "bddqsp/errors.hpp"
#include "bddqsp/random_diagram.hpp"
#include "bddqsp/simulator.hpp"
#include "bddqsp/weighting.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace bddqsp;

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

namespace {

/// Random circuit over the full gate set.
Circuit random_circuit(std::mt19937_64 &rng, std::uint32_t qubits, int gates) {
  Circuit c(qubits);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<Qubit> pick(0, qubits - 1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  auto distinct = [&](std::size_t count) {
    std::vector<Qubit> q;
    while (q.size() < count) {
      const Qubit c = pick(rng);
      if (std::find(q.begin(), q.end(), c) == q.end())
        q.push_back(c);
    }
    return q;
  };
  for (Qubit q = 0; q < qubits; ++q)
    c.set_prep(q, static_cast<Prep>(pick(rng) % 3));
  for (int i = 0; i < gates; ++i) {
    switch (kind(rng)) {
    case 0: c.append(XGate{pick(rng)}); break;
    case 1: c.append(HGate{pick(rng)}); break;
    case 2: {
      const auto q = distinct(2);
      c.append(CHGate{q[0], q[1]});
      break;
    }
    case 3: {
      const auto q = distinct(2);
      c.append(CUGate{q[0], q[1],
                      node_rotation(std::polar(1.0, angle(rng)),
                                    std::polar(std::abs(angle(rng)), angle(rng)))});
      break;
    }
    case 4: {
      const auto q = distinct(3);
      c.append(CCXGate{q[0], q[1], q[2]});
      break;
    }
    default: c.append(PhaseGate{pick(rng), angle(rng)});
    }
  }
  return c;
}

} // namespace

TEST_CASE("H on |0> gives |+>") {
  Circuit c(1);
  c.append(HGate{0});
  const SparseState s = simulate(c);
  CHECK(std::abs(s.amplitude(0) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(s.amplitude(1) - kInvSqrt2) < 1e-15);
}

TEST_CASE("Toffoli flips the target only when both controls are set") {
  Circuit c(3);
  c.append(CCXGate{0, 1, 2});
  CHECK(simulate(c, SparseState::basis(3, 0b011)).amplitude(0b111) == Amplitude{1.0});
  CHECK(simulate(c, SparseState::basis(3, 0b001)).amplitude(0b001) == Amplitude{1.0});
}

TEST_CASE("prep lines set the initial product state") {
  Circuit c(3);
  c.set_prep(0, Prep::one);
  c.set_prep(2, Prep::plus);
  const SparseState s = initial_state(c);
  CHECK(s.support_size() == 2);
  CHECK(std::abs(s.amplitude(0b001) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(s.amplitude(0b101) - kInvSqrt2) < 1e-15);
}

TEST_CASE("brute force state follows the amplitude definition") {
  const Diagram d = uniform_weights(fixtures::four_var_fbdd()).diagram;
  const SparseState s = brute_force_state(d);
  CHECK(s.support_size() == 7);
  for (const auto &[index, a] : s.entries())
    CHECK(std::abs(a - 1.0 / std::sqrt(7.0)) < 1e-15);

  const SparseState one = brute_force_state(uniform_weights(fixtures::single_var()).diagram);
  CHECK(one.support_size() == 1);
  CHECK(std::abs(one.amplitude(1) - 1.0) < 1e-15);
}

TEST_CASE("compare reports fidelity one for identical states") {
  const Diagram d = uniform_weights(fixtures::or2()).diagram;
  const SparseState s = brute_force_state(d);
  const auto report = compare(s, s, AncillaSpec::identity(2));
  CHECK(report.max_abs_error == 0.0);
  CHECK(report.fidelity == doctest::Approx(1.0));
  CHECK(report.ancillas_factor);
}

TEST_CASE("a global phase lowers the entry error but not the fidelity") {
  SparseState a(1), b(1);
  a.set(1, 1.0);
  b.set(1, std::polar(1.0, 0.3));
  const auto report = compare(a, b, AncillaSpec::identity(1));
  CHECK(report.fidelity == doctest::Approx(1.0));
  CHECK(report.max_abs_error > 0.1);
}

TEST_CASE("compare splits ancillas and detects leakage") {
  const Diagram d = uniform_weights(fixtures::or2()).diagram;
  const Circuit c = synth_state(d);
  const SparseState out = simulate(c);
  AncillaSpec spec;
  spec.system = c.layout().var_qubits;
  for (const auto &[node, q] : c.layout().node_qubits)
    spec.fixed.emplace_back(q, node == d.root());
  const auto good = compare(out, brute_force_state(d), spec);
  CHECK(good.fidelity == doctest::Approx(1.0));
  CHECK(good.leakage < 1e-12);
  CHECK(good.ancillas_factor);

  spec.fixed[0].second = !spec.fixed[0].second;
  const auto bad = compare(out, brute_force_state(d), spec);
  CHECK(bad.leakage > 0.5);
  CHECK_FALSE(bad.ancillas_factor);
}

TEST_CASE("unitary of a single Hadamard") {
  Circuit c(1);
  c.append(HGate{0});
  const Eigen::MatrixXcd u = unitary_of(c);
  const double h = kInvSqrt2;
  CHECK(std::abs(u(0, 0) - h) < 1e-15);
  CHECK(std::abs(u(1, 1) + h) < 1e-15);
}

TEST_CASE("phase oracle unitary is diagonal with the expected phases") {
  const Diagram d = fixtures::or2();
  const Circuit c = synth_phase(d, 0.7);
  const std::vector<Qubit> vars = c.layout().var_qubits;
  const Eigen::MatrixXcd u = unitary_of(c, vars, 0);
  for (Eigen::Index j = 0; j < 4; ++j)
    for (Eigen::Index k = 0; k < 4; ++k) {
      const Amplitude expected =
          j != k ? Amplitude{} : oracle::eval(d, static_cast<Assignment>(j))
                                     ? std::polar(1.0, 0.7)
                                     : Amplitude{1.0};
      CHECK(std::abs(u(j, k) - expected) < 1e-12);
    }
}

TEST_CASE("circuit unitaries are unitary") {
  std::mt19937_64 rng(503);
  for (int k = 0; k < 10; ++k) {
    const Eigen::MatrixXcd u = unitary_of(random_circuit(rng, 5, 30));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(32, 32);
    CHECK((u.adjoint() * u - id).norm() < 1e-12);
  }
}

TEST_CASE("sparse and dense simulation agree on random circuits") {
  std::mt19937_64 rng(509);
  for (int k = 0; k < 50; ++k) {
    const Circuit c = random_circuit(rng, 3 + k % 8, 60);
    CHECK(max_entry_difference(simulate(c), dense_simulate(c)) < 1e-12);
  }
}

TEST_CASE("sparse and dense simulation agree on synthesized circuits") {
  std::mt19937_64 rng(521);
  int checked = 0;
  while (checked < 30) {
    RandomDiagramOptions opts;
    opts.num_vars = 3;
    opts.max_internal = 6;
    const Circuit c = synth_state(random_wfbdd(rng, opts));
    if (c.num_qubits() > 12)
      continue;
    CHECK(max_entry_difference(simulate(c), dense_simulate(c)) < 1e-12);
    ++checked;
  }
}

TEST_CASE("support never exceeds the input space during state synthesis") {
  std::mt19937_64 rng(523);
  for (int k = 0; k < 30; ++k) {
    RandomDiagramOptions opts;
    opts.num_vars = 2 + k % 6;
    const Diagram d = random_wfbdd(rng, opts);
    SimulationStats stats;
    simulate(synth_state(d), {}, &stats);
    CHECK(stats.peak_support <= (std::size_t{1} << d.num_vars()));
    CHECK(stats.max_norm_drift < 1e-12);
  }
}

TEST_CASE("support cap raises a resource error") {
  Circuit c(12);
  for (Qubit q = 0; q < 12; ++q)
    c.append(HGate{q});
  SimulatorOptions opts;
  opts.support_cap = 100;
  CHECK_THROWS_AS(simulate(c, opts), ResourceLimit);
}

TEST_CASE("state dump lists qubit 0 first") {
  SparseState s(3);
  s.set(0b001, 0.6);
  s.set(0b100, Amplitude{0.0, 0.8});
  CHECK(format_state(s) == "001 0 0.80000000000000004\n100 0.59999999999999998 0\n");
}
