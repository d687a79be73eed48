#pragma once

#include "bddqsp/circuit.hpp"
#include "bddqsp/diagram.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bddqsp {

/// Basis index: bit q holds qubit q.
using BasisIndex = std::uint64_t;

inline constexpr double kPruneThreshold = 1e-14;
inline constexpr double kCompareTolerance = 1e-10;

class SparseState {
public:
  SparseState() = default;
  explicit SparseState(std::uint32_t num_qubits);
  static SparseState basis(std::uint32_t num_qubits, BasisIndex index);

  std::uint32_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t support_size() const noexcept { return amps_.size(); }

  Amplitude amplitude(BasisIndex index) const;
  void set(BasisIndex index, Amplitude a);
  void add(BasisIndex index, Amplitude a);

  double norm_squared() const;
  /// Drops entries with |a| below `threshold`.
  void prune(double threshold = kPruneThreshold);

  /// Entries ordered by basis index.
  std::vector<std::pair<BasisIndex, Amplitude>> entries() const;
  const std::unordered_map<BasisIndex, Amplitude> &map() const noexcept {
    return amps_;
  }
  std::unordered_map<BasisIndex, Amplitude> &map() noexcept { return amps_; }

private:
  std::uint32_t num_qubits_ = 0;
  std::unordered_map<BasisIndex, Amplitude> amps_;
};

struct SimulatorOptions {
  std::size_t support_cap = std::size_t{1} << 20;
  double prune_threshold = kPruneThreshold;
  /// Largest tolerated |1 - norm^2| after any gate.
  double norm_tolerance = 1e-9;
};

struct SimulationStats {
  std::size_t peak_support = 0;
  double max_norm_drift = 0.0;
  std::size_t gates_applied = 0;
};

inline constexpr std::uint32_t kMaxSparseQubits = 64;

/// Product state described by the circuit's prep lines.
SparseState initial_state(const Circuit &c);

void apply_gate(SparseState &state, const Gate &g,
                const SimulatorOptions &options = {});

/// Runs the circuit from its prep state. Throws ResourceLimit when the
/// support exceeds the cap and Error when the norm drifts.
SparseState simulate(const Circuit &c, const SimulatorOptions &options = {},
                     SimulationStats *stats = nullptr);
/// Runs the gates on `input`, ignoring the circuit's prep lines.
SparseState simulate(const Circuit &c, SparseState input,
                     const SimulatorOptions &options = {},
                     SimulationStats *stats = nullptr);

/// sum_z alpha(z)|z> over the variable register (qubit i-1 carries x_i).
SparseState brute_force_state(const Diagram &d);

/// `<bits> <re> <im>` per entry, qubit 0 first in the bit string, sorted
/// lexicographically.
std::string format_state(const SparseState &state);

// ---------------------------------------------------------------------------
// Dense reference implementation, independent of the sparse code path.

inline constexpr std::uint32_t kMaxDenseQubits = 16;

using DenseState = std::vector<Amplitude>;

DenseState dense_initial_state(const Circuit &c);
DenseState dense_simulate(const Circuit &c, DenseState input);
DenseState dense_simulate(const Circuit &c);
DenseState to_dense(const SparseState &state);

/// max_k |a_k - b_k|.
double max_entry_difference(const SparseState &sparse, const DenseState &dense);

// ---------------------------------------------------------------------------
// Comparison

struct AncillaSpec {
  /// Qubits making up the compared register, least significant first.
  std::vector<Qubit> system;
  /// Remaining qubits and the basis value each must hold.
  std::vector<std::pair<Qubit, bool>> fixed;

  static AncillaSpec identity(std::uint32_t num_qubits);
};

struct ComparisonReport {
  double max_abs_error = 0.0;
  double fidelity = 0.0;
  BasisIndex worst_state = 0;
  /// Norm of the part of `a` outside the declared ancilla values.
  double leakage = 0.0;
  bool ancillas_factor = false;
};

/// Compares `a` (over system + fixed qubits) with `b` (over the system
/// register only).
ComparisonReport compare(const SparseState &a, const SparseState &b,
                         const AncillaSpec &spec,
                         double tolerance = kCompareTolerance);

/// Reduced state of `a` on `spec.system`, keeping only the component where
/// the fixed qubits hold their declared values.
SparseState project(const SparseState &a, const AncillaSpec &spec);

// ---------------------------------------------------------------------------
// Unitaries

inline constexpr std::size_t kMaxUnitaryQubits = 10;

/// Entry (j, k) = <fixed, j| U |fixed, k>, where bit t of j and k addresses
/// on_qubits[t] and every other qubit holds its bit of `fixed`.
Eigen::MatrixXcd unitary_of(const Circuit &c, std::span<const Qubit> on_qubits,
                            BasisIndex fixed = 0);
Eigen::MatrixXcd unitary_of(const Circuit &c);

} // namespace bddqsp
