#pragma once

#include "bddqsp/circuit.hpp"
#include "bddqsp/diagram.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace bddqsp {

/// Register order inside every encoding circuit:
/// [x_1..x_n | one qubit per internal node | system_1..system_n].
struct BlockEncoding {
  Circuit circuit;
  double alpha = 1.0;
  std::size_t ancilla_count = 0;
  std::vector<Qubit> system_qubits;
  std::vector<Qubit> ancilla_qubits;
};

/// V_z = G_1^{(z_1)} (x) ... (x) G_n^{(z_n)}: per variable, the single-qubit
/// gate applied to the matching system qubit when the bit is 0 or 1.
struct ControlledFamily {
  std::vector<std::array<Matrix2, 2>> gates; // gates[i-1][bit]

  static ControlledFamily uniform(int n, const Matrix2 &on_zero,
                                  const Matrix2 &on_one);
  static ControlledFamily identity(int n);
  /// V_z = Z^{z_1} (x) ... (x) Z^{z_n}.
  static ControlledFamily pauli_z(int n);

  /// Dense 2^n x 2^n V_z; row/column bit (i-1) addresses system qubit i.
  Eigen::MatrixXcd matrix(Assignment z) const;
};

/// State preparation followed by X on the root qubit, so that every node
/// qubit returns to |0>: |0>|0> -> |psi_f>|0>.
Circuit prepare_with_clean_ancillas(const Diagram &d);

/// U_f^dagger SWAP U_f with the SWAP exchanging the variable register and
/// the system register pairwise; the block is |psi_f><psi_f|.
BlockEncoding projector_encoding(const Diagram &d);

/// U_f^dagger C U_f, where C applies G_i^{(x_i)} to system qubit i
/// controlled by variable qubit i; the block is
/// sum_z |c_z|^2 f(z) V_z.
BlockEncoding gram_encoding(const Diagram &d, const ControlledFamily &family);

/// Top-left block <0^a, j| U |0^a, k> over the system register.
Eigen::MatrixXcd extract_block(const BlockEncoding &encoding);

/// |psi><psi| from the amplitude semantics.
Eigen::MatrixXcd projector_target(const Diagram &d);
/// sum_z |alpha(z)|^2 V_z from the amplitude semantics.
Eigen::MatrixXcd gram_target(const Diagram &d, const ControlledFamily &family);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd &m);

struct BlockVerification {
  bool verified = false;
  double error = 0.0;      // operator-norm distance to the target
  double block_norm = 0.0; // operator norm of the extracted block
  std::string note;        // reason when verification was skipped
};

/// Verification is skipped (with a note) when the circuit exceeds
/// `qubit_cap` qubits.
BlockVerification verify_block(const BlockEncoding &encoding,
                               const Eigen::MatrixXcd &target,
                               std::size_t qubit_cap = 14);

} // namespace bddqsp
