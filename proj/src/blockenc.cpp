#include "bddqsp/blockenc.hpp"

#include "bddqsp/errors.hpp"
#include "bddqsp/simulator.hpp"

#include <Eigen/SVD>

namespace bddqsp {

namespace {

/// Copies `src` into a wider circuit, keeping its layout and source.
Circuit widen(const Circuit &src, std::uint32_t num_qubits) {
  Circuit out(num_qubits);
  out.set_layout(src.layout());
  if (src.source())
    out.set_source(*src.source());
  return out;
}

BlockEncoding frame(const Diagram &d, Circuit &prepare) {
  const auto n = static_cast<std::uint32_t>(d.num_vars());
  BlockEncoding enc;
  const std::uint32_t width = prepare.num_qubits();
  for (Qubit q = 0; q < width; ++q)
    enc.ancilla_qubits.push_back(q);
  for (Qubit q = 0; q < n; ++q)
    enc.system_qubits.push_back(width + q);
  enc.ancilla_count = width;
  enc.circuit = widen(prepare, width + n);
  return enc;
}

void append_cnot(Circuit &c, Qubit control, Qubit target) {
  c.append(CUGate{control, target, kPauliX});
}

} // namespace

ControlledFamily ControlledFamily::uniform(int n, const Matrix2 &on_zero,
                                           const Matrix2 &on_one) {
  if (!is_unitary(on_zero) || !is_unitary(on_one))
    throw Error("controlled family gates must be unitary");
  ControlledFamily f;
  f.gates.assign(static_cast<std::size_t>(n), {on_zero, on_one});
  return f;
}

ControlledFamily ControlledFamily::identity(int n) {
  return uniform(n, kIdentity2, kIdentity2);
}

ControlledFamily ControlledFamily::pauli_z(int n) {
  return uniform(n, kIdentity2, kPauliZ);
}

Eigen::MatrixXcd ControlledFamily::matrix(Assignment z) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  // System qubit i is bit (i-1), so later variables become more significant
  // Kronecker factors.
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Matrix2 &g = gates[i][bit_of(z, static_cast<int>(i + 1)) ? 1 : 0];
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < 2; ++r)
      for (Eigen::Index c = 0; c < 2; ++c)
        next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) =
            g[static_cast<std::size_t>(2 * r + c)] * m;
    m = std::move(next);
  }
  return m;
}

Circuit prepare_with_clean_ancillas(const Diagram &d) {
  Circuit c = synth_state(d);
  if (const auto root = c.layout().qubit_of(d.root())) {
    c.begin_segment("release");
    c.append(XGate{*root});
    c.end_segment();
  }
  return c;
}

BlockEncoding projector_encoding(const Diagram &d) {
  Circuit prepare = prepare_with_clean_ancillas(d);
  BlockEncoding enc = frame(d, prepare);
  Circuit &c = enc.circuit;
  c.begin_segment("prepare");
  c.append(prepare);
  c.begin_segment("swap");
  for (int i = 0; i < d.num_vars(); ++i) {
    const Qubit a = prepare.layout().var_qubits[static_cast<std::size_t>(i)];
    const Qubit b = enc.system_qubits[static_cast<std::size_t>(i)];
    append_cnot(c, a, b);
    append_cnot(c, b, a);
    append_cnot(c, a, b);
  }
  c.begin_segment("unprepare");
  c.append(prepare.inverse());
  c.end_segment();
  return enc;
}

BlockEncoding gram_encoding(const Diagram &d, const ControlledFamily &family) {
  if (family.gates.size() != static_cast<std::size_t>(d.num_vars()))
    throw Error("controlled family size does not match the variable count");
  Circuit prepare = prepare_with_clean_ancillas(d);
  BlockEncoding enc = frame(d, prepare);
  Circuit &c = enc.circuit;
  c.begin_segment("prepare");
  c.append(prepare);
  c.begin_segment("controlled");
  for (int i = 0; i < d.num_vars(); ++i) {
    const Qubit x = prepare.layout().var_qubits[static_cast<std::size_t>(i)];
    const Qubit s = enc.system_qubits[static_cast<std::size_t>(i)];
    const auto &pair = family.gates[static_cast<std::size_t>(i)];
    c.append(XGate{x});
    c.append(CUGate{x, s, pair[0]});
    c.append(XGate{x});
    c.append(CUGate{x, s, pair[1]});
  }
  c.begin_segment("unprepare");
  c.append(prepare.inverse());
  c.end_segment();
  return enc;
}

Eigen::MatrixXcd extract_block(const BlockEncoding &encoding) {
  return unitary_of(encoding.circuit, encoding.system_qubits, 0);
}

Eigen::MatrixXcd projector_target(const Diagram &d) {
  const SparseState psi = brute_force_state(d);
  const auto dim = Eigen::Index{1} << d.num_vars();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (const auto &[index, a] : psi.map())
    v(static_cast<Eigen::Index>(index)) = a;
  return v * v.adjoint();
}

Eigen::MatrixXcd gram_target(const Diagram &d, const ControlledFamily &family) {
  const SparseState psi = brute_force_state(d);
  const auto dim = Eigen::Index{1} << d.num_vars();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &[z, amp] : psi.map())
    a += std::norm(amp) * family.matrix(z);
  return a;
}

double operator_norm(const Eigen::MatrixXcd &m) {
  if (m.size() == 0)
    return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

BlockVerification verify_block(const BlockEncoding &encoding,
                               const Eigen::MatrixXcd &target,
                               std::size_t qubit_cap) {
  BlockVerification v;
  if (encoding.circuit.num_qubits() > qubit_cap) {
    v.note = "circuit has " + std::to_string(encoding.circuit.num_qubits()) +
             " qubits, above the verification cap of " +
             std::to_string(qubit_cap);
    return v;
  }
  const Eigen::MatrixXcd block = extract_block(encoding);
  if (block.rows() != target.rows() || block.cols() != target.cols())
    throw Error("target matrix has the wrong shape");
  v.verified = true;
  v.error = operator_norm(block - target);
  v.block_norm = operator_norm(block);
  return v;
}

} // namespace bddqsp
