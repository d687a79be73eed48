#pragma once

#include "bddqsp/diagram.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bddqsp {

using Qubit = std::uint32_t;
using Amplitude = std::complex<double>;

/// Row-major 2x2 matrix: {m00, m01, m10, m11}.
using Matrix2 = std::array<Amplitude, 4>;

inline constexpr double kUnitaryTolerance = 1e-12;

bool is_unitary(const Matrix2 &m, double tolerance = kUnitaryTolerance);
Matrix2 adjoint(const Matrix2 &m);

inline const Matrix2 kPauliX{Amplitude{0}, Amplitude{1}, Amplitude{1},
                             Amplitude{0}};
inline const Matrix2 kPauliZ{Amplitude{1}, Amplitude{0}, Amplitude{0},
                             Amplitude{-1}};
inline const Matrix2 kIdentity2{Amplitude{1}, Amplitude{0}, Amplitude{0},
                                Amplitude{1}};

struct XGate {
  Qubit target;
  friend bool operator==(const XGate &, const XGate &) = default;
};
struct HGate {
  Qubit target;
  friend bool operator==(const HGate &, const HGate &) = default;
};
struct CHGate {
  Qubit control, target;
  friend bool operator==(const CHGate &, const CHGate &) = default;
};
struct CUGate {
  Qubit control, target;
  Matrix2 matrix;
  friend bool operator==(const CUGate &, const CUGate &) = default;
};
struct CCXGate {
  Qubit control1, control2, target;
  friend bool operator==(const CCXGate &, const CCXGate &) = default;
};
/// diag(1, e^{i theta}).
struct PhaseGate {
  Qubit target;
  double theta;
  friend bool operator==(const PhaseGate &, const PhaseGate &) = default;
};

using Gate = std::variant<XGate, HGate, CHGate, CUGate, CCXGate, PhaseGate>;

std::vector<Qubit> qubits_of(const Gate &g);
Gate inverse(const Gate &g);

enum class Prep : std::uint8_t { zero, one, plus };

struct QubitLayout {
  /// var_qubits[i - 1] carries x_i.
  std::vector<Qubit> var_qubits;
  /// (internal node, qubit), ascending node id.
  std::vector<std::pair<NodeId, Qubit>> node_qubits;
  std::optional<Qubit> terminal_qubit;

  std::optional<Qubit> qubit_of(NodeId id) const;
  bool operator==(const QubitLayout &) const = default;
};

struct GateCounts {
  std::size_t x = 0, h = 0, ch = 0, cu = 0, ccx = 0, phase = 0;

  std::size_t single_qubit() const noexcept { return x + h + phase; }
  std::size_t two_qubit() const noexcept { return ch + cu; }
  std::size_t toffoli() const noexcept { return ccx; }
  std::size_t total() const noexcept { return x + h + ch + cu + ccx + phase; }
  bool operator==(const GateCounts &) const = default;
};

/// Half-open range of gate indices with a label ("prep", "main", "undo", ...).
struct Segment {
  std::string label;
  std::size_t begin = 0, end = 0;
  bool operator==(const Segment &) const = default;
};

class Circuit {
public:
  Circuit() = default;
  explicit Circuit(std::uint32_t num_qubits);

  std::uint32_t num_qubits() const noexcept { return num_qubits_; }

  Prep prep(Qubit q) const { return prep_.at(q); }
  const std::vector<Prep> &preps() const noexcept { return prep_; }
  void set_prep(Qubit q, Prep p);

  /// Throws InvalidCircuit on an out-of-range or repeated qubit, a
  /// non-unitary CU matrix or a non-finite angle.
  void append(const Gate &g);
  /// Appends every gate of `other` (which must not have more qubits).
  void append(const Circuit &other);
  const std::vector<Gate> &gates() const noexcept { return gates_; }

  void begin_segment(std::string label);
  void end_segment();
  /// Records an already emitted range, e.g. when reading a circuit file.
  void add_segment(Segment s);
  const std::vector<Segment> &segments() const noexcept { return segments_; }
  const Segment *segment(std::string_view label) const;

  const QubitLayout &layout() const noexcept { return layout_; }
  void set_layout(QubitLayout layout);

  /// Diagram the circuit was synthesized from, if any.
  const std::optional<Diagram> &source() const noexcept { return source_; }
  void set_source(Diagram d) { source_ = std::move(d); }

  GateCounts counts() const;

  /// Reversed, inverted gate list on the same qubits with layout kept and
  /// every qubit prepared in |0>.
  Circuit inverse() const;

  bool operator==(const Circuit &) const = default;

private:
  void check_qubit(Qubit q) const;

  std::uint32_t num_qubits_ = 0;
  std::vector<Prep> prep_;
  std::vector<Gate> gates_;
  std::vector<Segment> segments_;
  std::optional<std::size_t> open_segment_;
  QubitLayout layout_;
  std::optional<Diagram> source_;
};

GateCounts gate_counts(const Circuit &c);

/// U(u) = (|w0|^2 + |w1|^2)^{-1/2} [[w0, -conj(w1)], [w1, conj(w0)]].
Matrix2 node_rotation(Weight w0, Weight w1);

/// State preparation. Qubits: x_1..x_n, then one per internal node in
/// ascending id. Every qubit starts in |0>; the circuit opens with H on the
/// variable qubits and X on the root qubit, so that running it yields
/// sum_z alpha(z)|z> (x) |1>_root (x) |0...0>.
Circuit synth_state(const Diagram &d);

/// Phase oracle |x>|0...0> -> e^{i theta f(x)}|x>|0...0>. Qubits: x_1..x_n,
/// one per internal node in ascending id, then the 1-terminal. Weights are
/// ignored. Variable qubits are prepared in |0>; callers choose the input.
Circuit synth_phase(const Diagram &d, double theta);

} // namespace bddqsp
