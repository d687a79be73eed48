#include "bddqsp/simulator.hpp"

#include "bddqsp/diagram_io.hpp"
#include "bddqsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bddqsp {

namespace {

template <class... Ts> struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr BasisIndex bit(Qubit q) { return BasisIndex{1} << q; }

const Matrix2 &hadamard() {
  static const Matrix2 h{Amplitude{std::numbers::sqrt2 / 2},
                         Amplitude{std::numbers::sqrt2 / 2},
                         Amplitude{std::numbers::sqrt2 / 2},
                         Amplitude{-std::numbers::sqrt2 / 2}};
  return h;
}

/// A gate seen as "apply `matrix` to `target` when every control bit is set".
struct Controlled {
  BasisIndex controls = 0;
  Qubit target = 0;
  Matrix2 matrix{};
  bool permutation = false; // pure bit flip (X, CCX)
};

Controlled lower(const Gate &g) {
  return std::visit(
      Overloaded{
          [](const XGate &x) { return Controlled{0, x.target, kPauliX, true}; },
          [](const HGate &x) { return Controlled{0, x.target, hadamard(), false}; },
          [](const CHGate &x) {
            return Controlled{bit(x.control), x.target, hadamard(), false};
          },
          [](const CUGate &x) {
            return Controlled{bit(x.control), x.target, x.matrix, false};
          },
          [](const CCXGate &x) {
            return Controlled{bit(x.control1) | bit(x.control2), x.target,
                              kPauliX, true};
          },
          [](const PhaseGate &x) {
            return Controlled{0, x.target,
                              Matrix2{Amplitude{1}, Amplitude{0}, Amplitude{0},
                                      std::polar(1.0, x.theta)},
                              false};
          },
      },
      g);
}

void check_width(const Circuit &c, std::uint32_t state_qubits) {
  if (c.num_qubits() > kMaxSparseQubits)
    throw ResourceLimit("circuit has more than 64 qubits");
  if (state_qubits != c.num_qubits())
    throw Error("state has " + std::to_string(state_qubits) +
                " qubits, circuit has " + std::to_string(c.num_qubits()));
}

} // namespace

SparseState::SparseState(std::uint32_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits > kMaxSparseQubits)
    throw ResourceLimit("at most 64 qubits are supported");
}

SparseState SparseState::basis(std::uint32_t num_qubits, BasisIndex index) {
  SparseState s(num_qubits);
  s.set(index, 1.0);
  return s;
}

Amplitude SparseState::amplitude(BasisIndex index) const {
  const auto it = amps_.find(index);
  return it == amps_.end() ? Amplitude{} : it->second;
}

void SparseState::set(BasisIndex index, Amplitude a) {
  if (num_qubits_ < 64 && (index >> num_qubits_) != 0)
    throw Error("basis index out of range");
  if (a == Amplitude{})
    amps_.erase(index);
  else
    amps_[index] = a;
}

void SparseState::add(BasisIndex index, Amplitude a) { amps_[index] += a; }

double SparseState::norm_squared() const {
  double total = 0.0;
  for (const auto &[index, a] : amps_)
    total += std::norm(a);
  return total;
}

void SparseState::prune(double threshold) {
  std::erase_if(amps_, [&](const auto &entry) {
    return std::abs(entry.second) < threshold;
  });
}

std::vector<std::pair<BasisIndex, Amplitude>> SparseState::entries() const {
  std::vector<std::pair<BasisIndex, Amplitude>> out(amps_.begin(), amps_.end());
  std::sort(out.begin(), out.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  return out;
}

SparseState initial_state(const Circuit &c) {
  SparseState state(c.num_qubits());
  state.set(0, 1.0);
  for (Qubit q = 0; q < c.num_qubits(); ++q) {
    if (c.prep(q) == Prep::zero)
      continue;
    SparseState next(c.num_qubits());
    for (const auto &[index, a] : state.map()) {
      if (c.prep(q) == Prep::one) {
        next.add(index | bit(q), a);
      } else {
        next.add(index, a * (std::numbers::sqrt2 / 2));
        next.add(index | bit(q), a * (std::numbers::sqrt2 / 2));
      }
    }
    state = std::move(next);
  }
  return state;
}

void apply_gate(SparseState &state, const Gate &g, const SimulatorOptions &options) {
  for (Qubit q : qubits_of(g))
    if (q >= state.num_qubits())
      throw InvalidCircuit("gate addresses qubit q" + std::to_string(q) +
                           " outside the state");
  const Controlled op = lower(g);
  const BasisIndex t = bit(op.target);
  auto &amps = state.map();

  if (op.permutation) {
    std::unordered_map<BasisIndex, Amplitude> next;
    next.reserve(amps.size());
    for (const auto &[index, a] : amps)
      next.emplace((index & op.controls) == op.controls ? index ^ t : index, a);
    amps = std::move(next);
    return;
  }

  std::unordered_map<BasisIndex, Amplitude> next;
  next.reserve(amps.size() * 2);
  const Matrix2 &m = op.matrix;
  for (const auto &[index, a] : amps) {
    if ((index & op.controls) != op.controls) {
      next[index] += a;
      continue;
    }
    const int b = (index & t) ? 1 : 0;
    const Amplitude to0 = m[b] * a;     // row 0, column b
    const Amplitude to1 = m[2 + b] * a; // row 1, column b
    if (to0 != Amplitude{})
      next[index & ~t] += to0;
    if (to1 != Amplitude{})
      next[index | t] += to1;
  }
  amps = std::move(next);
  state.prune(options.prune_threshold);
  if (state.support_size() > options.support_cap)
    throw ResourceLimit("state support exceeded " +
                        std::to_string(options.support_cap) + " entries");
}

SparseState simulate(const Circuit &c, const SimulatorOptions &options,
                     SimulationStats *stats) {
  return simulate(c, initial_state(c), options, stats);
}

SparseState simulate(const Circuit &c, SparseState input,
                     const SimulatorOptions &options, SimulationStats *stats) {
  check_width(c, input.num_qubits());
  SimulationStats local;
  local.peak_support = input.support_size();
  const double start_norm = input.norm_squared();
  for (const Gate &g : c.gates()) {
    apply_gate(input, g, options);
    local.peak_support = std::max(local.peak_support, input.support_size());
    const double drift = std::abs(input.norm_squared() - start_norm);
    local.max_norm_drift = std::max(local.max_norm_drift, drift);
    if (drift > options.norm_tolerance)
      throw Error("norm drifted by " + std::to_string(drift) + " after gate " +
                  std::to_string(local.gates_applied));
    ++local.gates_applied;
  }
  if (stats)
    *stats = local;
  return input;
}

SparseState brute_force_state(const Diagram &d) {
  if (d.num_vars() > 20)
    throw ResourceLimit("brute-force state limited to 20 variables");
  const auto n = static_cast<std::uint32_t>(d.num_vars());
  SparseState state(n);
  for (Assignment z = 0; z < (Assignment{1} << n); ++z) {
    const Weight a = amplitude(d, z);
    if (a != Weight{})
      state.set(z, a);
  }
  return state;
}

std::string format_state(const SparseState &state) {
  std::vector<std::pair<std::string, Amplitude>> rows;
  for (const auto &[index, a] : state.map()) {
    std::string bits(state.num_qubits(), '0');
    for (Qubit q = 0; q < state.num_qubits(); ++q)
      if (index & bit(q))
        bits[q] = '1';
    rows.emplace_back(std::move(bits), a);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  std::ostringstream out;
  for (const auto &[bits, a] : rows)
    out << bits << ' ' << format_double(a.real()) << ' '
        << format_double(a.imag()) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Dense reference

DenseState dense_initial_state(const Circuit &c) {
  if (c.num_qubits() > kMaxDenseQubits)
    throw ResourceLimit("dense simulation limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits");
  const std::size_t dim = std::size_t{1} << c.num_qubits();
  DenseState v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Amplitude a = 1.0;
    for (Qubit q = 0; q < c.num_qubits(); ++q) {
      const bool set = (i >> q) & 1U;
      switch (c.prep(q)) {
      case Prep::zero:
        a *= set ? 0.0 : 1.0;
        break;
      case Prep::one:
        a *= set ? 1.0 : 0.0;
        break;
      case Prep::plus:
        a *= 1.0 / std::sqrt(2.0);
        break;
      }
    }
    v[i] = a;
  }
  return v;
}

DenseState dense_simulate(const Circuit &c, DenseState v) {
  const std::uint32_t n = c.num_qubits();
  if (n > kMaxDenseQubits)
    throw ResourceLimit("dense simulation limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits");
  const std::size_t dim = std::size_t{1} << n;
  if (v.size() != dim)
    throw Error("dense state has the wrong dimension");
  const double s = 1.0 / std::sqrt(2.0);

  auto one_qubit = [&](std::size_t controls, Qubit target, Amplitude m00,
                       Amplitude m01, Amplitude m10, Amplitude m11) {
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t base = 0; base < dim; base += 2 * stride)
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t i0 = base + off;
        if ((i0 & controls) != controls)
          continue;
        const std::size_t i1 = i0 + stride;
        const Amplitude a0 = v[i0], a1 = v[i1];
        v[i0] = m00 * a0 + m01 * a1;
        v[i1] = m10 * a0 + m11 * a1;
      }
  };
  auto mask = [](Qubit q) { return std::size_t{1} << q; };

  for (const Gate &g : c.gates()) {
    if (const auto *x = std::get_if<XGate>(&g))
      one_qubit(0, x->target, 0, 1, 1, 0);
    else if (const auto *h = std::get_if<HGate>(&g))
      one_qubit(0, h->target, s, s, s, -s);
    else if (const auto *ch = std::get_if<CHGate>(&g))
      one_qubit(mask(ch->control), ch->target, s, s, s, -s);
    else if (const auto *cu = std::get_if<CUGate>(&g))
      one_qubit(mask(cu->control), cu->target, cu->matrix[0], cu->matrix[1],
                cu->matrix[2], cu->matrix[3]);
    else if (const auto *ccx = std::get_if<CCXGate>(&g))
      one_qubit(mask(ccx->control1) | mask(ccx->control2), ccx->target, 0, 1, 1,
                0);
    else if (const auto *p = std::get_if<PhaseGate>(&g))
      one_qubit(0, p->target, 1, 0, 0, std::exp(Amplitude{0, p->theta}));
  }
  return v;
}

DenseState dense_simulate(const Circuit &c) {
  return dense_simulate(c, dense_initial_state(c));
}

DenseState to_dense(const SparseState &state) {
  if (state.num_qubits() > kMaxDenseQubits)
    throw ResourceLimit("state too wide for a dense copy");
  DenseState v(std::size_t{1} << state.num_qubits());
  for (const auto &[index, a] : state.map())
    v[index] = a;
  return v;
}

double max_entry_difference(const SparseState &sparse, const DenseState &dense) {
  if (dense.size() != (std::size_t{1} << sparse.num_qubits()))
    throw Error("dense and sparse states differ in width");
  double worst = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i)
    worst = std::max(worst, std::abs(sparse.amplitude(i) - dense[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// Comparison

AncillaSpec AncillaSpec::identity(std::uint32_t num_qubits) {
  AncillaSpec spec;
  for (Qubit q = 0; q < num_qubits; ++q)
    spec.system.push_back(q);
  return spec;
}

namespace {

void check_spec(const SparseState &a, const AncillaSpec &spec) {
  std::vector<bool> seen(a.num_qubits(), false);
  auto mark = [&](Qubit q) {
    if (q >= a.num_qubits() || seen[q])
      throw Error("ancilla spec names qubit q" + std::to_string(q) +
                  " twice or out of range");
    seen[q] = true;
  };
  for (Qubit q : spec.system)
    mark(q);
  for (const auto &[q, value] : spec.fixed)
    mark(q);
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error("ancilla spec does not cover every qubit");
}

} // namespace

namespace {

std::pair<BasisIndex, BasisIndex> fixed_pattern(const AncillaSpec &spec) {
  BasisIndex mask = 0, value = 0;
  for (const auto &[q, set] : spec.fixed) {
    mask |= bit(q);
    if (set)
      value |= bit(q);
  }
  return {mask, value};
}

} // namespace

SparseState project(const SparseState &a, const AncillaSpec &spec) {
  check_spec(a, spec);
  const auto [fixed_mask, fixed_value] = fixed_pattern(spec);
  SparseState out(static_cast<std::uint32_t>(spec.system.size()));
  for (const auto &[index, amp] : a.map()) {
    if ((index & fixed_mask) != fixed_value)
      continue;
    BasisIndex reduced = 0;
    for (std::size_t t = 0; t < spec.system.size(); ++t)
      if (index & bit(spec.system[t]))
        reduced |= BasisIndex{1} << t;
    out.add(reduced, amp);
  }
  return out;
}

ComparisonReport compare(const SparseState &a, const SparseState &b,
                         const AncillaSpec &spec, double tolerance) {
  if (b.num_qubits() != spec.system.size())
    throw Error("reference state has " + std::to_string(b.num_qubits()) +
                " qubits, the compared register has " +
                std::to_string(spec.system.size()));
  const SparseState reduced = project(a, spec);

  ComparisonReport report;
  const auto [fixed_mask, fixed_value] = fixed_pattern(spec);
  double outside = 0.0;
  for (const auto &[index, amp] : a.map())
    if ((index & fixed_mask) != fixed_value)
      outside += std::norm(amp);
  report.leakage = std::sqrt(outside);
  report.ancillas_factor = report.leakage <= tolerance;

  Amplitude overlap{};
  auto consider = [&](BasisIndex index) {
    const double err = std::abs(reduced.amplitude(index) - b.amplitude(index));
    if (err > report.max_abs_error) {
      report.max_abs_error = err;
      report.worst_state = index;
    }
  };
  for (const auto &[index, amp] : reduced.map()) {
    overlap += std::conj(amp) * b.amplitude(index);
    consider(index);
  }
  for (const auto &[index, amp] : b.map())
    consider(index);
  report.fidelity = std::norm(overlap);
  return report;
}

// ---------------------------------------------------------------------------
// Unitaries

Eigen::MatrixXcd unitary_of(const Circuit &c, std::span<const Qubit> on_qubits,
                            BasisIndex fixed) {
  if (on_qubits.size() > kMaxUnitaryQubits)
    throw ResourceLimit("unitary extraction limited to " +
                        std::to_string(kMaxUnitaryQubits) + " qubits");
  BasisIndex mask = 0;
  for (Qubit q : on_qubits) {
    if (q >= c.num_qubits())
      throw Error("qubit q" + std::to_string(q) + " is not in the circuit");
    if (mask & bit(q))
      throw Error("qubit q" + std::to_string(q) + " listed twice");
    mask |= bit(q);
  }
  fixed &= ~mask;
  const std::size_t dim = std::size_t{1} << on_qubits.size();
  auto spread = [&](std::size_t k) {
    BasisIndex index = fixed;
    for (std::size_t t = 0; t < on_qubits.size(); ++t)
      if ((k >> t) & 1U)
        index |= bit(on_qubits[t]);
    return index;
  };

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const SparseState out =
        simulate(c, SparseState::basis(c.num_qubits(), spread(k)));
    for (const auto &[index, amp] : out.map()) {
      if ((index & ~mask) != fixed)
        continue;
      std::size_t j = 0;
      for (std::size_t t = 0; t < on_qubits.size(); ++t)
        if (index & bit(on_qubits[t]))
          j |= std::size_t{1} << t;
      u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = amp;
    }
  }
  return u;
}

Eigen::MatrixXcd unitary_of(const Circuit &c) {
  std::vector<Qubit> all(c.num_qubits());
  for (Qubit q = 0; q < c.num_qubits(); ++q)
    all[q] = q;
  return unitary_of(c, all, 0);
}

} // namespace bddqsp
