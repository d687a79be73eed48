#include "cli.hpp"

#include "bddqsp/blockenc.hpp"
#include "bddqsp/circuit_io.hpp"
#include "bddqsp/diagram_io.hpp"
#include "bddqsp/errors.hpp"
#include "bddqsp/families.hpp"
#include "bddqsp/random_diagram.hpp"
#include "bddqsp/simulator.hpp"
#include "bddqsp/weighting.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace bddqsp::cli {

namespace {

struct Options {
  std::string input = "-";
  std::string out;
  std::string format = "text";
  std::uint64_t seed = 1;
  double tolerance = 1e-9;

  std::string bits;
  double theta = 0.0;
  bool compare_oracle = false;
  bool dense_check = false;
  bool dump = false;
  bool log = false;
  bool allow_unreduced = false;
  bool emit_circuit = false;

  std::string family;
  int n = 0;
  int i = 0;
  double delta = 0.5;
  std::string encoding;
  std::string controlled = "z";
  std::string suite = "random";
  bool csv = false;
};

/// Failure that maps to exit code 1 after its message is printed.
struct Failure {
  std::string message;
};

class Context {
public:
  Context(const Options &options, std::istream &in, std::ostream &out,
          std::ostream &err)
      : options_(options), in_(in), out_(out), err_(err) {}

  const Options &options() const { return options_; }
  std::ostream &err() { return err_; }

  std::string read_input(const std::string &path) {
    if (path == "-")
      return {std::istreambuf_iterator<char>(in_), std::istreambuf_iterator<char>()};
    std::ifstream file(path, std::ios::binary);
    if (!file)
      throw Failure{"cannot read '" + path + "'"};
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
  }

  Diagram read_diagram_input() {
    const std::string text = read_input(options_.input);
    try {
      return parse_diagram(text);
    } catch (const ParseError &e) {
      throw Failure{options_.input + ": " + e.what()};
    }
  }

  Circuit read_circuit_input() {
    const std::string text = read_input(options_.input);
    try {
      return parse_circuit(text);
    } catch (const ParseError &e) {
      throw Failure{options_.input + ": " + e.what()};
    }
  }

  /// Data sink: --out file when given and not "-", standard output otherwise.
  std::ostream &data() {
    if (options_.out.empty() || options_.out == "-")
      return out_;
    if (!file_) {
      file_ = std::make_unique<std::ofstream>(options_.out, std::ios::binary);
      if (!*file_)
        throw Failure{"cannot write '" + options_.out + "'"};
    }
    return *file_;
  }

private:
  const Options &options_;
  std::istream &in_;
  std::ostream &out_;
  std::ostream &err_;
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double value) { return format_double(value); }

Assignment parse_assignment(const std::string &bits, int n) {
  if (static_cast<int>(bits.size()) != n)
    throw Failure{"--x needs exactly " + std::to_string(n) + " bits"};
  try {
    return parse_bits(bits);
  } catch (const Error &e) {
    throw Failure{e.what()};
  }
}

// ---------------------------------------------------------------------------

int cmd_validate(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  const ValidationReport report = validate(d);
  for (const Violation &v : report.violations)
    ctx.err() << (is_blocking(v.kind) ? "error: " : "warning: ")
              << to_string(v.kind) << ": " << v.message << '\n';
  const bool pass = ctx.options().allow_unreduced ? report.usable() : report.ok();
  ctx.data() << (pass ? "valid" : "invalid") << '\n';
  return pass ? kExitOk : kExitFailure;
}

int cmd_reduce(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  const Reduction r = reduce_with_log(d);
  if (ctx.options().log)
    for (const ReductionStep &s : r.steps)
      ctx.err() << (s.rule == ReductionRule::redundant_node_deletion
                        ? "delete node "
                        : "share node ")
                << index_of(s.removed) << " -> " << index_of(s.replacement)
                << '\n';
  ctx.data() << serialize_diagram(r.diagram);
  return kExitOk;
}

int cmd_eval(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  require_usable(d);
  const Assignment x = parse_assignment(ctx.options().bits, d.num_vars());
  ctx.data() << (evaluate(d, x) ? 1 : 0) << '\n';
  if (d.weighted()) {
    const Weight a = amplitude(d, x);
    ctx.data() << "amplitude " << fmt(a.real()) << ' ' << fmt(a.imag()) << '\n';
  }
  return kExitOk;
}

int cmd_count(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  ctx.data() << model_count(d) << '\n';
  return kExitOk;
}

int cmd_uniform(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  const WeightingResult r = uniform_weights(d);
  ctx.err() << "model count " << r.model_count << ", " << r.query_count
            << " queries (bound " << 6 * d.size() - 2 << ")\n";
  ctx.data() << serialize_diagram(r.diagram);
  return kExitOk;
}

int cmd_synth(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  const Circuit c = synth_state(d);
  const GateCounts k = c.counts();
  ctx.err() << c.num_qubits() << " qubits, " << k.single_qubit()
            << " single-qubit, " << k.two_qubit() << " two-qubit, "
            << k.toffoli() << " Toffoli gates\n";
  ctx.data() << serialize_circuit(c);
  return kExitOk;
}

int cmd_synth_phase(Context &ctx) {
  const Diagram d = ctx.read_diagram_input();
  const Circuit c = synth_phase(d, ctx.options().theta);
  const GateCounts k = c.counts();
  ctx.err() << c.num_qubits() << " qubits, " << k.toffoli() << " Toffoli gates\n";
  ctx.data() << serialize_circuit(c);
  return kExitOk;
}

/// Ancilla expectation after state preparation: root |1>, other nodes |0>.
AncillaSpec state_spec(const Circuit &c) {
  const QubitLayout &l = c.layout();
  AncillaSpec spec;
  spec.system = l.var_qubits;
  const Diagram &d = *c.source();
  for (const auto &[id, q] : l.node_qubits)
    spec.fixed.emplace_back(q, id == d.root());
  if (l.terminal_qubit)
    spec.fixed.emplace_back(*l.terminal_qubit, false);
  return spec;
}

double phase_angle(const Circuit &c) {
  std::optional<double> theta;
  for (const Gate &g : c.gates())
    if (const auto *p = std::get_if<PhaseGate>(&g)) {
      if (theta)
        throw Failure{"phase oracle check expects exactly one PHASE gate"};
      theta = p->theta;
    }
  if (!theta)
    throw Failure{"phase oracle check found no PHASE gate"};
  return *theta;
}

struct OracleCheck {
  double fidelity = 1.0;
  double max_error = 0.0;
  bool ancillas_clean = true;
};

OracleCheck check_state_oracle(const Circuit &c, const SparseState &state) {
  const ComparisonReport r =
      compare(state, brute_force_state(*c.source()), state_spec(c));
  return {r.fidelity, r.max_abs_error, r.ancillas_factor};
}

OracleCheck check_phase_oracle(const Circuit &c) {
  const Diagram &d = *c.source();
  const double theta = phase_angle(c);
  const QubitLayout &l = c.layout();
  if (d.num_vars() > 16)
    throw Failure{"phase oracle check limited to 16 variables"};
  OracleCheck check;
  AncillaSpec spec;
  spec.system = l.var_qubits;
  for (const auto &[id, q] : l.node_qubits)
    spec.fixed.emplace_back(q, false);
  if (l.terminal_qubit)
    spec.fixed.emplace_back(*l.terminal_qubit, false);
  for (Assignment x = 0; x < (Assignment{1} << d.num_vars()); ++x) {
    BasisIndex input = 0;
    for (int v = 1; v <= d.num_vars(); ++v)
      if (bit_of(x, v))
        input |= BasisIndex{1} << l.var_qubits[static_cast<std::size_t>(v - 1)];
    const SparseState out =
        simulate(c, SparseState::basis(c.num_qubits(), input));
    SparseState expected(static_cast<std::uint32_t>(d.num_vars()));
    expected.set(x, std::polar(1.0, evaluate(d, x) ? theta : 0.0));
    const ComparisonReport r = compare(out, expected, spec);
    check.fidelity = std::min(check.fidelity, r.fidelity);
    check.max_error = std::max(check.max_error, r.max_abs_error);
    check.ancillas_clean = check.ancillas_clean && r.ancillas_factor;
  }
  return check;
}

int cmd_sim(Context &ctx) {
  const Options &o = ctx.options();
  const Circuit c = ctx.read_circuit_input();
  SparseState input = initial_state(c);
  if (!o.bits.empty()) {
    const QubitLayout &l = c.layout();
    if (o.bits.size() != l.var_qubits.size())
      throw Failure{"--input needs one bit per variable qubit"};
    SparseState seeded(c.num_qubits());
    for (const auto &[index, a] : input.map()) {
      BasisIndex next = index;
      for (std::size_t v = 0; v < l.var_qubits.size(); ++v) {
        if (o.bits[v] != '0' && o.bits[v] != '1')
          throw Failure{"--input must consist of 0 and 1"};
        const BasisIndex b = BasisIndex{1} << l.var_qubits[v];
        next = o.bits[v] == '1' ? (next | b) : (next & ~b);
      }
      seeded.add(next, a);
    }
    seeded.prune();
    input = std::move(seeded);
  }
  SimulationStats stats;
  const SparseState state = simulate(c, input, {}, &stats);
  ctx.err() << "peak support " << stats.peak_support << ", norm drift "
            << stats.max_norm_drift << '\n';

  bool ok = true;
  if (o.dense_check && c.num_qubits() > kMaxDenseQubits) {
    ctx.err() << "warning: dense check skipped, circuit has " << c.num_qubits()
              << " qubits (limit " << kMaxDenseQubits << ")\n";
  } else if (o.dense_check) {
    const DenseState dense = dense_simulate(c, to_dense(input));
    const double diff = max_entry_difference(state, dense);
    const bool agree = diff <= 1e-12;
    ctx.data() << "dense_check max_difference " << fmt(diff) << ' '
               << (agree ? "PASS" : "FAIL") << '\n';
    ok = ok && agree;
  }
  if (o.compare_oracle) {
    if (!c.source())
      throw Failure{"--compare-oracle needs a circuit carrying its source diagram"};
    const OracleCheck check = c.layout().terminal_qubit
                                  ? check_phase_oracle(c)
                                  : check_state_oracle(c, state);
    const bool pass = check.fidelity >= 1.0 - o.tolerance && check.ancillas_clean;
    ctx.data() << "fidelity " << fmt(check.fidelity) << '\n'
               << "max_abs_error " << fmt(check.max_error) << '\n'
               << "ancillas_clean " << (check.ancillas_clean ? "yes" : "no")
               << '\n'
               << (pass ? "PASS" : "FAIL") << '\n';
    ok = ok && pass;
  }
  if (o.dump || (!o.dense_check && !o.compare_oracle))
    ctx.data() << format_state(state);
  return ok ? kExitOk : kExitFailure;
}

int cmd_family(Context &ctx) {
  const Options &o = ctx.options();
  Diagram d;
  if (o.family == "symmetric")
    d = symmetric_obdd(o.n, o.i);
  else if (o.family == "h")
    d = h_family_fbdd(o.n);
  else
    d = binomial_wobdd(o.n, o.delta);
  ctx.err() << d.internal_count() << " internal nodes\n";
  ctx.data() << serialize_diagram(d);
  return kExitOk;
}

int cmd_ratio(Context &ctx) {
  const Options &o = ctx.options();
  const RatioBreakdown r = amplification_ratio(o.n, o.delta);
  std::ostream &out = ctx.data();
  if (o.format == "csv") {
    out << "n,delta,alpha_l1,a_bar_l2,direct_ratio,closed_form,identity_form,"
           "relative_deviation\n"
        << r.n << ',' << fmt(r.delta) << ',' << fmt(r.alpha_l1) << ','
        << fmt(r.a_bar_l2) << ',' << fmt(r.direct_ratio) << ','
        << fmt(r.closed_form) << ',' << fmt(r.identity_form) << ','
        << fmt(r.relative_deviation) << '\n';
    return kExitOk;
  }
  out << "n " << r.n << "\ndelta " << fmt(r.delta) << "\nalpha_l1 "
      << fmt(r.alpha_l1) << "\na_bar_l2 " << fmt(r.a_bar_l2)
      << "\ndirect_ratio " << fmt(r.direct_ratio) << "\nclosed_form "
      << fmt(r.closed_form) << "\nidentity_form " << fmt(r.identity_form)
      << "\nrelative_deviation " << fmt(r.relative_deviation) << '\n';
  for (int j = 0; j <= r.n; ++j)
    out << "weight " << j << " a_bar " << fmt(r.a_bar[static_cast<std::size_t>(j)])
        << " alpha " << fmt(r.alpha[static_cast<std::size_t>(j)]) << '\n';
  return kExitOk;
}

int cmd_blockenc(Context &ctx) {
  const Options &o = ctx.options();
  const Diagram d = ctx.read_diagram_input();
  BlockEncoding enc;
  Eigen::MatrixXcd target;
  if (o.encoding == "projector") {
    enc = projector_encoding(d);
    target = projector_target(d);
  } else {
    const ControlledFamily fam = o.controlled == "identity"
                                     ? ControlledFamily::identity(d.num_vars())
                                     : ControlledFamily::pauli_z(d.num_vars());
    enc = gram_encoding(d, fam);
    target = gram_target(d, fam);
  }
  ctx.err() << enc.circuit.num_qubits() << " qubits, " << enc.ancilla_count
            << " ancillas\n";
  if (o.emit_circuit) {
    ctx.data() << serialize_circuit(enc.circuit);
    return kExitOk;
  }
  const BlockVerification v = verify_block(enc, target);
  if (!v.verified) {
    ctx.err() << "warning: verification skipped: " << v.note << '\n';
    ctx.data() << serialize_circuit(enc.circuit);
    return kExitOk;
  }
  const Eigen::MatrixXcd block = extract_block(enc);
  for (Eigen::Index r = 0; r < block.rows(); ++r)
    for (Eigen::Index c = 0; c < block.cols(); ++c)
      ctx.data() << r << ' ' << c << ' ' << fmt(block(r, c).real()) << ' '
                 << fmt(block(r, c).imag()) << '\n';
  const bool pass = v.error <= o.tolerance;
  ctx.err() << "block error " << v.error << (pass ? " (ok)" : " (FAIL)") << '\n';
  return pass ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// bench

struct BenchCase {
  std::string name;
  Diagram diagram; // weighted
};

std::vector<BenchCase> bench_suite(const std::string &suite, std::uint64_t seed) {
  std::vector<BenchCase> cases;
  if (suite == "random") {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 20; ++k) {
      RandomDiagramOptions opt;
      opt.num_vars = 2 + k % 5;
      opt.max_internal = 12;
      cases.push_back({"random-" + std::to_string(k), random_wfbdd(rng, opt)});
    }
  } else if (suite == "families") {
    for (int n = 4; n <= 10; n += 2)
      cases.push_back({"symmetric-" + std::to_string(n),
                       uniform_weights(symmetric_obdd(n, n / 2)).diagram});
    for (int n = 2; n <= 8; n += 2)
      cases.push_back({"binomial-" + std::to_string(n), binomial_wobdd(n, 0.5)});
    for (int n = 1; n <= 2; ++n)
      cases.push_back({"h-" + std::to_string(n),
                       uniform_weights(h_family_fbdd(n)).diagram});
  } else {
    throw Failure{"unknown suite '" + suite + "' (expected random or families)"};
  }
  return cases;
}

int cmd_bench(Context &ctx) {
  const Options &o = ctx.options();
  const auto cases = bench_suite(o.suite, o.seed);
  std::ostream &out = ctx.data();
  const bool csv = o.csv || o.format == "csv";
  if (csv)
    out << "name,n,V,E,1q,2q,toffolis,ancillas,fidelity,wall_time_ms\n";
  bool ok = true;
  for (const BenchCase &bc : cases) {
    const auto start = std::chrono::steady_clock::now();
    const Circuit c = synth_state(bc.diagram);
    const SparseState state = simulate(c);
    const ComparisonReport r =
        compare(state, brute_force_state(bc.diagram), state_spec(c));
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    const GateCounts k = c.counts();
    ok = ok && r.fidelity >= 1.0 - o.tolerance && r.ancillas_factor;
    std::ostringstream ms_text;
    ms_text << std::fixed << std::setprecision(3) << ms;
    if (csv)
      out << bc.name << ',' << bc.diagram.num_vars() << ',' << bc.diagram.size()
          << ',' << bc.diagram.edge_count() << ',' << k.single_qubit() << ','
          << k.two_qubit() << ',' << k.toffoli() << ','
          << c.layout().node_qubits.size() << ',' << fmt(r.fidelity) << ','
          << ms_text.str() << '\n';
    else
      out << bc.name << ": n=" << bc.diagram.num_vars()
          << " |V|=" << bc.diagram.size() << " |E|=" << bc.diagram.edge_count()
          << " 1q=" << k.single_qubit() << " 2q=" << k.two_qubit()
          << " toffoli=" << k.toffoli()
          << " ancillas=" << c.layout().node_qubits.size()
          << " fidelity=" << fmt(r.fidelity) << " time_ms=" << ms_text.str()
          << '\n';
  }
  return ok ? kExitOk : kExitFailure;
}

std::uint64_t default_seed() {
  if (const char *env = std::getenv("BDDQSP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
    }
  }
  return 1;
}

} // namespace

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
        std::ostream &err) {
  Options o;
  o.seed = default_seed();

  CLI::App app{"Compile weighted free binary decision diagrams to quantum "
               "circuits and verify them by simulation.",
               "bddqsp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto add_common = [&](CLI::App *sub, bool takes_input) {
    if (takes_input)
      sub->add_option("file", o.input, "Input file, '-' for standard input")
          ->required();
    sub->add_option("--out,-o", o.out, "Output file, '-' for standard output");
    sub->add_option("--seed", o.seed, "Random seed (default: $BDDQSP_SEED or 1)");
    sub->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"text", "csv"}));
    sub->add_option("--tolerance", o.tolerance, "Verification tolerance")
        ->check(CLI::PositiveNumber);
  };

  std::function<int(Context &)> action;
  auto command = [&](const std::string &name, const std::string &help,
                     std::function<int(Context &)> fn, bool takes_input = true) {
    CLI::App *sub = app.add_subcommand(name, help);
    add_common(sub, takes_input);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  auto *validate_cmd = command("validate", "Check a diagram file", cmd_validate);
  validate_cmd->add_flag("--allow-unreduced", o.allow_unreduced,
                         "Only fail on violations that block state operations");
  command("reduce", "Apply the contraction rules", cmd_reduce)
      ->add_flag("--log", o.log, "Print every contraction step");
  command("eval", "Evaluate the function (and amplitude) on one input", cmd_eval)
      ->add_option("--x", o.bits, "Input bits, x1 first")
      ->required();
  command("count", "Print the model count", cmd_count);
  command("uniform", "Weight a diagram for the uniform superposition", cmd_uniform);
  command("synth", "Synthesize the state preparation circuit", cmd_synth);
  command("synth-phase", "Synthesize the phase oracle", cmd_synth_phase)
      ->add_option("--theta", o.theta, "Phase angle in radians")
      ->required();
  auto *sim = command("sim", "Simulate a circuit file", cmd_sim);
  sim->add_flag("--compare-oracle", o.compare_oracle,
                "Compare against the amplitude oracle of the embedded diagram");
  sim->add_flag("--dense-check", o.dense_check,
                "Cross-check against the dense simulator");
  sim->add_flag("--dump", o.dump, "Print the state even when checking");
  sim->add_option("--input", o.bits, "Basis input for the variable qubits, x1 first");

  auto *family = command("family", "Emit a constructive diagram family", cmd_family,
                         false);
  family->add_option("name", o.family, "symmetric, h or binomial")
      ->required()
      ->check(CLI::IsMember({"symmetric", "h", "binomial"}));
  family->add_option("--n", o.n, "Size parameter")->required();
  family->add_option("--i", o.i, "Target count for the symmetric family");
  family->add_option("--delta", o.delta, "Decay for the binomial family");

  auto *ratio = command("ratio", "Amplitude amplification ratio breakdown",
                        cmd_ratio, false);
  ratio->add_option("--n", o.n, "Qubit count")->required();
  ratio->add_option("--delta", o.delta, "Decay in [0, 1]")->required();

  auto *blockenc = app.add_subcommand("blockenc", "Block-encoding constructions");
  blockenc->add_option("encoding", o.encoding, "projector or gram")
      ->required()
      ->check(CLI::IsMember({"projector", "gram"}));
  add_common(blockenc, true);
  blockenc->add_option("--family", o.controlled, "Controlled family for gram")
      ->check(CLI::IsMember({"z", "identity"}));
  blockenc->add_flag("--circuit", o.emit_circuit,
                     "Emit the encoding circuit instead of the block");
  blockenc->callback([&action] { action = cmd_blockenc; });

  auto *bench = command("bench", "Synthesize and verify a benchmark suite",
                        cmd_bench, false);
  bench->add_option("--suite", o.suite, "random or families");
  bench->add_flag("--csv", o.csv, "CSV output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx(o, in, out, err);
  try {
    return action(ctx);
  } catch (const Failure &f) {
    err << "error: " << f.message << '\n';
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitFailure;
}

} // namespace bddqsp::cli
