#include "bddqsp/circuit_io.hpp"

#include "bddqsp/diagram_io.hpp"
#include "bddqsp/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <sstream>

namespace bddqsp {

namespace {

std::string qubit_name(Qubit q) { return "q" + std::to_string(q); }

template <class... Ts> struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::uint32_t parse_uint(std::string_view word, std::size_t line) {
  std::uint32_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size())
    throw ParseError(line, "expected a nonnegative integer, got '" +
                               std::string(word) + "'");
  return value;
}

Qubit parse_qubit(std::string_view word, std::size_t line) {
  if (word.size() < 2 || word[0] != 'q')
    throw ParseError(line, "expected a qubit like 'q3', got '" +
                               std::string(word) + "'");
  return parse_uint(word.substr(1), line);
}

double parse_number(std::string_view word, std::size_t line) {
  try {
    return parse_double(word);
  } catch (const Error &) {
    throw ParseError(line, "expected a number, got '" + std::string(word) + "'");
  }
}

} // namespace

std::string serialize_circuit(const Circuit &c) {
  std::ostringstream out;
  out << "qubits " << c.num_qubits() << '\n';
  for (Qubit q = 0; q < c.num_qubits(); ++q) {
    const Prep p = c.prep(q);
    out << "prep " << qubit_name(q) << ' '
        << (p == Prep::zero ? "0" : p == Prep::one ? "1" : "+") << '\n';
  }
  const QubitLayout &layout = c.layout();
  for (std::size_t i = 0; i < layout.var_qubits.size(); ++i)
    out << "layout var " << i + 1 << ' ' << qubit_name(layout.var_qubits[i])
        << '\n';
  for (const auto &[id, q] : layout.node_qubits)
    out << "layout node " << index_of(id) << ' ' << qubit_name(q) << '\n';
  if (layout.terminal_qubit)
    out << "layout terminal " << qubit_name(*layout.terminal_qubit) << '\n';
  if (c.source()) {
    std::istringstream source(serialize_diagram(*c.source()));
    for (std::string line; std::getline(source, line);)
      out << "source " << line << '\n';
  }
  for (const Segment &s : c.segments())
    out << "segment " << s.label << ' ' << s.begin << ' ' << s.end << '\n';

  for (const Gate &g : c.gates()) {
    std::visit(
        Overloaded{
            [&](const XGate &x) { out << "X " << qubit_name(x.target); },
            [&](const HGate &x) { out << "H " << qubit_name(x.target); },
            [&](const CHGate &x) {
              out << "CH " << qubit_name(x.control) << ' ' << qubit_name(x.target);
            },
            [&](const CUGate &x) {
              out << "CU " << qubit_name(x.control) << ' ' << qubit_name(x.target);
              for (const Amplitude &a : x.matrix)
                out << ' ' << format_double(a.real()) << ' '
                    << format_double(a.imag());
            },
            [&](const CCXGate &x) {
              out << "CCX " << qubit_name(x.control1) << ' '
                  << qubit_name(x.control2) << ' ' << qubit_name(x.target);
            },
            [&](const PhaseGate &x) {
              out << "PHASE " << qubit_name(x.target) << ' '
                  << format_double(x.theta);
            },
        },
        g);
    out << '\n';
  }
  return out.str();
}

Circuit parse_circuit(std::string_view text) {
  std::optional<Circuit> circuit;
  QubitLayout layout;
  std::vector<std::optional<Qubit>> var_qubits;
  std::string source;
  std::vector<Segment> segments;
  std::size_t last_line = 0;

  auto need = [&](std::size_t line) -> Circuit & {
    if (!circuit)
      throw ParseError(line, "expected 'qubits <total>' before other lines");
    return *circuit;
  };
  auto arity = [](const auto &words, std::size_t expected, std::size_t line,
                  std::string_view usage) {
    if (words.size() != expected)
      throw ParseError(line, "expected '" + std::string(usage) + "'");
  };

  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    last_line = line_no;
    if (line.starts_with("source ") || line == "source") {
      need(line_no);
      source += line.size() > 7 ? std::string(line.substr(7)) : std::string();
      source += '\n';
      return;
    }
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const auto words = detail::split_words(line);
    if (words.empty())
      return;
    const std::string_view key = words[0];

    if (key == "qubits") {
      arity(words, 2, line_no, "qubits <total>");
      if (circuit)
        throw ParseError(line_no, "'qubits' given twice");
      const auto total = parse_uint(words[1], line_no);
      if (total > 64)
        throw ParseError(line_no, "at most 64 qubits are supported");
      circuit.emplace(total);
      return;
    }
    Circuit &c = need(line_no);
    auto qubit = [&](std::size_t at) {
      const Qubit q = parse_qubit(words[at], line_no);
      if (q >= c.num_qubits())
        throw ParseError(line_no, "qubit " + std::string(words[at]) +
                                      " out of range");
      return q;
    };
    auto add = [&](const Gate &g) {
      try {
        c.append(g);
      } catch (const InvalidCircuit &e) {
        throw ParseError(line_no, e.what());
      }
    };

    if (key == "prep") {
      arity(words, 3, line_no, "prep q<k> 0|1|+");
      const Qubit q = qubit(1);
      if (words[2] == "0")
        c.set_prep(q, Prep::zero);
      else if (words[2] == "1")
        c.set_prep(q, Prep::one);
      else if (words[2] == "+")
        c.set_prep(q, Prep::plus);
      else
        throw ParseError(line_no, "prep state must be 0, 1 or +");
    } else if (key == "layout") {
      if (words.size() < 2)
        throw ParseError(line_no, "incomplete layout line");
      if (words[1] == "var") {
        arity(words, 4, line_no, "layout var <i> q<k>");
        const auto var = parse_uint(words[2], line_no);
        if (var < 1 || var > static_cast<std::uint32_t>(kMaxVars))
          throw ParseError(line_no, "variable index out of range");
        if (var_qubits.size() < var)
          var_qubits.resize(var);
        var_qubits[var - 1] = qubit(3);
      } else if (words[1] == "node") {
        arity(words, 4, line_no, "layout node <id> q<k>");
        layout.node_qubits.emplace_back(node_id(parse_uint(words[2], line_no)),
                                        qubit(3));
      } else if (words[1] == "terminal") {
        arity(words, 3, line_no, "layout terminal q<k>");
        layout.terminal_qubit = qubit(2);
      } else {
        throw ParseError(line_no, "unknown layout entry '" +
                                      std::string(words[1]) + "'");
      }
    } else if (key == "segment") {
      arity(words, 4, line_no, "segment <label> <begin> <end>");
      segments.push_back({std::string(words[1]), parse_uint(words[2], line_no),
                          parse_uint(words[3], line_no)});
    } else if (key == "X") {
      arity(words, 2, line_no, "X q<t>");
      add(XGate{qubit(1)});
    } else if (key == "H") {
      arity(words, 2, line_no, "H q<t>");
      add(HGate{qubit(1)});
    } else if (key == "CH") {
      arity(words, 3, line_no, "CH q<c> q<t>");
      add(CHGate{qubit(1), qubit(2)});
    } else if (key == "CCX") {
      arity(words, 4, line_no, "CCX q<c1> q<c2> q<t>");
      add(CCXGate{qubit(1), qubit(2), qubit(3)});
    } else if (key == "PHASE") {
      arity(words, 3, line_no, "PHASE q<t> <theta>");
      add(PhaseGate{qubit(1), parse_number(words[2], line_no)});
    } else if (key == "CU") {
      arity(words, 11, line_no, "CU q<c> q<t> <re00> <im00> ... <re11> <im11>");
      Matrix2 m;
      for (std::size_t k = 0; k < 4; ++k)
        m[k] = {parse_number(words[3 + 2 * k], line_no),
                parse_number(words[4 + 2 * k], line_no)};
      add(CUGate{qubit(1), qubit(2), m});
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  });

  if (!circuit)
    throw ParseError(std::max<std::size_t>(last_line, 1), "empty input; expected 'qubits <total>'");
  for (std::size_t i = 0; i < var_qubits.size(); ++i) {
    if (!var_qubits[i])
      throw ParseError(last_line, "layout is missing variable x" +
                                      std::to_string(i + 1));
    layout.var_qubits.push_back(*var_qubits[i]);
  }
  try {
    circuit->set_layout(std::move(layout));
    for (Segment &s : segments)
      circuit->add_segment(std::move(s));
    if (!source.empty())
      circuit->set_source(parse_diagram(source));
  } catch (const ParseError &e) {
    throw ParseError(last_line, std::string("embedded source: ") + e.what());
  } catch (const Error &e) {
    throw ParseError(last_line, e.what());
  }
  return std::move(*circuit);
}

Circuit read_circuit(std::istream &in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return parse_circuit(text);
}

} // namespace bddqsp
