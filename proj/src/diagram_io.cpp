#include "bddqsp/diagram_io.hpp"

#include "bddqsp/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <map>
#include <sstream>
#include <vector>

namespace bddqsp {

namespace {

std::uint32_t parse_id(std::string_view word, std::size_t line) {
  std::uint32_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size())
    throw ParseError(line, "expected a nonnegative integer, got '" +
                               std::string(word) + "'");
  return value;
}

double parse_weight_part(std::string_view word, std::size_t line) {
  try {
    return parse_double(word);
  } catch (const Error &) {
    throw ParseError(line, "expected a number, got '" + std::string(word) + "'");
  }
}

} // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general, 17);
  if (ec != std::errc{})
    throw Error("cannot format number");
  return std::string(buffer, ptr);
}

double parse_double(std::string_view text) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                         value, std::chars_format::general);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error("not a number: '" + std::string(text) + "'");
  return value;
}

Diagram parse_diagram(std::string_view text) {
  std::map<std::uint32_t, Node> nodes;
  std::optional<int> nvars;
  std::optional<std::uint32_t> root;
  std::optional<bool> weighted;
  bool header = false;

  auto define = [&](std::uint32_t id, Node node, std::size_t line) {
    if (!nodes.emplace(id, node).second)
      throw ParseError(line, "node id " + std::to_string(id) + " defined twice");
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const auto words = detail::split_words(line);
    if (words.empty())
      continue;

    if (!header) {
      if (words.size() != 2 || words[0] != "wfbdd" || words[1] != "v1")
        throw ParseError(line_no, "expected header 'wfbdd v1'");
      header = true;
      continue;
    }

    const std::string_view key = words[0];
    if (key == "nvars") {
      if (words.size() != 2)
        throw ParseError(line_no, "expected 'nvars <n>'");
      if (nvars)
        throw ParseError(line_no, "nvars given twice");
      const auto n = parse_id(words[1], line_no);
      if (n > static_cast<std::uint32_t>(kMaxVars))
        throw ParseError(line_no, "at most " + std::to_string(kMaxVars) +
                                      " variables are supported");
      nvars = static_cast<int>(n);
    } else if (key == "terminal0" || key == "terminal1") {
      if (words.size() != 2)
        throw ParseError(line_no, "expected '" + std::string(key) + " <id>'");
      define(parse_id(words[1], line_no), Node::terminal(key == "terminal1"),
             line_no);
    } else if (key == "root") {
      if (words.size() != 2)
        throw ParseError(line_no, "expected 'root <id>'");
      if (root)
        throw ParseError(line_no, "root given twice");
      root = parse_id(words[1], line_no);
    } else if (key == "node") {
      const bool has_weights = words.size() == 12;
      if (!(words.size() == 8 || has_weights) || words[2] != "var")
        throw ParseError(line_no,
                         "expected 'node <id> var <i> e0 <head> [<re> <im>] "
                         "e1 <head> [<re> <im>]'");
      if (weighted && *weighted != has_weights)
        throw ParseError(line_no, "weighted and unweighted node lines are mixed");
      weighted = has_weights;
      const std::size_t e1_at = has_weights ? 8 : 6;
      if (words[4] != "e0" || words[e1_at] != "e1")
        throw ParseError(line_no, "expected edge labels 'e0' and 'e1'");
      const auto id = parse_id(words[1], line_no);
      const auto var = parse_id(words[3], line_no);
      Edge e0{node_id(parse_id(words[5], line_no)), {}};
      Edge e1{node_id(parse_id(words[e1_at + 1], line_no)), {}};
      if (has_weights) {
        e0.weight = {parse_weight_part(words[6], line_no),
                     parse_weight_part(words[7], line_no)};
        e1.weight = {parse_weight_part(words[10], line_no),
                     parse_weight_part(words[11], line_no)};
      }
      define(id, Node::internal(static_cast<int>(var), e0, e1), line_no);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }

  if (!header)
    throw ParseError(std::max<std::size_t>(line_no, 1), "empty input; expected header 'wfbdd v1'");
  if (!nvars)
    throw ParseError(line_no, "missing 'nvars' line");
  if (!root)
    throw ParseError(line_no, "missing 'root' line");

  std::vector<Node> table;
  table.reserve(nodes.size());
  for (const auto &[id, node] : nodes) {
    if (id != table.size())
      throw ParseError(line_no, "node ids must be dense; id " +
                                    std::to_string(table.size()) +
                                    " is missing");
    table.push_back(node);
  }
  return Diagram(*nvars, std::move(table), node_id(*root), weighted.value_or(false));
}

Diagram read_diagram(std::istream &in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return parse_diagram(text);
}

std::string serialize_diagram(const Diagram &d) {
  std::ostringstream out;
  out << "wfbdd v1\n";
  out << "nvars " << d.num_vars() << '\n';
  for (std::uint32_t i = 0; i < d.size(); ++i) {
    const NodeKind kind = d.nodes()[i].kind;
    if (kind != NodeKind::internal)
      out << (kind == NodeKind::terminal0 ? "terminal0 " : "terminal1 ") << i
          << '\n';
  }
  for (std::uint32_t i = 0; i < d.size(); ++i) {
    const Node &node = d.nodes()[i];
    if (!node.is_internal())
      continue;
    out << "node " << i << " var " << node.var;
    for (int b = 0; b < 2; ++b) {
      out << " e" << b << ' ' << index_of(node.head(b));
      if (d.weighted())
        out << ' ' << format_double(node.weight(b).real()) << ' '
            << format_double(node.weight(b).imag());
    }
    out << '\n';
  }
  out << "root " << index_of(d.root()) << '\n';
  return out.str();
}

} // namespace bddqsp
