#pragma once

// Line-oriented text format:
//
//   wfbdd v1
//   nvars <n>
//   terminal0 <id>          (optional)
//   terminal1 <id>
//   node <id> var <i> e0 <head> [<re> <im>] e1 <head> [<re> <im>]
//   root <id>
//
// '#' starts a comment. Node lines may come in any order; ids must cover
// 0..N-1 exactly. A file is weighted iff its node lines carry weights, and
// all node lines must agree. Weights are written with 17 significant digits
// so that a round trip is bit-exact.

#include "bddqsp/diagram.hpp"

#include <istream>
#include <string>
#include <string_view>

namespace bddqsp {

Diagram parse_diagram(std::string_view text);
Diagram read_diagram(std::istream &in);
std::string serialize_diagram(const Diagram &d);

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double value);
/// Full-string decimal parse; throws Error on trailing garbage.
double parse_double(std::string_view text);

} // namespace bddqsp
