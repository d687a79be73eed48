#pragma once

// Line-oriented circuit text format:
//
//   qubits <total>
//   prep q<k> 0|1|+
//   H q3 | X q2 | CH q0 q3 | CCX q0 q3 q5 | PHASE q9 <theta>
//   CU q0 q3 <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
//
// Optional metadata lines carry what the verifier needs downstream:
//
//   layout var <i> q<k>        variable x_i lives on q<k>
//   layout node <id> q<k>      internal node <id> lives on q<k>
//   layout terminal q<k>       1-terminal qubit of a phase oracle
//   segment <label> <begin> <end>
//   source <line>              one line of the source diagram file
//
// '#' starts a comment.

#include "bddqsp/circuit.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace bddqsp {

std::string serialize_circuit(const Circuit &c);
Circuit parse_circuit(std::string_view text);
Circuit read_circuit(std::istream &in);

} // namespace bddqsp
