#pragma once

#include "bddqsp/diagram.hpp"
#include "bddqsp/diagram_io.hpp"

namespace fixtures {

/// f = x1 x3 x4 + !x1 x2 x4 + !x1 !x2 !x3 + !x1 x2 !x3 !x4 as an FBDD:
/// r = 2 (x1), u1 = 3 (x2), u2 = 4 (x3), u3 = 5 (x4), u4 = 6 (x3), u5 = 7 (x4).
inline bddqsp::Diagram four_var_fbdd() {
  return bddqsp::parse_diagram(R"(wfbdd v1
nvars 4
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 4
node 3 var 2 e0 6 e1 5
node 4 var 3 e0 0 e1 7
node 5 var 4 e0 6 e1 1
node 6 var 3 e0 1 e1 0
node 7 var 4 e0 0 e1 1
root 2
)");
}

/// Ordered over x1 < x2 < x3 but not reduced: node 6 is redundant and
/// nodes 5 and 7 are equivalent.
inline bddqsp::Diagram unreduced_three_var() {
  return bddqsp::parse_diagram(R"(wfbdd v1
nvars 3
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 4
node 3 var 2 e0 5 e1 6
node 4 var 2 e0 7 e1 8
node 5 var 3 e0 0 e1 1
node 6 var 3 e0 0 e1 0
node 7 var 3 e0 0 e1 1
node 8 var 3 e0 1 e1 0
root 2
)");
}

/// !x1 !x2 x3 + !x1 x2 x4 + x1 !x3 x4 + x1 x2 x3 under x1 < x2 < x3 < x4.
inline bddqsp::Diagram four_term_obdd() {
  return bddqsp::parse_diagram(R"(wfbdd v1
nvars 4
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 4
node 3 var 2 e0 5 e1 6
node 4 var 2 e0 7 e1 8
node 5 var 3 e0 0 e1 1
node 6 var 4 e0 0 e1 1
node 7 var 3 e0 6 e1 0
node 8 var 3 e0 6 e1 1
root 2
)");
}

/// Same function, but the x1 = 1 branch tests x3 before x2.
inline bddqsp::Diagram four_term_fbdd() {
  return bddqsp::parse_diagram(R"(wfbdd v1
nvars 4
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 4
node 3 var 2 e0 5 e1 6
node 4 var 3 e0 6 e1 7
node 5 var 3 e0 0 e1 1
node 6 var 4 e0 0 e1 1
node 7 var 2 e0 0 e1 1
root 2
)");
}

/// x1 or x2.
inline bddqsp::Diagram or2() {
  return bddqsp::parse_diagram(R"(wfbdd v1
nvars 2
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 1
node 3 var 2 e0 0 e1 1
root 2
)");
}

/// f = x1.
inline bddqsp::Diagram single_var() {
  return bddqsp::parse_diagram(R"(wfbdd v1
nvars 1
terminal0 0
terminal1 1
node 2 var 1 e0 0 e1 1
root 2
)");
}

/// Constant 1 over n variables (no 0-terminal, no internal nodes).
inline bddqsp::Diagram tautology(int n) {
  return bddqsp::parse_diagram("wfbdd v1\nnvars " + std::to_string(n) +
                               "\nterminal1 0\nroot 0\n");
}

} // namespace fixtures
