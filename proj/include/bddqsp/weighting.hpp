#pragma once

#include "bddqsp/diagram.hpp"

#include <cstdint>
#include <vector>

namespace bddqsp {

struct WeightingResult {
  Diagram diagram;
  std::uint64_t query_count = 0;
  std::uint64_t model_count = 0;
  /// X_u per node id: variables tested nowhere in the sub-diagram below u
  /// (terminals hold every variable).
  std::vector<VarSet> unassigned;
};

/// Assigns weights so that the diagram describes the uniform superposition
/// over the satisfying inputs. Weights on an already weighted input are
/// ignored. Throws Unsatisfiable when the 1-terminal is unreachable and
/// InvalidDiagram on blocking violations.
WeightingResult uniform_weights(const Diagram &d);

/// Number of satisfying inputs; 0 for an unsatisfiable diagram.
std::uint64_t model_count(const Diagram &d);

} // namespace bddqsp
