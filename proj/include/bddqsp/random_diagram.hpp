#pragma once

#include "bddqsp/diagram.hpp"

#include <random>

namespace bddqsp {

struct RandomDiagramOptions {
  int num_vars = 4;
  int min_internal = 1;
  int max_internal = 12;
  /// Chance of closing a branch early with a terminal.
  double terminal_probability = 0.2;
  /// Chance of reusing an existing compatible node instead of a fresh one.
  double share_probability = 0.3;
};

/// Seeded random reduced FBDD. Branches pick their variable independently,
/// so different paths generally test variables in different orders.
Diagram random_fbdd(std::mt19937_64 &rng, const RandomDiagramOptions &options);

/// Random complex weights with magnitudes in [0.1, 1.5]; edges into the
/// 0-terminal get weight zero. Marks the diagram weighted.
void assign_random_weights(Diagram &d, std::mt19937_64 &rng);

Diagram random_wfbdd(std::mt19937_64 &rng, const RandomDiagramOptions &options);

} // namespace bddqsp
