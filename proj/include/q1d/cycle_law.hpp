#pragma once

#include "q1d/ext_real.hpp"
#include "q1d/graph_model.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace q1d {

/// Cycle law induced by a Markov walk on the lattice built from a cell.
struct GraphLaw {
  std::shared_ptr<const Cell> cell;
  /// Decay rate of the interior states between gates: the moment generating
  /// functions of the first gate hit are finite exactly below this bound.
  double interior_bound = 0.0;
  /// Where the cell was loaded from, if anywhere (kept for serialization).
  std::string graph_file;
};

GraphLaw make_graph_law(Cell cell, std::string graph_file = {});

struct DiscreteAtom {
  int sign = +1;
  double duration = 1.0;
  double probability = 0.0;

  friend bool operator==(const DiscreteAtom&, const DiscreteAtom&) = default;
};

struct DiscreteLaw {
  std::vector<DiscreteAtom> atoms;
};

/// w = +1 with probability p; tau | w=+-1 ~ Exp(beta_+-).
struct ExponentialLaw {
  double p = 0.5;
  double beta_plus = 1.0;
  double beta_minus = 1.0;
};

/// tau | w=+-1 ~ Gamma(shape k_+-, rate beta_+-).
struct GammaLaw {
  double p = 0.5;
  double k_plus = 1.0;
  double beta_plus = 1.0;
  double k_minus = 1.0;
  double beta_minus = 1.0;
};

using CycleLaw = std::variant<GraphLaw, DiscreteLaw, ExponentialLaw, GammaLaw>;

/// Checks parameter ranges and that both signs carry mass. Degenerate
/// one-sided laws are only admitted with allow_one_sided.
void validate_law(const CycleLaw& law, bool allow_one_sided = false);

/// (P(w=-1), P(w=+1)).
PlusMinus<double> sign_probabilities(const CycleLaw& law);

std::string describe(const CycleLaw& law);

}  // namespace q1d
