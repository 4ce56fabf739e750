#pragma once

#include <cmath>
#include <random>
#include <string>

#include "treespectra/builders.hpp"
#include "treespectra/green.hpp"
#include "treespectra/tree.hpp"

namespace fixtures {

using treespectra::Complex;

// The 3-regular tree: radius-2 core with a binary tail at the last shell.
inline const treespectra::TreeModel& regular3() {
  static const treespectra::TreeModel m(treespectra::regular_tree_description(2, 2, 0.0, true));
  return m;
}

inline const treespectra::TreeModel& path2() {
  static const treespectra::TreeModel m(treespectra::path_description(2));
  return m;
}

inline treespectra::Vertex at(const treespectra::TreeModel& m, const std::string& address) {
  return m.parse_vertex(address);
}

// Finite trees with at most 200 vertices, degree <= 5, |V| <= 3.
inline treespectra::TreeModel random_finite(std::mt19937_64& rng, bool weighted = false) {
  treespectra::RandomTreeOptions o;
  o.weighted = weighted;
  return treespectra::TreeModel(treespectra::random_tree_description(rng, o));
}

// eta log-uniform in [1e-3, 10], E uniform in [-8, 8].
inline treespectra::SpectralParameter random_gamma(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(-8.0, 8.0);
  std::uniform_real_distribution<double> s(-3.0, 1.0);
  return {e(rng), std::pow(10.0, s(rng))};
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
