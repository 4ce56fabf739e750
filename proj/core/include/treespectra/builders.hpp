#pragma once

#include <optional>
#include <random>

#include "treespectra/tree.hpp"

namespace treespectra {

// Ball of the given radius in the (q+1)-regular tree with constant potential.
// With `with_tail` the sphere of that radius becomes the frontier of a q-ary
// tail, so the model is the full infinite regular tree.
ModelDescription regular_tree_description(int q, int radius, double potential = 0.0, bool with_tail = true);

// Path o - 1 - ... - (n-1); potentials default to zero.
ModelDescription path_description(std::size_t n, const std::vector<double>& potentials = {});

struct RandomTreeOptions {
  std::size_t min_vertices = 1;
  std::size_t max_vertices = 200;
  int max_degree = 5;
  double potential_bound = 3.0;  // potentials uniform in [-bound, bound]
  bool weighted = false;         // weights uniform in [-2,-0.1] U [0.1,2]
  std::optional<int> tail_branching;  // attach a tail at every core leaf
  double tail_potential = 0.0;
};

// Random recursive tree: vertex k attaches to a uniformly chosen earlier
// vertex that still has spare degree.
ModelDescription random_tree_description(std::mt19937_64& rng, const RandomTreeOptions& options);

}  // namespace treespectra
