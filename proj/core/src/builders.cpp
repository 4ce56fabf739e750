#include "treespectra/builders.hpp"

#include <algorithm>

#include "treespectra/errors.hpp"

namespace treespectra {

ModelDescription regular_tree_description(int q, int radius, double potential, bool with_tail) {
  if (q < 1) throw ModelError("regular tree needs q >= 1");
  if (radius < 0) throw ModelError("radius must be non-negative");
  ModelDescription d;
  d.degree_bound = std::max(q + 1, kDefaultDegreeBound);
  d.origin = "o";
  d.vertices.push_back({"o", potential, std::nullopt});
  std::vector<std::string> shell{"o"};
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::string> next;
    for (const auto& parent : shell) {
      int nc = (r == 1) ? q + 1 : q;
      for (int i = 0; i < nc; ++i) {
        std::string id = (parent == "o" ? std::string() : parent + ".") + std::to_string(i);
        d.vertices.push_back({id, potential, std::nullopt});
        d.edges.push_back({parent, id, std::nullopt});
        next.push_back(std::move(id));
      }
    }
    shell = std::move(next);
  }
  if (with_tail) {
    if (radius == 0) throw ModelError("a regular tail needs radius >= 1 (the origin has q+1 children)");
    d.tail = ModelDescription::TailSpec{shell, q, potential, std::nullopt};
  }
  return d;
}

ModelDescription path_description(std::size_t n, const std::vector<double>& potentials) {
  if (n == 0) throw ModelError("path needs at least one vertex");
  ModelDescription d;
  d.origin = "0";
  for (std::size_t i = 0; i < n; ++i) {
    double v = i < potentials.size() ? potentials[i] : 0.0;
    d.vertices.push_back({std::to_string(i), v, std::nullopt});
    if (i > 0) d.edges.push_back({std::to_string(i - 1), std::to_string(i), std::nullopt});
  }
  return d;
}

ModelDescription random_tree_description(std::mt19937_64& rng, const RandomTreeOptions& opt) {
  if (opt.max_vertices < opt.min_vertices || opt.min_vertices == 0) throw ModelError("bad vertex range");
  if (opt.max_degree < 2) throw ModelError("random trees need max_degree >= 2");
  std::uniform_int_distribution<std::size_t> size_dist(opt.min_vertices, opt.max_vertices);
  std::uniform_real_distribution<double> pot(-opt.potential_bound, opt.potential_bound);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  std::bernoulli_distribution sign(0.5);

  const std::size_t n = size_dist(rng);
  const int q = opt.tail_branching.value_or(0);
  // leaves that receive a tail need room for q more neighbours
  const int core_degree = opt.max_degree;

  ModelDescription d;
  d.degree_bound = opt.max_degree + q;
  d.origin = "0";
  std::vector<int> degree(n, 0);
  std::vector<std::size_t> open{0};
  d.vertices.push_back({"0", pot(rng), std::nullopt});
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    std::size_t slot = pick(rng);
    std::size_t parent = open[slot];
    d.vertices.push_back({std::to_string(k), pot(rng), std::nullopt});
    std::optional<double> w;
    if (opt.weighted) w = sign(rng) ? mag(rng) : -mag(rng);
    d.edges.push_back({std::to_string(parent), std::to_string(k), w});
    if (++degree[parent] >= core_degree) {
      open[slot] = open.back();
      open.pop_back();
    }
    degree[k] = 1;
    if (degree[k] < core_degree) open.push_back(k);
  }
  if (opt.tail_branching) {
    std::vector<bool> has_child(n, false);
    for (const auto& e : d.edges) has_child[std::stoul(e.a)] = true;
    ModelDescription::TailSpec tail;
    tail.branching = q;
    tail.potential = opt.tail_potential;
    for (std::size_t k = 0; k < n; ++k) {
      if (!has_child[k]) tail.frontier.push_back(std::to_string(k));
    }
    d.tail = std::move(tail);
  }
  return d;
}

}  // namespace treespectra
