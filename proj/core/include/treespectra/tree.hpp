#pragma once

// Rooted trees of bounded degree with an optional homogeneous tail, and the
// path/boundary vocabulary (arcs, rays, cylinders, confluence) built on them.
//
// A vertex is addressed by its arc from the origin.  Stored ("core") vertices
// carry an index into the model; vertices beyond a tail frontier are virtual
// and are addressed by the core frontier vertex plus the child indices taken
// inside the tail.  Children of a core vertex are ordered by the order in
// which their edges appear in the model description; the q virtual children
// of a frontier vertex (and of every tail vertex) are numbered 0..q-1.

#include <compare>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treespectra/config.hpp"

namespace treespectra {

using Complex = std::complex<double>;
using Address = std::vector<std::uint32_t>;

struct Vertex {
  std::uint32_t core = 0;
  std::vector<std::uint32_t> tail;

  bool is_virtual() const { return !tail.empty(); }
  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// The pair (v|w): at `from`, looking away from the neighbour `to`.
struct DirectedEdge {
  Vertex from;
  Vertex to;
};

struct HomogeneousTail {
  std::vector<std::uint32_t> frontier;  // core indices
  int branching = 1;
  double potential = 0.0;
  double weight = 1.0;
};

struct CoreVertex {
  std::string id;
  int parent = -1;
  std::vector<std::uint32_t> children;
  int depth = 0;
  double potential = 0.0;
  double diagonal = 0.0;
  double parent_weight = 1.0;  // weight of the edge to the parent
  bool frontier = false;
  Address address;
};

// Input form of a model, independent of any file format.
struct ModelDescription {
  struct VertexSpec {
    std::string id;
    double potential = 0.0;
    std::optional<double> diagonal;
  };
  struct EdgeSpec {
    std::string a;
    std::string b;
    std::optional<double> weight;
  };
  struct TailSpec {
    std::vector<std::string> frontier;
    int branching = 1;
    double potential = 0.0;
    std::optional<double> weight;
  };

  int degree_bound = kDefaultDegreeBound;
  std::string origin;
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  std::optional<TailSpec> tail;
};

class TreeModel {
 public:
  // Validates every invariant; throws ModelError.
  explicit TreeModel(const ModelDescription& description);

  int degree_bound() const { return degree_bound_; }
  std::size_t core_size() const { return core_.size(); }
  const CoreVertex& core(std::uint32_t index) const { return core_[index]; }
  int core_radius() const { return core_radius_; }
  std::optional<std::uint32_t> find_core(std::string_view id) const;

  bool has_tail() const { return tail_.has_value(); }
  const std::optional<HomogeneousTail>& tail() const { return tail_; }
  // Closed interval on which the tail has absolutely continuous spectrum.
  std::pair<double, double> tail_band() const;

  Vertex origin() const { return Vertex{}; }
  bool contains(const Vertex& v) const;
  int depth(const Vertex& v) const;
  std::optional<Vertex> parent(const Vertex& v) const;
  std::uint32_t child_count(const Vertex& v) const;
  Vertex child(const Vertex& v, std::uint32_t index) const;
  // Parent first (if any), then children in order.
  std::vector<Vertex> neighbors(const Vertex& v) const;
  std::size_t degree(const Vertex& v) const;
  bool adjacent(const Vertex& a, const Vertex& b) const;

  double diagonal(const Vertex& v) const;
  double potential(const Vertex& v) const;
  // Off-diagonal operator entry p_a(b); a and b must be adjacent.
  double weight(const Vertex& a, const Vertex& b) const;

  Address address(const Vertex& v) const;
  Vertex vertex_at(const Address& address) const;
  // "o" for the origin, otherwise dot-separated child indices ("0.1.0").
  std::string format(const Vertex& v) const;
  Vertex parse_vertex(std::string_view text) const;

  // All vertices with |v| <= radius, in breadth-first order.
  std::vector<Vertex> ball(int radius) const;
  // All vertices with |v| == n.
  std::vector<Vertex> sphere(int n) const;

 private:
  void validate_vertex(const Vertex& v) const;

  int degree_bound_ = kDefaultDegreeBound;
  std::vector<CoreVertex> core_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::optional<HomogeneousTail> tail_;
  int core_radius_ = 0;
};

Address parse_address(std::string_view text);
std::string format_address(const Address& address);

// ---- arcs, rays, cylinders -------------------------------------------------

// The unique non-backtracking path [v, w], endpoints included.
std::vector<Vertex> arc_between(const TreeModel& model, const Vertex& v, const Vertex& w);

// Last common vertex of [o, v] and [o, w].
Vertex meet(const TreeModel& model, const Vertex& v, const Vertex& w);

// A boundary point: a finite prefix from the origin extended by always taking
// child 0.  Two rays are equal iff one prefix extends the other along that
// rule.
struct RayAddress {
  Address prefix;

  friend bool operator==(const RayAddress& a, const RayAddress& b);
};

RayAddress parse_ray(std::string_view text);

// The ray's child index at step `step` (0-based, step k leads to depth k+1).
std::uint32_t ray_step(const RayAddress& ray, std::size_t step);

// Vertex of the ray at the given depth; throws TopologyError if the ray cannot
// be followed that far (invalid child index or a leaf without tail).
Vertex ray_vertex(const TreeModel& model, const RayAddress& ray, int depth);

// Ray vertices at depths 0..depth.
std::vector<Vertex> ray_path(const TreeModel& model, const RayAddress& ray, int depth);

// A ray whose prefix is the address of `through`.
RayAddress ray_through(const TreeModel& model, const Vertex& through);

Vertex confluence(const TreeModel& model, const Vertex& v, const RayAddress& xi);

struct Cylinder {
  Vertex base;        // the set of rays through `base`
  bool full = false;  // the whole boundary
};

bool ray_in_cylinder(const TreeModel& model, const RayAddress& xi, const Cylinder& cylinder);

// All cylinders with base at depth n >= 1.  Throws TopologyError if no vertex
// of depth n exists or the enumeration would exceed kMaxEnumeration.
std::vector<Cylinder> cylinder_partition(const TreeModel& model, int depth);

// Finite model equal to the ball of the given radius (tail unfolded).  Vertex
// addresses are preserved; ids of the new model are the formatted addresses.
TreeModel unfold(const TreeModel& model, int radius);

}  // namespace treespectra
