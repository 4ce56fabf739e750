#include "treespectra/tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <set>

#include "treespectra/errors.hpp"

namespace treespectra {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

TreeModel::TreeModel(const ModelDescription& d) : degree_bound_(d.degree_bound) {
  if (degree_bound_ < 1) throw ModelError("degree_bound must be at least 1");
  if (d.vertices.empty()) throw ModelError("model has no vertices");

  std::unordered_map<std::string, std::size_t> raw_index;
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    const auto& vs = d.vertices[i];
    if (vs.id.empty()) throw ModelError("vertex with empty id");
    if (!raw_index.emplace(vs.id, i).second) throw ModelError("duplicate vertex id '" + vs.id + "'");
    if (!finite(vs.potential)) throw ModelError("non-finite potential at '" + vs.id + "'");
    if (vs.diagonal && !finite(*vs.diagonal)) throw ModelError("non-finite diagonal at '" + vs.id + "'");
  }
  auto origin_it = raw_index.find(d.origin);
  if (origin_it == raw_index.end()) throw ModelError("origin '" + d.origin + "' is not a vertex");

  const std::size_t n = d.vertices.size();
  if (d.edges.size() != n - 1) {
    throw ModelError("not a tree: " + std::to_string(d.edges.size()) + " edges for " + std::to_string(n) +
                     " vertices");
  }

  // adjacency in edge order, carrying the edge weight
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : d.edges) {
    auto ia = raw_index.find(e.a);
    auto ib = raw_index.find(e.b);
    if (ia == raw_index.end() || ib == raw_index.end()) {
      throw ModelError("edge references unknown vertex '" + (ia == raw_index.end() ? e.a : e.b) + "'");
    }
    if (ia->second == ib->second) throw ModelError("not a tree: self-loop at '" + e.a + "'");
    auto key = std::minmax(ia->second, ib->second);
    if (!seen.insert(key).second) throw ModelError("not a tree: duplicate edge " + e.a + "-" + e.b);
    double w = e.weight.value_or(1.0);
    if (!finite(w) || w == 0.0) throw ModelError("edge " + e.a + "-" + e.b + " has zero or non-finite weight");
    adj[ia->second].emplace_back(ib->second, w);
    adj[ib->second].emplace_back(ia->second, w);
  }

  // breadth-first reindexing from the origin
  std::vector<int> new_index(n, -1);
  std::deque<std::size_t> queue{origin_it->second};
  new_index[origin_it->second] = 0;
  core_.reserve(n);
  {
    const auto& vs = d.vertices[origin_it->second];
    CoreVertex root;
    root.id = vs.id;
    root.potential = vs.potential;
    root.diagonal = vs.diagonal.value_or(vs.potential);
    core_.push_back(std::move(root));
  }
  while (!queue.empty()) {
    std::size_t raw = queue.front();
    queue.pop_front();
    auto self = static_cast<std::uint32_t>(new_index[raw]);
    for (auto [nb, w] : adj[raw]) {
      if (new_index[nb] >= 0) continue;
      auto idx = static_cast<std::uint32_t>(core_.size());
      new_index[nb] = static_cast<int>(idx);
      const auto& vs = d.vertices[nb];
      CoreVertex cv;
      cv.id = vs.id;
      cv.parent = static_cast<int>(self);
      cv.depth = core_[self].depth + 1;
      cv.potential = vs.potential;
      cv.diagonal = vs.diagonal.value_or(vs.potential);
      cv.parent_weight = w;
      cv.address = core_[self].address;
      cv.address.push_back(static_cast<std::uint32_t>(core_[self].children.size()));
      core_[self].children.push_back(idx);
      core_.push_back(std::move(cv));
      queue.push_back(nb);
    }
  }
  if (core_.size() != n) throw ModelError("not a tree: graph is disconnected");

  for (std::uint32_t i = 0; i < core_.size(); ++i) {
    index_.emplace(core_[i].id, i);
    core_radius_ = std::max(core_radius_, core_[i].depth);
  }

  if (d.tail) {
    const auto& ts = *d.tail;
    HomogeneousTail tail;
    if (ts.branching < 1) throw ModelError("tail branching must be at least 1");
    if (!finite(ts.potential)) throw ModelError("non-finite tail potential");
    tail.branching = ts.branching;
    tail.potential = ts.potential;
    tail.weight = ts.weight.value_or(1.0);
    if (!finite(tail.weight) || tail.weight == 0.0) throw ModelError("tail weight must be finite and nonzero");
    if (ts.frontier.empty()) throw ModelError("tail frontier is empty");
    for (const auto& id : ts.frontier) {
      auto it = index_.find(id);
      if (it == index_.end()) throw ModelError("tail frontier references unknown vertex '" + id + "'");
      auto& cv = core_[it->second];
      if (cv.frontier) throw ModelError("duplicate frontier vertex '" + id + "'");
      if (!cv.children.empty()) throw ModelError("frontier vertex '" + id + "' has stored forward children");
      cv.frontier = true;
      tail.frontier.push_back(it->second);
    }
    std::sort(tail.frontier.begin(), tail.frontier.end());
    if (tail.branching + 1 > degree_bound_) throw ModelError("degree bound violated inside the tail");
    tail_ = std::move(tail);
  }

  for (const auto& cv : core_) {
    std::size_t deg = cv.children.size() + (cv.parent >= 0 ? 1 : 0) +
                      (cv.frontier ? static_cast<std::size_t>(tail_->branching) : 0);
    if (deg > static_cast<std::size_t>(degree_bound_)) {
      throw ModelError("degree bound violated at '" + cv.id + "' (degree " + std::to_string(deg) + " > " +
                       std::to_string(degree_bound_) + ")");
    }
  }
}

std::optional<std::uint32_t> TreeModel::find_core(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<double, double> TreeModel::tail_band() const {
  if (!tail_) throw ParameterError("model has no homogeneous tail, so no closed-form band");
  double half = 2.0 * std::abs(tail_->weight) * std::sqrt(static_cast<double>(tail_->branching));
  return {tail_->potential - half, tail_->potential + half};
}

bool TreeModel::contains(const Vertex& v) const {
  if (v.core >= core_.size()) return false;
  if (v.tail.empty()) return true;
  if (!core_[v.core].frontier) return false;
  auto q = static_cast<std::uint32_t>(tail_->branching);
  return std::all_of(v.tail.begin(), v.tail.end(), [q](std::uint32_t i) { return i < q; });
}

void TreeModel::validate_vertex(const Vertex& v) const {
  if (!contains(v)) throw TopologyError("vertex is not part of the model");
}

int TreeModel::depth(const Vertex& v) const {
  return core_[v.core].depth + static_cast<int>(v.tail.size());
}

std::optional<Vertex> TreeModel::parent(const Vertex& v) const {
  if (!v.tail.empty()) {
    Vertex p = v;
    p.tail.pop_back();
    return p;
  }
  int p = core_[v.core].parent;
  if (p < 0) return std::nullopt;
  return Vertex{static_cast<std::uint32_t>(p), {}};
}

std::uint32_t TreeModel::child_count(const Vertex& v) const {
  if (!v.tail.empty() || core_[v.core].frontier) return static_cast<std::uint32_t>(tail_->branching);
  return static_cast<std::uint32_t>(core_[v.core].children.size());
}

Vertex TreeModel::child(const Vertex& v, std::uint32_t index) const {
  if (index >= child_count(v)) {
    throw TopologyError("vertex " + format(v) + " has no child " + std::to_string(index));
  }
  if (v.tail.empty() && !core_[v.core].frontier) return Vertex{core_[v.core].children[index], {}};
  Vertex c = v;
  c.tail.push_back(index);
  return c;
}

std::vector<Vertex> TreeModel::neighbors(const Vertex& v) const {
  std::vector<Vertex> out;
  if (auto p = parent(v)) out.push_back(std::move(*p));
  std::uint32_t nc = child_count(v);
  for (std::uint32_t i = 0; i < nc; ++i) out.push_back(child(v, i));
  return out;
}

std::size_t TreeModel::degree(const Vertex& v) const {
  return child_count(v) + (depth(v) > 0 ? 1 : 0);
}

bool TreeModel::adjacent(const Vertex& a, const Vertex& b) const {
  auto pa = parent(a);
  if (pa && *pa == b) return true;
  auto pb = parent(b);
  return pb && *pb == a;
}

double TreeModel::diagonal(const Vertex& v) const {
  return v.tail.empty() ? core_[v.core].diagonal : tail_->potential;
}

double TreeModel::potential(const Vertex& v) const {
  return v.tail.empty() ? core_[v.core].potential : tail_->potential;
}

double TreeModel::weight(const Vertex& a, const Vertex& b) const {
  if (a.tail.empty() && b.tail.empty()) {
    if (core_[b.core].parent == static_cast<int>(a.core)) return core_[b.core].parent_weight;
    if (core_[a.core].parent == static_cast<int>(b.core)) return core_[a.core].parent_weight;
    throw TopologyError("weight requested for non-adjacent vertices " + format(a) + ", " + format(b));
  }
  if (!adjacent(a, b)) {
    throw TopologyError("weight requested for non-adjacent vertices " + format(a) + ", " + format(b));
  }
  return tail_->weight;
}

Address TreeModel::address(const Vertex& v) const {
  Address a = core_[v.core].address;
  a.insert(a.end(), v.tail.begin(), v.tail.end());
  return a;
}

Vertex TreeModel::vertex_at(const Address& address) const {
  Vertex v = origin();
  for (auto i : address) v = child(v, i);
  return v;
}

std::string TreeModel::format(const Vertex& v) const { return format_address(address(v)); }

Vertex TreeModel::parse_vertex(std::string_view text) const { return vertex_at(parse_address(text)); }

std::vector<Vertex> TreeModel::ball(int radius) const {
  std::vector<Vertex> out;
  if (radius < 0) return out;
  out.push_back(origin());
  for (std::size_t head = 0; head < out.size(); ++head) {
    if (depth(out[head]) >= radius) continue;
    std::uint32_t nc = child_count(out[head]);
    for (std::uint32_t i = 0; i < nc; ++i) {
      out.push_back(child(out[head], i));
      if (out.size() > kMaxEnumeration) throw TopologyError("ball enumeration exceeds the configured limit");
    }
  }
  return out;
}

std::vector<Vertex> TreeModel::sphere(int n) const {
  std::vector<Vertex> out;
  for (auto& v : ball(n)) {
    if (depth(v) == n) out.push_back(std::move(v));
  }
  return out;
}

Address parse_address(std::string_view text) {
  Address out;
  if (text.empty() || text == "o") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    std::string_view part = text.substr(pos, dot - pos);
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw TopologyError("malformed vertex address '" + std::string(text) + "'");
    }
    out.push_back(value);
    pos = dot + 1;
  }
  return out;
}

std::string format_address(const Address& address) {
  if (address.empty()) return "o";
  std::string s;
  for (std::size_t i = 0; i < address.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(address[i]);
  }
  return s;
}

std::vector<Vertex> arc_between(const TreeModel& model, const Vertex& v, const Vertex& w) {
  if (!model.contains(v) || !model.contains(w)) throw TopologyError("arc endpoint is not in the model");
  std::vector<Vertex> head{v};
  std::vector<Vertex> rear{w};
  while (model.depth(head.back()) > model.depth(rear.back())) head.push_back(*model.parent(head.back()));
  while (model.depth(rear.back()) > model.depth(head.back())) rear.push_back(*model.parent(rear.back()));
  while (head.back() != rear.back()) {
    head.push_back(*model.parent(head.back()));
    rear.push_back(*model.parent(rear.back()));
  }
  rear.pop_back();
  head.insert(head.end(), rear.rbegin(), rear.rend());
  return head;
}

Vertex meet(const TreeModel& model, const Vertex& v, const Vertex& w) {
  Vertex a = v;
  Vertex b = w;
  while (model.depth(a) > model.depth(b)) a = *model.parent(a);
  while (model.depth(b) > model.depth(a)) b = *model.parent(b);
  while (a != b) {
    a = *model.parent(a);
    b = *model.parent(b);
  }
  return a;
}

bool operator==(const RayAddress& a, const RayAddress& b) {
  auto trimmed = [](const Address& p) {
    std::size_t n = p.size();
    while (n > 0 && p[n - 1] == 0) --n;
    return n;
  };
  std::size_t na = trimmed(a.prefix);
  std::size_t nb = trimmed(b.prefix);
  return na == nb && std::equal(a.prefix.begin(), a.prefix.begin() + static_cast<std::ptrdiff_t>(na),
                                b.prefix.begin());
}

RayAddress parse_ray(std::string_view text) { return RayAddress{parse_address(text)}; }

std::uint32_t ray_step(const RayAddress& ray, std::size_t step) {
  return step < ray.prefix.size() ? ray.prefix[step] : 0u;
}

Vertex ray_vertex(const TreeModel& model, const RayAddress& ray, int depth) {
  Vertex v = model.origin();
  for (int k = 0; k < depth; ++k) {
    std::uint32_t idx = ray_step(ray, static_cast<std::size_t>(k));
    if (idx >= model.child_count(v)) {
      throw TopologyError("ray " + format_address(ray.prefix) + " cannot be followed to depth " +
                          std::to_string(depth));
    }
    v = model.child(v, idx);
  }
  return v;
}

std::vector<Vertex> ray_path(const TreeModel& model, const RayAddress& ray, int depth) {
  std::vector<Vertex> out{model.origin()};
  for (int k = 0; k < depth; ++k) {
    std::uint32_t idx = ray_step(ray, static_cast<std::size_t>(k));
    if (idx >= model.child_count(out.back())) {
      throw TopologyError("ray " + format_address(ray.prefix) + " cannot be followed to depth " +
                          std::to_string(depth));
    }
    out.push_back(model.child(out.back(), idx));
  }
  return out;
}

RayAddress ray_through(const TreeModel& model, const Vertex& through) {
  return RayAddress{model.address(through)};
}

Vertex confluence(const TreeModel& model, const Vertex& v, const RayAddress& xi) {
  Address a = model.address(v);
  std::size_t common = 0;
  while (common < a.size() && a[common] == ray_step(xi, common)) ++common;
  Vertex out = v;
  for (std::size_t k = common; k < a.size(); ++k) out = *model.parent(out);
  return out;
}

bool ray_in_cylinder(const TreeModel& model, const RayAddress& xi, const Cylinder& cylinder) {
  if (cylinder.full) return true;
  Address a = model.address(cylinder.base);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != ray_step(xi, k)) return false;
  }
  return true;
}

std::vector<Cylinder> cylinder_partition(const TreeModel& model, int depth) {
  if (depth < 1) throw TopologyError("cylinder depth must be at least 1");
  auto shell = model.sphere(depth);
  if (shell.empty()) throw TopologyError("no vertices at depth " + std::to_string(depth));
  std::vector<Cylinder> out;
  out.reserve(shell.size());
  for (auto& v : shell) out.push_back(Cylinder{std::move(v), false});
  return out;
}

TreeModel unfold(const TreeModel& model, int radius) {
  ModelDescription d;
  d.degree_bound = model.degree_bound();
  auto ball = model.ball(radius);
  d.origin = model.format(model.origin());
  d.vertices.reserve(ball.size());
  for (const auto& v : ball) {
    d.vertices.push_back({model.format(v), model.potential(v), model.diagonal(v)});
    if (auto p = model.parent(v)) d.edges.push_back({model.format(*p), model.format(v), model.weight(*p, v)});
  }
  return TreeModel(d);
}

}  // namespace treespectra
