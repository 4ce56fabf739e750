#include "treespectra/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "treespectra/errors.hpp"

namespace treespectra {

namespace {

std::size_t confluence_depth(const TreeModel& model, const RayAddress& xi, const std::vector<Vertex>& chain) {
  Address a = model.address(chain.back());
  std::size_t r = 0;
  while (r < a.size() && a[r] == ray_step(xi, r)) ++r;
  if (r < a.size() && ray_step(xi, r) >= model.child_count(chain[r])) {
    throw TopologyError("ray " + format_address(xi.prefix) + " leaves the tree at depth " + std::to_string(r));
  }
  return r;
}

}  // namespace

PoissonEvaluation poisson_eval(const ZetaField& field, const RayAddress& xi, const Vertex& v) {
  const TreeModel& model = field.model();
  auto chain = arc_between(model, model.origin(), v);
  const std::size_t r = confluence_depth(model, xi, chain);
  PoissonEvaluation out;
  out.confluence = chain[r];
  Complex num{1.0, 0.0}, den{1.0, 0.0};
  for (std::size_t j = r; j + 1 < chain.size(); ++j) {
    out.toward_factors.push_back(field.zeta(chain[j + 1], chain[j]));
    num *= out.toward_factors.back();
  }
  for (std::size_t j = 0; j < r; ++j) {
    out.against_factors.push_back(field.zeta(chain[j], chain[j + 1]));
    den *= out.against_factors.back();
  }
  out.value = num / den;
  return out;
}

Complex poisson_value(const ZetaField& field, const RayAddress& xi, const Vertex& v) {
  const TreeModel& model = field.model();
  auto chain = arc_between(model, model.origin(), v);
  const std::size_t r = confluence_depth(model, xi, chain);
  Complex value{1.0, 0.0};
  for (std::size_t j = r; j + 1 < chain.size(); ++j) value *= field.zeta(chain[j + 1], chain[j]);
  for (std::size_t j = 0; j < r; ++j) value /= field.zeta(chain[j], chain[j + 1]);
  return value;
}

std::vector<Complex> poisson_by_confluence(const ZetaField& field, const Vertex& v) {
  const TreeModel& model = field.model();
  auto chain = arc_between(model, model.origin(), v);
  const std::size_t k = chain.size() - 1;
  std::vector<Complex> toward(k + 1, Complex{1.0, 0.0});
  for (std::size_t r = k; r-- > 0;) toward[r] = toward[r + 1] * field.zeta(chain[r + 1], chain[r]);
  std::vector<Complex> out(k + 1);
  Complex against{1.0, 0.0};
  for (std::size_t r = 0; r <= k; ++r) {
    if (r > 0) against *= field.zeta(chain[r - 1], chain[r]);
    out[r] = toward[r] / against;
  }
  return out;
}

Complex poisson_step(const ZetaField& field, const RayAddress& xi, const Vertex& u, const Vertex& u_plus,
                     Complex base) {
  const TreeModel& model = field.model();
  auto p = model.parent(u_plus);
  if (!p || *p != u) {
    throw TopologyError(model.format(u_plus) + " is not a forward neighbour of " + model.format(u));
  }
  Address a = model.address(u_plus);
  bool on_ray = true;
  for (std::size_t j = 0; j < a.size() && on_ray; ++j) on_ray = a[j] == ray_step(xi, j);
  return on_ray ? base / field.zeta(u, u_plus) : field.zeta(u_plus, u) * base;
}

PoissonKernel::PoissonKernel(const ZetaField& field, RayAddress xi)
    : field_(&field), xi_(std::move(xi)), ray_{field.model().origin()} {}

Complex PoissonKernel::against(std::size_t depth) const {
  const TreeModel& model = field_->model();
  while (against_.size() <= depth) {
    const Vertex last = ray_.back();
    std::uint32_t idx = ray_step(xi_, ray_.size() - 1);
    if (idx >= model.child_count(last)) {
      throw TopologyError("ray " + format_address(xi_.prefix) + " leaves the tree at depth " +
                          std::to_string(ray_.size() - 1));
    }
    ray_.push_back(model.child(last, idx));
    against_.push_back(against_.back() * field_->zeta(last, ray_.back()));
  }
  return against_[depth];
}

Complex PoissonKernel::operator()(const Vertex& v) const {
  const TreeModel& model = field_->model();
  Address a = model.address(v);
  std::size_t r = 0;
  while (r < a.size() && a[r] == ray_step(xi_, r)) ++r;
  if (r < a.size()) against(r + 1);  // validates the ray beyond the confluence
  Complex value{1.0, 0.0};
  Vertex x = v;
  for (std::size_t depth = a.size(); depth > r; --depth) {
    Vertex up = *model.parent(x);
    value *= field_->zeta(x, up);
    x = std::move(up);
  }
  return value / against(r);
}

LimitReport poisson_limit_check(const ZetaField& field, const RayAddress& xi, const Vertex& v,
                                const std::vector<int>& depths) {
  const TreeModel& model = field.model();
  LimitReport report;
  report.kernel = poisson_value(field, xi, v);
  const int r = model.depth(confluence(model, v, xi));
  for (int depth : depths) {
    if (depth <= r) {
      throw TopologyError("limit depth " + std::to_string(depth) + " is not past the confluence depth " +
                          std::to_string(r));
    }
    LimitSample s;
    s.depth = depth;
    s.u = ray_vertex(model, xi, depth);
    s.ratio = green_pair(field, s.u, v) / green_pair(field, model.origin(), s.u);
    s.deviation = std::abs(s.ratio - report.kernel);
    report.max_deviation = std::max(report.max_deviation, s.deviation);
    report.samples.push_back(std::move(s));
  }
  return report;
}

EigenReport eigen_check(const ZetaField& field, const RayAddress& xi, const std::vector<Vertex>& region) {
  const TreeModel& model = field.model();
  PoissonKernel P(field, xi);
  int deepest = 0;
  for (const auto& v : region) deepest = std::max(deepest, model.depth(v));
  ray_vertex(model, xi, deepest + 1);
  const Complex gamma = field.gamma();
  EigenReport report;
  for (const auto& v : region) {
    const Complex pv = P(v);
    Complex hp = model.diagonal(v) * pv;
    for (const auto& w : model.neighbors(v)) hp += model.weight(v, w) * P(w);
    double residual = std::abs(hp - gamma * pv);
    if (report.vertices == 0 || residual > report.max_residual) {
      report.max_residual = residual;
      report.worst = v;
    }
    ++report.vertices;
  }
  return report;
}

}  // namespace treespectra
