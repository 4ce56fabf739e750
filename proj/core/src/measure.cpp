#include "treespectra/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "treespectra/errors.hpp"
#include "treespectra/poisson.hpp"

namespace treespectra {

namespace {

std::size_t common_prefix(const Address& a, const Address& b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t r = 0;
  while (r < n && a[r] == b[r]) ++r;
  return r;
}

void require_boundary(const ZetaField& field) {
  if (!field.parameter().boundary()) {
    throw ParameterError("the spectral boundary measure needs a boundary parameter E+i0");
  }
}

double nu_E_value(const ZetaField& field, const Vertex& u_plus) {
  const TreeModel& model = field.model();
  auto u = model.parent(u_plus);
  if (!u) throw TopologyError("the origin is not the base of a proper cylinder");
  const Complex g = green_pair(field, model.origin(), *u);
  return std::norm(g) * std::abs(model.weight(*u, u_plus) * field.zeta(u_plus, *u).imag()) / std::numbers::pi;
}

}  // namespace

CylinderMeasure::CylinderMeasure(MeasureKind kind, SpectralParameter parameter, Complex total, int depth,
                                 std::map<Vertex, Complex> stored, VertexFunction formula)
    : kind_(kind),
      parameter_(parameter),
      total_(total),
      depth_(depth),
      stored_(std::move(stored)),
      formula_(std::move(formula)) {}

Complex CylinderMeasure::operator()(const Cylinder& c) const { return c.full ? total_ : (*this)(c.base); }

Complex CylinderMeasure::operator()(const Vertex& base) const {
  if (base == Vertex{}) return total_;
  if (auto it = stored_.find(base); it != stored_.end()) return it->second;
  if (!formula_) throw TopologyError("cylinder beyond the stored depth and no formula available");
  return formula_(base);
}

double CylinderMeasure::additivity_residual(const TreeModel& model) const {
  double worst = 0.0;
  auto check = [&](const Vertex& u, Complex value) {
    std::uint32_t n = model.child_count(u);
    if (n == 0) return;
    Complex sum{};
    for (std::uint32_t c = 0; c < n; ++c) sum += (*this)(model.child(u, c));
    worst = std::max(worst, std::abs(value - sum));
  };
  if (depth_ >= 1) check(model.origin(), total_);
  for (const auto& [u, value] : stored_) {
    if (model.depth(u) < depth_) check(u, value);
  }
  return worst;
}

std::string CylinderMeasure::to_document(const TreeModel& model) const {
  nlohmann::ordered_json doc;
  doc["kind"] = kind_ == MeasureKind::spectral ? "spectral" : "eigenfunction";
  doc["parameter"] = {parameter_.energy, parameter_.eta};
  doc["depth"] = depth_;
  doc["total"] = {total_.real(), total_.imag()};
  auto cylinders = nlohmann::ordered_json::array();
  std::vector<std::pair<Address, Complex>> rows;
  for (const auto& [v, value] : stored_) rows.emplace_back(model.address(v), value);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
  });
  for (const auto& [address, value] : rows) {
    cylinders.push_back({{"address", format_address(address)}, {"re", value.real()}, {"im", value.imag()}});
  }
  doc["cylinders"] = std::move(cylinders);
  return doc.dump(2);
}

double eigen_residual(const ZetaField& field, const VertexFunction& f, int radius) {
  const TreeModel& model = field.model();
  const Complex gamma = field.gamma();
  double worst = 0.0;
  for (const auto& v : model.ball(radius)) {
    const Complex fv = f(v);
    Complex hf = model.diagonal(v) * fv;
    for (const auto& w : model.neighbors(v)) hf += model.weight(v, w) * f(w);
    worst = std::max(worst, std::abs(hf - gamma * fv));
  }
  return worst;
}

CylinderMeasure nu_from_eigenfunction(const ZetaField& field, VertexFunction f, int depth) {
  if (depth < 1) throw TopologyError("measure depth must be at least 1");
  const double residual = eigen_residual(field, f, depth);
  if (!(residual < kEigenGate)) {
    throw NumericalError("function fails the eigen-equation check: residual " + std::to_string(residual));
  }
  const ZetaField* fp = &field;
  VertexFunction formula = [fp, f](const Vertex& u_plus) -> Complex {
    const TreeModel& model = fp->model();
    auto u = model.parent(u_plus);
    if (!u) throw TopologyError("the origin is not the base of a proper cylinder");
    const Complex g = green_pair(*fp, model.origin(), *u);
    return -model.weight(*u, u_plus) * g * (f(u_plus) - fp->zeta(u_plus, *u) * f(*u));
  };
  std::map<Vertex, Complex> stored;
  for (const auto& v : field.model().ball(depth)) {
    if (v != field.model().origin()) stored.emplace(v, formula(v));
  }
  return CylinderMeasure(MeasureKind::eigenfunction, field.parameter(), f(field.model().origin()), depth,
                         std::move(stored), std::move(formula));
}

Complex reconstruct(const ZetaField& field, const CylinderMeasure& measure, const Vertex& v, int depth) {
  const TreeModel& model = field.model();
  if (depth <= model.depth(v)) {
    throw TopologyError("reconstruction depth must exceed |v| = " + std::to_string(model.depth(v)));
  }
  const auto& p = measure.parameter();
  if (p.energy != field.parameter().energy || p.eta != field.parameter().eta) {
    throw ParameterError("measure and field were built at different spectral parameters");
  }
  const auto kernel = poisson_by_confluence(field, v);
  const Address av = model.address(v);
  Complex sum{};
  for (const auto& c : cylinder_partition(model, depth)) {
    sum += kernel[common_prefix(av, model.address(c.base))] * measure(c);
  }
  return sum;
}

double nu_E_cylinder(const ZetaField& field, const Vertex& u_plus) {
  require_boundary(field);
  return nu_E_value(field, u_plus);
}

double nu_E_cylinder(const TreeModel& model, double energy, const Vertex& u_plus) {
  return nu_E_cylinder(compute_zeta_field(model, SpectralParameter::boundary_value(energy)), u_plus);
}

CylinderMeasure spectral_measure(const ZetaField& field, int depth) {
  require_boundary(field);
  if (depth < 1) throw TopologyError("measure depth must be at least 1");
  const ZetaField* fp = &field;
  VertexFunction formula = [fp](const Vertex& u_plus) -> Complex { return nu_E_value(*fp, u_plus); };
  std::map<Vertex, Complex> stored;
  for (const auto& v : field.model().ball(depth)) {
    if (v != field.model().origin()) stored.emplace(v, formula(v));
  }
  const Vertex o = field.model().origin();
  return CylinderMeasure(MeasureKind::spectral, field.parameter(), psi(field, o, o), depth, std::move(stored),
                         std::move(formula));
}

BoundaryShell boundary_shell(const ZetaField& field, int depth) {
  require_boundary(field);
  const TreeModel& model = field.model();
  BoundaryShell shell;
  shell.depth = depth;
  for (auto& c : cylinder_partition(model, depth)) {
    shell.addresses.push_back(model.address(c.base));
    shell.weights.push_back(nu_E_value(field, c.base));
    shell.bases.push_back(std::move(c.base));
  }
  return shell;
}

std::vector<Complex> BoundaryShell::kernel_column(const ZetaField& field, const Vertex& x) const {
  const TreeModel& model = field.model();
  if (depth <= model.depth(x)) {
    throw TopologyError("cylinder depth " + std::to_string(depth) + " does not exceed |" + model.format(x) + "|");
  }
  const auto kernel = poisson_by_confluence(field, x);
  const Address ax = model.address(x);
  std::vector<Complex> out(addresses.size());
  for (std::size_t s = 0; s < addresses.size(); ++s) out[s] = kernel[common_prefix(ax, addresses[s])];
  return out;
}

Complex psi_via_boundary(const ZetaField& field, const Vertex& v, const Vertex& w, int depth) {
  const TreeModel& model = field.model();
  if (depth <= std::max(model.depth(v), model.depth(w))) {
    throw TopologyError("boundary depth must exceed max(|v|, |w|)");
  }
  const auto shell = boundary_shell(field, depth);
  const auto pv = shell.kernel_column(field, v);
  const auto pw = shell.kernel_column(field, w);
  Complex sum{};
  for (std::size_t s = 0; s < shell.weights.size(); ++s) sum += std::conj(pv[s]) * pw[s] * shell.weights[s];
  return sum;
}

Complex psi_via_boundary(const TreeModel& model, double energy, const Vertex& v, const Vertex& w, int depth) {
  return psi_via_boundary(compute_zeta_field(model, SpectralParameter::boundary_value(energy)), v, w, depth);
}

}  // namespace treespectra
