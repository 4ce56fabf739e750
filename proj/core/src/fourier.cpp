#include "treespectra/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "json.hpp"
#include "treespectra/errors.hpp"
#include "treespectra/measure.hpp"
#include "treespectra/oracle.hpp"
#include "treespectra/poisson.hpp"

namespace treespectra {

ResolvedWindow resolve_window(const TreeModel& model, const EnergyWindow& window, const TestFunction& f) {
  if (!model.has_tail()) throw ParameterError("energy integrals need a model with a homogeneous tail");
  if (std::isnan(window.a) || std::isnan(window.b) || !(window.a < window.b)) {
    throw ParameterError("energy window needs a < b");
  }
  auto [band_lo, band_hi] = model.tail_band();
  const double delta = window.margin.value_or(1e-6 * (band_hi - band_lo));
  if (!(delta > 0.0) || 2.0 * delta >= band_hi - band_lo) throw ParameterError("band margin must be positive");
  ResolvedWindow r;
  r.lo = std::max(window.a, band_lo + delta);
  r.hi = std::min(window.b, band_hi - delta);
  r.graded_low = r.lo == band_lo + delta;
  r.graded_high = r.hi == band_hi - delta;
  if (auto s = f.support()) {
    if (s->first > r.lo) {
      r.lo = s->first;
      r.graded_low = false;
    }
    if (s->second < r.hi) {
      r.hi = s->second;
      r.graded_high = false;
    }
  }
  if (!(r.lo < r.hi)) throw ParameterError("energy window does not meet the interior of the band");
  PanelLayout layout = window.layout;
  layout.grade_low = r.graded_low;
  layout.grade_high = r.graded_high;
  r.panels = make_panels(r.lo, r.hi, layout);
  r.nodes = layout.nodes;
  return r;
}

FiniteVector& FiniteVector::add(const Vertex& v, Complex value) {
  for (auto& [w, x] : entries) {
    if (w == v) {
      x += value;
      return *this;
    }
  }
  entries.emplace_back(v, value);
  return *this;
}

Complex FiniteVector::at(const Vertex& v) const {
  for (const auto& [w, x] : entries) {
    if (w == v) return x;
  }
  return 0.0;
}

int FiniteVector::max_depth(const TreeModel& model) const {
  int d = 0;
  for (const auto& e : entries) d = std::max(d, model.depth(e.first));
  return d;
}

FiniteKernel& FiniteKernel::add(const Vertex& v, const Vertex& w, Complex value) {
  terms.push_back({v, w, value});
  return *this;
}

int FiniteKernel::max_depth(const TreeModel& model) const {
  int d = 0;
  for (const auto& t : terms) d = std::max({d, model.depth(t.row), model.depth(t.column)});
  return d;
}

Complex fourier_coeff(const ZetaField& field, const RayAddress& xi, const FiniteVector& f) {
  if (!field.parameter().boundary()) throw ParameterError("Fourier coefficients are taken at E+i0");
  PoissonKernel P(field, xi);
  Complex sum{};
  for (const auto& [w, value] : f.entries) sum += std::conj(P(w)) * value;
  return sum;
}

Complex fourier_coeff(const TreeModel& model, double energy, const RayAddress& xi, const FiniteVector& f) {
  return fourier_coeff(compute_zeta_field(model, SpectralParameter::boundary_value(energy)), xi, f);
}

namespace {

// Per-energy state: the field, one cylinder shell, and the kernel columns of
// the vertices that the integrand touches.
struct NodeData {
  ZetaField field;
  BoundaryShell shell;
  std::map<Vertex, std::vector<Complex>> columns;

  NodeData(const TreeModel& model, double energy, int depth)
      : field(compute_zeta_field(model, SpectralParameter::boundary_value(energy))),
        shell(boundary_shell(field, depth)) {}

  const std::vector<Complex>& column(const Vertex& x) {
    auto it = columns.find(x);
    if (it == columns.end()) it = columns.emplace(x, shell.kernel_column(field, x)).first;
    return it->second;
  }

  double psi(const Vertex& v, const Vertex& w) const { return green_pair(field, v, w).imag() / std::numbers::pi; }
};

IntegrationResult run(const ResolvedWindow& window, std::size_t outputs, const VectorIntegrand& f,
                      const FourierOptions& options) {
  return integrate(window.panels, window.nodes, outputs, f, options.threads);
}

QuadratureInfo info(const IntegrationResult& r) { return {r.panels, r.nodes}; }

}  // namespace

KernelEntryReport kernel_entry(const TreeModel& model, const TestFunction& F, const Vertex& v, const Vertex& w,
                               const EnergyWindow& window, const FourierOptions& options) {
  const auto resolved = resolve_window(model, window, F);
  KernelEntryReport report;
  report.depth = std::max(model.depth(v), model.depth(w)) + 1 + options.extra_depth;
  auto integrand = [&](double e) -> std::vector<Complex> {
    NodeData node(model, e, report.depth);
    const auto& pv = node.column(v);
    const auto& pw = node.column(w);
    Complex boundary{};
    for (std::size_t s = 0; s < pv.size(); ++s) boundary += std::conj(pv[s]) * pw[s] * node.shell.weights[s];
    const Complex fe = F(e);
    return {fe * node.psi(v, w), fe * boundary};
  };
  auto r = run(resolved, 2, integrand, options);
  report.value = r.values[0];
  report.boundary_value = r.values[1];
  report.discrepancy = std::abs(report.value - report.boundary_value);
  report.quadrature = info(r);
  return report;
}

BoundaryIntegralReport apply_function(const TreeModel& model, const TestFunction& F, const FiniteVector& f,
                                      const Vertex& v, const EnergyWindow& window, const FourierOptions& options) {
  const auto resolved = resolve_window(model, window, F);
  BoundaryIntegralReport report;
  report.depth = std::max(model.depth(v), f.max_depth(model)) + 1 + options.extra_depth;
  auto integrand = [&](double e) -> std::vector<Complex> {
    NodeData node(model, e, report.depth);
    const auto pv = node.column(v);
    std::vector<Complex> fhat(pv.size());
    Complex reference{};
    for (const auto& [w, value] : f.entries) {
      const auto& pw = node.column(w);
      for (std::size_t s = 0; s < pw.size(); ++s) fhat[s] += std::conj(pw[s]) * value;
      reference += value * node.psi(v, w);
    }
    Complex boundary{};
    for (std::size_t s = 0; s < pv.size(); ++s) boundary += pv[s] * fhat[s] * node.shell.weights[s];
    const Complex fe = F(e);
    return {fe * boundary, fe * reference};
  };
  auto r = run(resolved, 2, integrand, options);
  report.value = r.values[0];
  report.reference = r.values[1];
  report.discrepancy = std::abs(report.value - report.reference);
  report.quadrature = info(r);
  return report;
}

BoundaryIntegralReport trace_functional(const TreeModel& model, const TestFunction& F, const FiniteKernel& k,
                                        const EnergyWindow& window, const FourierOptions& options) {
  const auto resolved = resolve_window(model, window, F);
  BoundaryIntegralReport report;
  report.depth = k.max_depth(model) + 1 + options.extra_depth;
  auto integrand = [&](double e) -> std::vector<Complex> {
    NodeData node(model, e, report.depth);
    Complex boundary{}, reference{};
    for (const auto& t : k.terms) {
      const auto& pr = node.column(t.row);
      const auto& pc = node.column(t.column);
      Complex pair{};
      for (std::size_t s = 0; s < pr.size(); ++s) pair += std::conj(pr[s]) * pc[s] * node.shell.weights[s];
      boundary += t.value * pair;
      reference += t.value * node.psi(t.row, t.column);
    }
    const Complex fe = F(e);
    return {fe * boundary, fe * reference};
  };
  auto r = run(resolved, 2, integrand, options);
  report.value = r.values[0];
  report.reference = r.values[1];
  report.discrepancy = std::abs(report.value - report.reference);
  report.quadrature = info(r);
  return report;
}

BoundaryIntegralReport hilbert_schmidt(const TreeModel& model, const TestFunction& F, const FiniteKernel& k,
                                       const EnergyWindow& window, const FourierOptions& options) {
  const auto resolved = resolve_window(model, window, F);
  BoundaryIntegralReport report;
  report.depth = k.max_depth(model) + 1 + options.extra_depth;
  // rows of K with their (column, value) lists
  std::map<Vertex, std::vector<std::pair<Vertex, Complex>>> rows;
  for (const auto& t : k.terms) rows[t.row].emplace_back(t.column, t.value);
  auto integrand = [&](double e) -> std::vector<Complex> {
    NodeData node(model, e, report.depth);
    Complex boundary{}, reference{};
    for (const auto& [u, row] : rows) {
      std::vector<Complex> kp(node.shell.weights.size());
      for (const auto& [w, value] : row) {
        const auto& pw = node.column(w);
        for (std::size_t s = 0; s < pw.size(); ++s) kp[s] += value * pw[s];
      }
      for (std::size_t s = 0; s < kp.size(); ++s) boundary += std::norm(kp[s]) * node.shell.weights[s];
      for (const auto& [v, kv] : row) {
        for (const auto& [w, kw] : row) reference += std::conj(kv) * kw * node.psi(v, w);
      }
    }
    const double f2 = std::norm(F(e));
    return {f2 * boundary, f2 * reference};
  };
  auto r = run(resolved, 2, integrand, options);
  report.value = r.values[0];
  report.reference = r.values[1];
  report.discrepancy = std::abs(report.value - report.reference);
  report.quadrature = info(r);
  return report;
}

namespace {

// <f, F(H_R) g> on the truncation of the given radius; polynomial F by sparse
// products, other F by eigendecomposition of the largest dense-sized ball.
std::pair<Complex, int> oracle_pairing(const TreeModel& model, const TestFunction& F, const FiniteVector& f,
                                       const FiniteVector& g, int radius) {
  auto vector_of = [](const DenseTruncation& t, const FiniteVector& x) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(t.size()));
    for (const auto& [v, value] : x.entries) out(static_cast<Eigen::Index>(t.row(v))) += value;
    return out;
  };
  if (F.degree()) {
    DenseTruncation trunc(model, radius);
    std::vector<Complex> c = F.kind() == TestFunction::Kind::one ? std::vector<Complex>{1.0} : F.coefficients();
    Eigen::VectorXcd y = polynomial_apply(trunc, c, vector_of(trunc, g));
    return {vector_of(trunc, f).dot(y), radius};
  }
  int r = radius;
  while (r > 0 && model.ball(r).size() > kDenseLimit / 2) --r;
  DenseTruncation trunc(model, r);
  DenseSpectrum spectrum = dense_spectrum(trunc);
  Eigen::VectorXcd fv = vector_of(trunc, f);
  Eigen::VectorXcd gv = vector_of(trunc, g);
  Eigen::VectorXcd a = spectrum.vectors.transpose().cast<Complex>() * fv;
  Eigen::VectorXcd b = spectrum.vectors.transpose().cast<Complex>() * gv;
  Complex sum{};
  for (Eigen::Index k = 0; k < spectrum.values.size(); ++k) sum += std::conj(a(k)) * F(spectrum.values(k)) * b(k);
  return {sum, r};
}

}  // namespace

PlancherelReport plancherel_check(const TreeModel& model, const TestFunction& F, const FiniteVector& f,
                                  const FiniteVector& g, const EnergyWindow& window, const FourierOptions& options) {
  const auto resolved = resolve_window(model, window, F);
  PlancherelReport report;
  report.depth = std::max(f.max_depth(model), g.max_depth(model)) + 1 + options.extra_depth;
  auto integrand = [&](double e) -> std::vector<Complex> {
    NodeData node(model, e, report.depth);
    const std::size_t n = node.shell.weights.size();
    std::vector<Complex> fhat(n), ghat(n);
    for (const auto& [w, value] : f.entries) {
      const auto& pw = node.column(w);
      for (std::size_t s = 0; s < n; ++s) fhat[s] += std::conj(pw[s]) * value;
    }
    for (const auto& [w, value] : g.entries) {
      const auto& pw = node.column(w);
      for (std::size_t s = 0; s < n; ++s) ghat[s] += std::conj(pw[s]) * value;
    }
    Complex sum{};
    for (std::size_t s = 0; s < n; ++s) sum += std::conj(fhat[s]) * ghat[s] * node.shell.weights[s];
    return {F(e) * sum};
  };
  auto r = run(resolved, 1, integrand, options);
  report.rhs = r.values[0];
  report.quadrature = info(r);
  std::tie(report.lhs, report.oracle_radius) = oracle_pairing(model, F, f, g, options.oracle_radius);
  report.abs_err = std::abs(report.lhs - report.rhs);
  report.rel_err = std::abs(report.lhs) > 0.0 ? report.abs_err / std::abs(report.lhs) : report.abs_err;
  return report;
}

std::string PlancherelReport::to_document() const {
  nlohmann::ordered_json doc;
  doc["lhs"] = {lhs.real(), lhs.imag()};
  doc["rhs"] = {rhs.real(), rhs.imag()};
  doc["abs_err"] = abs_err;
  doc["rel_err"] = rel_err;
  doc["quadrature"] = {{"panels", quadrature.panels}, {"nodes", quadrature.nodes}};
  doc["depth"] = depth;
  doc["oracle_radius"] = oracle_radius;
  return doc.dump(2);
}

}  // namespace treespectra
