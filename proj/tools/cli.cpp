#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <variant>

#include "json.hpp"
#include "treespectra/errors.hpp"
#include "treespectra/fourier.hpp"
#include "treespectra/green.hpp"
#include "treespectra/measure.hpp"
#include "treespectra/model_io.hpp"
#include "treespectra/oracle.hpp"
#include "treespectra/poisson.hpp"

namespace treespectra::cli {

namespace {

using Cell = std::variant<std::string, double, long long>;

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

// Rows of named columns plus a summary; printed as CSV (summary to the
// diagnostic stream) or as one JSON document.
class Output {
 public:
  Output(std::string command, std::vector<std::string> columns)
      : command_(std::move(command)), columns_(std::move(columns)) {}

  void row(std::vector<Cell> cells) { rows_.push_back(std::move(cells)); }
  void summary(const std::string& key, nlohmann::ordered_json value) { summary_[key] = std::move(value); }

  void print(const RunConfig& config, bool pass, std::ostream& out, std::ostream& err) const {
    if (config.format == "csv") {
      for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
      out << '\n';
      for (const auto& r : rows_) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << text(r[c]);
        out << '\n';
      }
      for (const auto& [key, value] : summary_.items()) err << key << ": " << value.dump() << '\n';
      err << (pass ? "PASS" : "FAIL") << '\n';
      return;
    }
    nlohmann::ordered_json doc;
    doc["command"] = command_;
    if (!columns_.empty()) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& r : rows_) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < r.size(); ++c) {
          std::visit([&](const auto& x) { obj[columns_[c]] = x; }, r[c]);
        }
        rows.push_back(std::move(obj));
      }
      doc["rows"] = std::move(rows);
    }
    for (const auto& [key, value] : summary_.items()) doc[key] = value;
    doc["pass"] = pass;
    out << doc.dump(2) << '\n';
  }

 private:
  static std::string text(const Cell& c) {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    return std::to_string(std::get<long long>(c));
  }

  std::string command_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  nlohmann::ordered_json summary_ = nlohmann::ordered_json::object();
};

nlohmann::ordered_json complex_json(Complex z) { return {z.real(), z.imag()}; }

SpectralParameter require_gamma(const RunConfig& c) {
  if (c.gamma) return parse_spectral_parameter(*c.gamma);
  if (c.energy) return SpectralParameter::boundary_value(*c.energy);
  throw ParameterError("--gamma (or --E for E+i0) is required");
}

RayAddress require_ray(const RunConfig& c) {
  if (c.rays.empty()) throw ParameterError("--ray is required");
  return parse_ray(c.rays.front());
}

EnergyWindow parse_window(const RunConfig& c) {
  EnergyWindow window = EnergyWindow::full();
  if (c.band != "full") {
    auto comma = c.band.find(',');
    if (comma == std::string::npos) throw ParameterError("--band expects 'a,b' or 'full'");
    window.a = parse_complex(c.band.substr(0, comma)).real();
    window.b = parse_complex(c.band.substr(comma + 1)).real();
  }
  window.layout.panels = c.panels;
  window.layout.nodes = c.nodes;
  return window;
}

int finish(const Output& o, const RunConfig& c, bool pass, std::ostream& out, std::ostream& err) {
  o.print(c, pass, out, err);
  return pass ? kOk : kToleranceFailure;
}

int cmd_green(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto p = require_gamma(c);
  const auto field = compute_zeta_field(model, p);
  const Vertex v = model.parse_vertex(c.v);
  const Vertex w = model.parse_vertex(c.w);
  const Complex g = green_pair(field, v, w);
  Output o("green", {"v", "w", "re", "im"});
  o.row({model.format(v), model.format(w), g.real(), g.imag()});
  return finish(o, c, true, out, err);
}

int cmd_density(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<double> energies;
  if (c.energy) {
    energies.push_back(*c.energy);
  } else {
    if (!model.has_tail()) throw ParameterError("density needs a tail model or an explicit --E");
    auto [lo, hi] = model.tail_band();
    if (c.band != "full") {
      auto w = parse_window(c);
      lo = std::max(lo, w.a);
      hi = std::min(hi, w.b);
    }
    if (c.points < 1) throw ParameterError("--points must be positive");
    for (int k = 0; k < c.points; ++k) energies.push_back(lo + (hi - lo) * (k + 1) / (c.points + 1));
  }
  Output o("density", {"E", "psi"});
  const Vertex origin = model.origin();
  for (double e : energies) {
    o.row({e, psi(compute_zeta_field(model, SpectralParameter::boundary_value(e)), origin, origin)});
  }
  return finish(o, c, true, out, err);
}

int cmd_poisson(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto field = compute_zeta_field(model, require_gamma(c));
  const RayAddress xi = require_ray(c);
  const int depth = c.depth.value_or(3);
  const auto region = model.ball(depth);
  PoissonKernel P(field, xi);
  Output o("poisson", {"vertex", "confluence_depth", "re", "im"});
  for (const auto& v : region) {
    const Complex value = P(v);
    o.row({model.format(v), static_cast<long long>(model.depth(confluence(model, v, xi))), value.real(),
           value.imag()});
  }
  const auto report = eigen_check(field, xi, region);
  const double tol = c.tol.value_or(kIdentityTolerance);
  o.summary("eigen_residual", report.max_residual);
  o.summary("tolerance", tol);
  return finish(o, c, report.max_residual < tol, out, err);
}

int cmd_measure(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto p = require_gamma(c);
  if (!p.boundary()) throw ParameterError("measure needs a boundary energy (--E or --gamma E+0i)");
  const auto field = compute_zeta_field(model, p);
  const int depth = c.depth.value_or(2);
  const auto nu = spectral_measure(field, depth);
  Output o("measure", {"cylinder", "depth", "nu"});
  bool nonnegative = true;
  std::vector<std::pair<Address, double>> rows;
  for (const auto& [v, value] : nu.stored()) {
    rows.emplace_back(model.address(v), value.real());
    nonnegative = nonnegative && value.real() >= 0.0;
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
  });
  for (const auto& [a, value] : rows) o.row({format_address(a), static_cast<long long>(a.size()), value});
  const double residual = nu.additivity_residual(model);
  const double tol = c.tol.value_or(kIdentityTolerance);
  o.summary("total", nu.total().real());
  o.summary("additivity_residual", residual);
  o.summary("nonnegative", nonnegative);
  o.summary("tolerance", tol);
  return finish(o, c, nonnegative && residual < tol, out, err);
}

int cmd_reconstruct(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto field = compute_zeta_field(model, require_gamma(c));
  if (c.rays.empty()) throw ParameterError("--ray is required (repeat it for a sum of kernels)");
  std::vector<PoissonKernel> kernels;
  for (const auto& r : c.rays) kernels.emplace_back(field, parse_ray(r));
  VertexFunction f = [&kernels](const Vertex& v) {
    Complex sum{};
    for (const auto& P : kernels) sum += P(v);
    return sum;
  };
  const int radius = c.depth.value_or(3);
  const auto nu = nu_from_eigenfunction(field, f, radius + 1);
  Output o("reconstruct", {"vertex", "f_re", "f_im", "rec_re", "rec_im", "error"});
  double worst = 0.0;
  for (const auto& v : model.ball(radius)) {
    const Complex fv = f(v);
    const Complex rv = reconstruct(field, nu, v, radius + 1);
    worst = std::max(worst, std::abs(fv - rv));
    o.row({model.format(v), fv.real(), fv.imag(), rv.real(), rv.imag(), std::abs(fv - rv)});
  }
  const double additivity = nu.additivity_residual(model);
  const double tol = c.tol.value_or(kIdentityTolerance);
  o.summary("max_error", worst);
  o.summary("additivity_residual", additivity);
  o.summary("tolerance", tol);
  return finish(o, c, worst < tol && additivity < tol, out, err);
}

int cmd_identities(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto field = compute_zeta_field(model, require_gamma(c));
  const auto report = identity_suite(field, c.samples, c.seed);
  Output o("identities", {"identity", "max_residual", "evaluations"});
  for (const auto& r : report.residuals) {
    o.row({r.name, r.max_residual, static_cast<long long>(r.evaluations)});
  }
  const double tol = c.tol.value_or(kIdentityTolerance);
  o.summary("max_residual", report.max_residual());
  o.summary("tolerance", tol);
  return finish(o, c, report.max_residual() < tol, out, err);
}

int cmd_plancherel(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto F = TestFunction::parse(c.function);
  FourierOptions options;
  options.threads = c.threads;
  const auto report = plancherel_check(model, F, FiniteVector::delta(model.parse_vertex(c.v)),
                                       FiniteVector::delta(model.parse_vertex(c.w)), parse_window(c), options);
  const double tol = c.tol.value_or(1e-5);
  const bool pass = report.abs_err < tol;
  if (c.format == "csv") {
    Output o("plancherel", {"lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "panels", "nodes",
                            "depth"});
    o.row({report.lhs.real(), report.lhs.imag(), report.rhs.real(), report.rhs.imag(), report.abs_err,
           report.rel_err, static_cast<long long>(report.quadrature.panels),
           static_cast<long long>(report.quadrature.nodes), static_cast<long long>(report.depth)});
    return finish(o, c, pass, out, err);
  }
  Output o("plancherel", {});
  o.summary("F", F.describe());
  o.summary("lhs", complex_json(report.lhs));
  o.summary("rhs", complex_json(report.rhs));
  o.summary("abs_err", report.abs_err);
  o.summary("rel_err", report.rel_err);
  o.summary("quadrature", {{"panels", report.quadrature.panels}, {"nodes", report.quadrature.nodes}});
  o.summary("depth", report.depth);
  o.summary("oracle_radius", report.oracle_radius);
  o.summary("tolerance", tol);
  return finish(o, c, pass, out, err);
}

int cmd_oracle(const TreeModel& model, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto p = require_gamma(c);
  if (p.boundary()) throw ParameterError("the dense oracle needs eta > 0");
  const int radius = c.depth.value_or(model.has_tail() ? 8 : model.core_radius());
  // the same finite operator seen by both sides
  const TreeModel finite = unfold(model, radius);
  const auto field = compute_zeta_field(finite, p);
  const DenseTruncation trunc(finite, radius);
  const Eigen::MatrixXcd inverse = dense_resolvent_matrix(trunc, p.gamma());
  double max_abs = 0.0, max_rel = 0.0;
  for (std::size_t i = 0; i < trunc.size(); ++i) {
    for (std::size_t j = 0; j < trunc.size(); ++j) {
      const Complex ref = inverse(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double diff = std::abs(green_pair(field, trunc.vertex(i), trunc.vertex(j)) - ref);
      max_abs = std::max(max_abs, diff);
      max_rel = std::max(max_rel, diff / std::abs(ref));
    }
  }
  Output o("oracle", {"radius", "vertices", "max_abs", "max_rel"});
  o.row({static_cast<long long>(radius), static_cast<long long>(trunc.size()), max_abs, max_rel});
  if (model.has_tail()) {
    const Vertex origin = model.origin();
    const Complex full = green_pair(compute_zeta_field(model, p), origin, origin);
    o.summary("truncation_deviation_at_origin", std::abs(full - inverse(0, 0)));
  }
  const double tol = c.tol.value_or(kIdentityTolerance);
  o.summary("tolerance", tol);
  return finish(o, c, max_rel < tol, out, err);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  using Handler = int (*)(const TreeModel&, const RunConfig&, std::ostream&, std::ostream&);
  static const std::map<std::string, Handler> commands = {
      {"green", cmd_green},           {"density", cmd_density},       {"poisson", cmd_poisson},
      {"measure", cmd_measure},       {"reconstruct", cmd_reconstruct}, {"identities", cmd_identities},
      {"plancherel", cmd_plancherel}, {"oracle", cmd_oracle},
  };
  auto it = commands.find(config.command);
  if (it == commands.end()) {
    err << "error: unknown command '" << config.command << "'\n";
    return kUsageError;
  }
  if (config.format != "csv" && config.format != "structured") {
    err << "error: --format must be csv or structured\n";
    return kUsageError;
  }
  try {
    if (config.model_path.empty()) throw ModelError("--model is required");
    const TreeModel model = load_model_file(config.model_path);
    return it->second(model, config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace treespectra::cli
