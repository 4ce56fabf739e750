// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fixtures.hpp"
#include "treespectra/fourier.hpp"
#include "treespectra/measure.hpp"
#include "treespectra/oracle.hpp"
#include "treespectra/poisson.hpp"

using namespace treespectra;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

bool run_criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0 && seconds > budget_seconds) {
    outcome.pass = false;
    outcome.detail += fmt("; over the %.0f s budget", budget_seconds);
  }
  std::printf("criterion %d %s: %s (%s; %.1f s)\n", id, title, outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(),
              seconds);
  std::fflush(stdout);
  return outcome.pass;
}

// 50 random finite trees x 20 random gamma: all-pairs comparison with the dense
// inverse and the identity suite on each (tree, gamma).
struct EnsembleResult {
  double worst_relative = 0.0;
  double worst_identity = 0.0;
  std::size_t pairs = 0;
};

EnsembleResult random_ensemble(bool weighted, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EnsembleResult r;
  for (int t = 0; t < 50; ++t) {
    auto model = fixtures::random_finite(rng, weighted);
    DenseTruncation trunc(model, model.core_radius());
    for (int g = 0; g < 20; ++g) {
      const auto p = fixtures::random_gamma(rng);
      const auto field = compute_zeta_field(model, p);
      const auto inverse = dense_resolvent_matrix(trunc, p.gamma());
      for (std::size_t i = 0; i < trunc.size(); ++i) {
        for (std::size_t j = 0; j < trunc.size(); ++j) {
          const Complex ref = inverse(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          const Complex got = green_pair(field, trunc.vertex(i), trunc.vertex(j));
          r.worst_relative = std::max(r.worst_relative, std::abs(got - ref) / std::abs(ref));
          ++r.pairs;
        }
      }
      const auto suite = identity_suite(field, 50, seed * 1000 + static_cast<std::uint64_t>(t * 20 + g));
      r.worst_identity = std::max(r.worst_identity, suite.max_residual());
    }
  }
  return r;
}

// Built on first use, so each ensemble is timed by the criterion that needs it.
const EnsembleResult& ensemble(bool weighted) {
  if (weighted) {
    static const EnsembleResult with_weights = random_ensemble(true, 2);
    return with_weights;
  }
  static const EnsembleResult plain = random_ensemble(false, 1);
  return plain;
}

std::vector<double> band_energies(const TreeModel& m, int count) {
  auto [lo, hi] = m.tail_band();
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(lo + (hi - lo) * k / (count + 1));
  return out;
}

std::vector<RayAddress> ten_rays() {
  std::vector<RayAddress> out;
  for (const char* r : {"0", "1", "2", "0.1", "1.0.1", "2.1.1", "0.0.1.0", "1.1.0.1", "2.0.0.0.1", "0.1.1.1.1"}) {
    out.push_back(parse_ray(r));
  }
  return out;
}

Outcome criterion_anchors() {
  const auto& m = fixtures::regular3();
  const Vertex o = m.origin();
  const Vertex n = m.parse_vertex("1");
  const auto fi = compute_zeta_field(m, {0.0, 1.0});
  const auto f0 = compute_zeta_field(m, SpectralParameter::boundary_value(0.0));
  const double pi = std::numbers::pi;
  const double errors[] = {
      std::abs(fi.zeta(n, o) - Complex(0.0, -0.5)),
      std::abs(green_pair(fi, o, o) - Complex(0.0, 0.4)),
      std::abs(green_pair(fi, o, n) - Complex(0.2, 0.0)),
      std::abs(psi(f0, o, o) - std::sqrt(2.0) / (3.0 * pi)),
      std::abs(nu_E_cylinder(f0, n) - std::sqrt(2.0) / (9.0 * pi)),
  };
  double worst = 0.0;
  for (double e : errors) worst = std::max(worst, e);
  return {worst < 1e-12, fmt("max deviation %.2e over 5 anchors", worst)};
}

Outcome criterion_eigenfunction() {
  const auto& m = fixtures::regular3();
  std::vector<SpectralParameter> params = {{0.0, 1.0}, {0.5, 0.1}};
  for (double e : band_energies(m, 5)) params.push_back(SpectralParameter::boundary_value(e));
  const auto region = m.ball(4);
  double worst = 0.0;
  for (const auto& p : params) {
    const auto field = compute_zeta_field(m, p);
    for (const auto& xi : ten_rays()) worst = std::max(worst, eigen_check(field, xi, region).max_residual);
  }
  return {worst < 1e-10, fmt("max |HP - gamma P| %.2e over %.0f rays x %.0f parameters", worst, 10.0,
                             static_cast<double>(params.size()))};
}

Outcome criterion_round_trip() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> coef;
  double worst = 0.0, worst_additivity = 0.0;
  int cases = 0;
  std::vector<TreeModel> models = {fixtures::regular3()};
  for (int k = 0; k < 5; ++k) {
    RandomTreeOptions o;
    o.max_vertices = 30;
    o.weighted = k % 2 == 1;
    o.tail_branching = 1 + k % 3;
    models.emplace_back(random_tree_description(rng, o));
  }
  for (const auto& m : models) {
    std::vector<SpectralParameter> params = {{0.0, 1.0}, {0.5, 0.1}, fixtures::random_gamma(rng)};
    for (double e : band_energies(m, 2)) params.push_back(SpectralParameter::boundary_value(e));
    const auto targets = m.ball(std::max(3, m.core_radius() + 2));
    std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
    for (const auto& p : params) {
      const auto field = compute_zeta_field(m, p);
      for (int terms = 1; terms <= 5; ++terms) {
        std::vector<std::pair<Complex, PoissonKernel>> combo;
        for (int k = 0; k < terms; ++k) {
          combo.emplace_back(Complex(coef(rng), coef(rng)), PoissonKernel(field, ray_through(m, targets[pick(rng)])));
        }
        VertexFunction f = [&combo](const Vertex& v) {
          Complex s{};
          for (const auto& [c, P] : combo) s += c * P(v);
          return s;
        };
        const auto nu = nu_from_eigenfunction(field, f, 4);
        worst_additivity = std::max(worst_additivity, nu.additivity_residual(m));
        for (const auto& v : m.ball(3)) {
          worst = std::max(worst, std::abs(reconstruct(field, nu, v, m.depth(v) + 1) - f(v)));
        }
        ++cases;
      }
    }
  }
  return {worst < 1e-10 && worst_additivity < 1e-10,
          fmt("%.0f combinations, max round-trip error %.2e, additivity %.2e", cases, worst, worst_additivity)};
}

Outcome criterion_boundary_psi() {
  const auto& m = fixtures::regular3();
  const auto ball = m.ball(3);
  double worst = 0.0, worst_total = 0.0;
  bool nonnegative = true;
  for (double e : band_energies(m, 20)) {
    const auto field = compute_zeta_field(m, SpectralParameter::boundary_value(e));
    for (const auto& v : ball) {
      for (const auto& w : ball) {
        const int depth = std::max(m.depth(v), m.depth(w)) + 1;
        worst = std::max(worst, std::abs(psi_via_boundary(field, v, w, depth) - psi(field, v, w)));
      }
    }
    const auto nu = spectral_measure(field, 4);
    for (const auto& [u, value] : nu.stored()) nonnegative = nonnegative && value.real() >= 0.0;
    double sum = 0.0;
    for (const auto& u : m.sphere(1)) sum += nu(u).real();
    worst_total = std::max(worst_total, std::abs(sum - psi(field, m.origin(), m.origin())));
  }
  return {worst < 1e-10 && worst_total < 1e-12 && nonnegative,
          fmt("max |boundary - psi| %.2e, |nu_E(dT) - Psi| %.2e, nonnegative %.0f", worst, worst_total,
              nonnegative ? 1.0 : 0.0)};
}

Outcome criterion_plancherel() {
  const auto& m = fixtures::regular3();
  const Vertex o = m.origin();
  const EnergyWindow full = EnergyWindow::full();
  bool pass = true;
  std::string detail;

  const Complex mass = kernel_entry(m, TestFunction::one(), o, o, full).value;
  pass = pass && std::abs(mass - 1.0) < 1e-6;
  detail += fmt("F=1: %.9f", mass.real());

  // closed walks at o, counted on a radius-4 truncation
  DenseTruncation walks(m, 4);
  double worst_moment = 0.0;
  for (int k = 1; k <= 4; ++k) {
    std::vector<Complex> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = 1.0;
    const Complex count = polynomial_function_entry(walks, c, o, o);
    const double expected[] = {0.0, 0.0, 3.0, 0.0, 15.0};
    pass = pass && count == Complex(expected[k]);
    const Complex moment = kernel_entry(m, TestFunction::polynomial(c), o, o, full).value;
    worst_moment = std::max(worst_moment, std::abs(moment - count));
  }
  pass = pass && worst_moment < 1e-5;
  detail += fmt("; E^1..E^4 max error %.2e", worst_moment);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> c;
  const auto ball = m.ball(2);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  std::uniform_int_distribution<int> size(1, 3);
  std::uniform_int_distribution<int> degree(1, 4);
  double worst_abs = 0.0, worst_rel = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    FiniteVector f, g;
    for (int k = size(rng); k > 0; --k) f.add(ball[pick(rng)], {c(rng), c(rng)});
    for (int k = size(rng); k > 0; --k) g.add(ball[pick(rng)], {c(rng), c(rng)});
    std::vector<Complex> coefficients;
    for (int k = degree(rng); k >= 0; --k) coefficients.emplace_back(c(rng), c(rng));
    const auto report = plancherel_check(m, TestFunction::polynomial(coefficients), f, g, full);
    pass = pass && report.oracle_radius == 14;
    worst_abs = std::max(worst_abs, report.abs_err);
    worst_rel = std::max(worst_rel, report.rel_err);
  }
  pass = pass && worst_abs < 1e-4;
  detail += fmt("; 10 random f,g vs radius-14 oracle: max abs %.2e, rel %.2e", worst_abs, worst_rel);
  return {pass, detail};
}

Outcome criterion_depth_invariance() {
  const auto& m = fixtures::regular3();
  double worst = 0.0;
  // reconstruct
  const auto field = compute_zeta_field(m, {0.3, 0.2});
  VertexFunction f = [&](const Vertex& v) {
    return Complex(0.5, -1.0) * poisson_value(field, parse_ray("1.0"), v) +
           2.0 * poisson_value(field, parse_ray("2.1.1"), v);
  };
  const auto nu = nu_from_eigenfunction(field, f, 3);
  for (const auto& v : m.ball(3)) {
    const Complex a = reconstruct(field, nu, v, m.depth(v) + 1);
    const Complex b = reconstruct(field, nu, v, m.depth(v) + 4);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  // psi through the boundary
  const auto f0 = compute_zeta_field(m, SpectralParameter::boundary_value(0.7));
  for (const auto& v : m.ball(2)) {
    for (const auto& w : m.ball(2)) {
      const int depth = std::max(m.depth(v), m.depth(w)) + 1;
      worst = std::max(worst, std::abs(psi_via_boundary(f0, v, w, depth) - psi_via_boundary(f0, v, w, depth + 3)));
    }
  }
  // apply_function
  FourierOptions deeper;
  deeper.extra_depth = 3;
  const auto F = TestFunction::parse("poly:1,0.5,0,-0.25");
  const FiniteVector g = FiniteVector::delta(m.parse_vertex("0.1"), {1.0, 1.0}).add(m.parse_vertex("2"), -0.5);
  for (const char* v : {"o", "1", "0.1.0"}) {
    const Vertex x = m.parse_vertex(v);
    const Complex a = apply_function(m, F, g, x, EnergyWindow::full()).value;
    const Complex b = apply_function(m, F, g, x, EnergyWindow::full(), deeper).value;
    worst = std::max(worst, std::abs(a - b));
  }
  return {worst < 1e-12, fmt("max change %.2e at depth + 3", worst)};
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion(1, "finite-tree exactness", 60.0, [] {
    const auto& r = ensemble(false);
    return Outcome{r.worst_relative < 1e-10,
                   fmt("%.0f pairs, max relative error %.2e", static_cast<double>(r.pairs), r.worst_relative)};
  });
  all &= run_criterion(2, "identity suite", 0.0, [] {
    const auto& r = ensemble(false);
    return Outcome{r.worst_identity < 1e-10, fmt("max residual %.2e over 1000 (tree, gamma)", r.worst_identity)};
  });
  all &= run_criterion(3, "closed-form anchors", 0.0, criterion_anchors);
  all &= run_criterion(4, "eigenfunction property", 0.0, criterion_eigenfunction);
  all &= run_criterion(5, "eigenfunction round trip", 0.0, criterion_round_trip);
  all &= run_criterion(6, "Psi through nu_E", 0.0, criterion_boundary_psi);
  all &= run_criterion(7, "Plancherel", 120.0, criterion_plancherel);
  all &= run_criterion(8, "weighted operators", 60.0, [] {
    const auto& r = ensemble(true);
    return Outcome{r.worst_relative < 1e-10 && r.worst_identity < 1e-10,
                   fmt("%.0f pairs, max relative error %.2e, identity residual %.2e", static_cast<double>(r.pairs),
                       r.worst_relative, r.worst_identity)};
  });
  all &= run_criterion(9, "depth invariance", 0.0, criterion_depth_invariance);
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
