#include "treespectra/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <utility>

#include "treespectra/errors.hpp"

namespace treespectra {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ParameterError("Gauss-Legendre rule needs at least one node");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [p, dp] = legendre(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    auto lo = static_cast<std::size_t>(i);
    auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

std::vector<Panel> make_panels(double a, double b, const PanelLayout& layout) {
  if (!(b > a)) throw ParameterError("empty integration interval");
  if (layout.panels < 1 || layout.nodes < 1) throw ParameterError("panel and node counts must be positive");
  if (layout.edge_levels < 0 || !(layout.edge_ratio > 0.0 && layout.edge_ratio < 1.0)) {
    throw ParameterError("edge grading needs levels >= 0 and a ratio in (0, 1)");
  }
  int n = layout.panels;
  if (n == 1 && layout.grade_low && layout.grade_high) n = 2;
  const double h = (b - a) / n;
  auto graded = [&](double edge, double sign) {
    // breakpoints edge + sign*h*ratio^k, k = levels..0
    std::vector<double> cuts{edge};
    for (int k = layout.edge_levels; k >= 0; --k) cuts.push_back(edge + sign * h * std::pow(layout.edge_ratio, k));
    return cuts;
  };
  std::vector<Panel> out;
  for (int p = 0; p < n; ++p) {
    const double pa = a + p * h;
    const double pb = (p + 1 == n) ? b : a + (p + 1) * h;
    if (p == 0 && layout.grade_low) {
      auto cuts = graded(a, 1.0);
      cuts.back() = pb;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) out.push_back({cuts[k], cuts[k + 1]});
    } else if (p + 1 == n && layout.grade_high) {
      auto cuts = graded(b, -1.0);
      cuts.back() = pa;
      for (std::size_t k = cuts.size() - 1; k > 0; --k) out.push_back({cuts[k], cuts[k - 1]});
    } else {
      out.push_back({pa, pb});
    }
  }
  return out;
}

namespace {

struct PanelSum {
  std::vector<std::complex<double>> values;
  std::size_t panels = 0;
  std::size_t nodes = 0;
};

PanelSum integrate_panel(const Panel& panel, const GaussRule& rule, std::size_t outputs, const VectorIntegrand& f,
                         int level) {
  PanelSum out;
  out.values.assign(outputs, {});
  const double half = 0.5 * (panel.b - panel.a);
  const double mid = 0.5 * (panel.a + panel.b);
  try {
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      auto v = f(mid + half * rule.nodes[k]);
      if (v.size() != outputs) throw std::logic_error("integrand returned the wrong number of outputs");
      for (std::size_t j = 0; j < outputs; ++j) out.values[j] += (half * rule.weights[k]) * v[j];
    }
    out.panels = 1;
    out.nodes = rule.nodes.size();
  } catch (const NumericalError&) {
    if (level >= kMaxRefinements) throw;
    auto left = integrate_panel({panel.a, mid}, rule, outputs, f, level + 1);
    auto right = integrate_panel({mid, panel.b}, rule, outputs, f, level + 1);
    for (std::size_t j = 0; j < outputs; ++j) out.values[j] = left.values[j] + right.values[j];
    out.panels = left.panels + right.panels;
    out.nodes = left.nodes + right.nodes;
  }
  return out;
}

}  // namespace

IntegrationResult integrate(const std::vector<Panel>& panels, int nodes_per_panel, std::size_t outputs,
                            const VectorIntegrand& f, int threads) {
  const GaussRule rule = gauss_legendre(nodes_per_panel);
  std::vector<PanelSum> sums(panels.size());
  std::vector<std::exception_ptr> errors(panels.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next++; p < panels.size(); p = next++) {
      try {
        sums[p] = integrate_panel(panels[p], rule, outputs, f, 0);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(panels.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  IntegrationResult result;
  result.values.assign(outputs, {});
  for (std::size_t p = 0; p < panels.size(); ++p) {
    if (errors[p]) std::rethrow_exception(errors[p]);
    for (std::size_t j = 0; j < outputs; ++j) result.values[j] += sums[p].values[j];
    result.panels += sums[p].panels;
    result.nodes += sums[p].nodes;
  }
  return result;
}

}  // namespace treespectra
