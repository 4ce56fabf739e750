#pragma once

// Composite Gauss-Legendre quadrature for vector-valued complex integrands.
//
// Panels next to a square-root band edge are subdivided geometrically toward
// the edge.  A panel whose integrand throws NumericalError at some node is
// split in half and retried, at most kMaxRefinements times.  Panel sums are
// formed node by node in a fixed order and added in panel order, so results do
// not depend on the number of threads.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace treespectra {

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1], ascending
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

struct Panel {
  double a = 0.0;
  double b = 0.0;
};

struct PanelLayout {
  int panels = 64;
  int nodes = 16;
  bool grade_low = false;   // refine toward a
  bool grade_high = false;  // refine toward b
  int edge_levels = 12;
  double edge_ratio = 0.2;
};

std::vector<Panel> make_panels(double a, double b, const PanelLayout& layout);

inline constexpr int kMaxRefinements = 3;

using VectorIntegrand = std::function<std::vector<std::complex<double>>(double)>;

struct IntegrationResult {
  std::vector<std::complex<double>> values;
  std::size_t panels = 0;  // after refinement
  std::size_t nodes = 0;   // integrand evaluations that entered the sum
};

IntegrationResult integrate(const std::vector<Panel>& panels, int nodes_per_panel, std::size_t outputs,
                            const VectorIntegrand& f, int threads = 1);

}  // namespace treespectra
