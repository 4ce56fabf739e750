#pragma once

// Spectral expansion of F(H) over the absolutely continuous band of a tail
// model: energy integrals by composite Gauss-Legendre quadrature, boundary
// integrals as exact sums over the cylinders of one depth.
//
//   F(H)(v, w)   = int F(E) Psi_{E,v}(w) dE
//                = int int F(E) conj(P_{E,xi}(v)) P_{E,xi}(w) dnu_E(xi) dE
//   <f, F(H) g>  = int int F(E) conj(fhat_xi(E)) ghat_xi(E) dnu_E(xi) dE,
//   fhat_xi(E)   = <P_{E,xi}, f>.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treespectra/functions.hpp"
#include "treespectra/green.hpp"
#include "treespectra/quadrature.hpp"
#include "treespectra/tree.hpp"

namespace treespectra {

struct EnergyWindow {
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();
  std::optional<double> margin;  // default 1e-6 * band width
  PanelLayout layout;

  static EnergyWindow full() { return {}; }
  static EnergyWindow interval(double a, double b) { return {a, b, std::nullopt, {}}; }
};

// The integration interval actually used: I clipped to the band shrunk by the
// margin and to the support of F; edges that touch the band are graded.
struct ResolvedWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool graded_low = false;
  bool graded_high = false;
  std::vector<Panel> panels;
  int nodes = 0;
};

ResolvedWindow resolve_window(const TreeModel& model, const EnergyWindow& window, const TestFunction& f);

struct FiniteVector {
  std::vector<std::pair<Vertex, Complex>> entries;

  static FiniteVector delta(const Vertex& v, Complex value = 1.0) { return {{{v, value}}}; }
  FiniteVector& add(const Vertex& v, Complex value);
  Complex at(const Vertex& v) const;
  int max_depth(const TreeModel& model) const;
};

struct KernelTerm {
  Vertex row;
  Vertex column;
  Complex value;
};

// K(v, w) = sum of the values of the terms with row v and column w.
struct FiniteKernel {
  std::vector<KernelTerm> terms;

  FiniteKernel& add(const Vertex& v, const Vertex& w, Complex value);
  int max_depth(const TreeModel& model) const;
};

struct FourierOptions {
  int threads = 1;
  int extra_depth = 0;   // cylinder depth beyond the minimum
  int oracle_radius = 14;
};

struct QuadratureInfo {
  std::size_t panels = 0;
  std::size_t nodes = 0;
};

Complex fourier_coeff(const ZetaField& field, const RayAddress& xi, const FiniteVector& f);
Complex fourier_coeff(const TreeModel& model, double energy, const RayAddress& xi, const FiniteVector& f);

// `value` is the integral of F Psi; `boundary_value` the double integral over
// energy and boundary.  Both use the same nodes.
struct KernelEntryReport {
  Complex value;
  Complex boundary_value;
  double discrepancy = 0.0;
  int depth = 0;
  QuadratureInfo quadrature;
};

KernelEntryReport kernel_entry(const TreeModel& model, const TestFunction& f, const Vertex& v, const Vertex& w,
                               const EnergyWindow& window, const FourierOptions& options = {});

// `value` is the boundary route; `reference` the same quantity assembled from
// kernel entries int F Psi_{E,v}(w) dE.
struct BoundaryIntegralReport {
  Complex value;
  Complex reference;
  double discrepancy = 0.0;
  int depth = 0;
  QuadratureInfo quadrature;
};

// [F(H) f](v)
BoundaryIntegralReport apply_function(const TreeModel& model, const TestFunction& F, const FiniteVector& f,
                                      const Vertex& v, const EnergyWindow& window, const FourierOptions& options = {});

// tr[F(H) K]
BoundaryIntegralReport trace_functional(const TreeModel& model, const TestFunction& F, const FiniteKernel& k,
                                        const EnergyWindow& window, const FourierOptions& options = {});

// Hilbert-Schmidt form: int int |F|^2 ||K P_{E,xi}||^2 dnu_E dE (value) against
// int |F|^2 sum_{v,w,u} conj(K(u,v)) K(u,w) Psi_{E,v}(w) dE (reference).
BoundaryIntegralReport hilbert_schmidt(const TreeModel& model, const TestFunction& F, const FiniteKernel& k,
                                       const EnergyWindow& window, const FourierOptions& options = {});

struct PlancherelReport {
  Complex lhs;  // <f, F(H) g> on the truncation
  Complex rhs;  // energy/boundary double integral
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / |lhs|, or abs_err when lhs == 0
  QuadratureInfo quadrature;
  int depth = 0;
  int oracle_radius = 0;

  std::string to_document() const;
};

PlancherelReport plancherel_check(const TreeModel& model, const TestFunction& F, const FiniteVector& f,
                                  const FiniteVector& g, const EnergyWindow& window,
                                  const FourierOptions& options = {});

}  // namespace treespectra
