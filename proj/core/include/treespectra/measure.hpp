#pragma once

// Finitely additive measures on the cylinder sets of the boundary.
//
// For an eigenfunction f (Hf = gamma f) and a child u+ of u,
//     nu(dT_{u+}) = -p_u(u+) G(o, u) { f(u+) - zeta(u+|u) f(u) },  nu(dT) = f(o).
// For a boundary energy E the spectral measure is
//     nu_E(dT_{u+}) = |G(o, u; E+i0)|^2 |p_u(u+) Im zeta(u+|u)| / pi.
// Values are stored down to a fixed depth; deeper cylinders are evaluated from
// the same formulas on demand.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "treespectra/green.hpp"
#include "treespectra/tree.hpp"

namespace treespectra {

enum class MeasureKind { eigenfunction, spectral };

using VertexFunction = std::function<Complex(const Vertex&)>;

class CylinderMeasure {
 public:
  CylinderMeasure(MeasureKind kind, SpectralParameter parameter, Complex total, int depth,
                  std::map<Vertex, Complex> stored, VertexFunction formula);

  MeasureKind kind() const { return kind_; }
  const SpectralParameter& parameter() const { return parameter_; }
  Complex total() const { return total_; }
  int depth() const { return depth_; }
  const std::map<Vertex, Complex>& stored() const { return stored_; }

  Complex operator()(const Cylinder& c) const;
  Complex operator()(const Vertex& base) const;

  // max |nu(dT_u) - sum_{u+} nu(dT_{u+})| over stored u with children also
  // stored, including u = o against the total.
  double additivity_residual(const TreeModel& model) const;

  // {"kind", "parameter", "depth", "total": [re, im],
  //  "cylinders": [{"address", "re", "im"}, ...]}
  std::string to_document(const TreeModel& model) const;

 private:
  MeasureKind kind_;
  SpectralParameter parameter_;
  Complex total_;
  int depth_;
  std::map<Vertex, Complex> stored_;
  VertexFunction formula_;
};

// max over the ball of radius `radius` of |(Hf)(v) - gamma f(v)|.
double eigen_residual(const ZetaField& field, const VertexFunction& f, int radius);

// Throws NumericalError if eigen_residual(field, f, depth) >= kEigenGate.
CylinderMeasure nu_from_eigenfunction(const ZetaField& field, VertexFunction f, int depth);

// sum over cylinders dT_s with |s| = depth of P_{gamma,s}(v) nu(dT_s).
Complex reconstruct(const ZetaField& field, const CylinderMeasure& measure, const Vertex& v, int depth);

double nu_E_cylinder(const ZetaField& field, const Vertex& u_plus);
double nu_E_cylinder(const TreeModel& model, double energy, const Vertex& u_plus);

CylinderMeasure spectral_measure(const ZetaField& field, int depth);

// sum over |s| = depth of conj(P_{E,s}(v)) P_{E,s}(w) nu_E(dT_s).
Complex psi_via_boundary(const ZetaField& field, const Vertex& v, const Vertex& w, int depth);
Complex psi_via_boundary(const TreeModel& model, double energy, const Vertex& v, const Vertex& w, int depth);

// The cylinders of one depth together with their nu_E weights, reused by the
// boundary sums of the Fourier module.
struct BoundaryShell {
  int depth = 0;
  std::vector<Vertex> bases;
  std::vector<Address> addresses;
  std::vector<double> weights;

  // P_{E,s}(x) for every base s; depth must exceed |x|.
  std::vector<Complex> kernel_column(const ZetaField& field, const Vertex& x) const;
};

BoundaryShell boundary_shell(const ZetaField& field, int depth);

}  // namespace treespectra
