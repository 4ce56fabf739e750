#pragma once

// Green functions of H = A + V (or the edge-weighted H_p) on a TreeModel.
//
// zeta(v|w) is the recursion variable at v looking away from the neighbour w:
//     zeta(v|w) = -p_v(w) * G^{(v|w)}(v, v; gamma),
// where G^{(v|w)} is the resolvent of H restricted to the component of v after
// deleting the edge {v, w}.  For unit weights this is minus the restricted
// diagonal Green function.  All Green functions follow from zeta by products
// along arcs.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treespectra/tree.hpp"

namespace treespectra {

// gamma = E + i*eta with eta > 0, or the boundary value E + i0 (eta == 0).
struct SpectralParameter {
  double energy = 0.0;
  double eta = 1.0;

  bool boundary() const { return eta == 0.0; }
  Complex gamma() const { return {energy, eta}; }

  static SpectralParameter at(Complex gamma) { return {gamma.real(), gamma.imag()}; }
  static SpectralParameter boundary_value(double energy) { return {energy, 0.0}; }
};

// Parses "E+etai" / "E-etai"-style complex numbers ("0+1i", "0.5+0.1i", "2",
// "1i", "-0.3+0i").  Eta must be >= 0; eta == 0 means E + i0.
SpectralParameter parse_spectral_parameter(std::string_view text);
Complex parse_complex(std::string_view text);

// Throws ParameterError unless eta > 0, or eta == 0 with a tail and E strictly
// inside the tail band.
void check_admissible(const TreeModel& model, const SpectralParameter& parameter);

// Forward zeta of the homogeneous q-ary tail: the root of
//     q t^2 g^2 - (V0 - gamma) g + 1 = 0,  zeta = -t g,
// with Im g > 0 (eta > 0) or its eta -> 0 limit inside the band.
Complex zeta_homogeneous(int branching, double tail_potential, double tail_weight,
                         const SpectralParameter& parameter);

class ZetaField {
 public:
  const TreeModel& model() const { return *model_; }
  const SpectralParameter& parameter() const { return parameter_; }
  Complex gamma() const { return parameter_.gamma(); }

  // zeta(at|away_from); the two vertices must be adjacent.
  Complex zeta(const Vertex& at, const Vertex& away_from) const;
  Complex zeta(const DirectedEdge& e) const { return zeta(e.from, e.to); }

  Complex green_diagonal(const Vertex& v) const;
  // G(v,v) = -1 / (2 m_v)
  Complex m(const Vertex& v) const { return -1.0 / (2.0 * green_diagonal(v)); }

  // Core fast paths: zeta(c|parent c) and zeta(parent c|c).
  Complex outward(std::uint32_t c) const { return outward_[c]; }
  Complex inward(std::uint32_t c) const { return inward_[c]; }
  Complex core_diagonal(std::uint32_t c) const { return diagonal_[c]; }
  Complex tail_forward() const { return tail_forward_; }

 private:
  friend ZetaField compute_zeta_field(const TreeModel& model, const SpectralParameter& parameter);

  // zeta(x_k | x_{k+1}) on a tail chain below frontier vertex f (x_0 = f).
  Complex tail_backward(std::uint32_t frontier, std::size_t k) const;
  // G(x_k, x_k) for k >= 1.
  Complex tail_diagonal(std::uint32_t frontier, std::size_t k) const;

  const TreeModel* model_ = nullptr;
  SpectralParameter parameter_;
  std::vector<Complex> outward_;
  std::vector<Complex> inward_;
  std::vector<Complex> diagonal_;
  std::vector<Complex> frontier_backward_;
  Complex tail_forward_{};
};

// Two sweeps over the core (leaves inward, then outward), seeded by the tail
// fixed point.  The model must outlive the returned field.
ZetaField compute_zeta_field(const TreeModel& model, const SpectralParameter& parameter);

// G(v, w; gamma) as the zeta product along [v, w] times G(w, w).
Complex green_pair(const ZetaField& field, const Vertex& v, const Vertex& w);

// G^{(a|b)}(v0, vk) for remove = (a|b).  One endpoint must be a and the arc
// between the endpoints must stay on a's side of the removed edge.
Complex green_restricted(const ZetaField& field, const DirectedEdge& remove, const Vertex& v0, const Vertex& vk);

// Psi_{gamma,v}(w) = Im G(v, w; gamma) / pi.
double psi(const ZetaField& field, const Vertex& v, const Vertex& w);
double psi(const TreeModel& model, const Vertex& v, const Vertex& w, const SpectralParameter& parameter);

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
  std::size_t evaluations = 0;
};

struct IdentityReport {
  SpectralParameter parameter;
  std::size_t samples = 0;
  std::vector<IdentityResidual> residuals;

  double max_residual() const;
  const IdentityResidual& at(std::string_view name) const;
};

// Evaluates the exact Green-function identities on `samples` random vertices
// and non-backtracking paths (length <= 6) drawn from the ball of radius
// core_radius + 2.  Restricted Green functions are obtained independently by
// Schur complements of full Green functions.
IdentityReport identity_suite(const ZetaField& field, std::size_t samples, std::uint64_t seed);

}  // namespace treespectra
