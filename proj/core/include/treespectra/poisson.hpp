#pragma once

// Poisson kernel P_{gamma,xi}(v) = G(v^xi, v) / G(o, v^xi) and its checks.
//
// With [o, v] = (v_0, ..., v_k) and r = |v ^ xi| the kernel is the product
//     P(v) = prod_{j=r}^{k-1} zeta(v_{j+1}|v_j) / prod_{j=0}^{r-1} zeta(v_j|v_{j+1}),
// so only the ancestors of v and the depth of the confluence are needed.

#include <cstddef>
#include <vector>

#include "treespectra/green.hpp"
#include "treespectra/tree.hpp"

namespace treespectra {

struct PoissonEvaluation {
  Complex value;
  Vertex confluence;
  std::vector<Complex> toward_factors;   // zeta(v_{j+1}|v_j), j = r..k-1
  std::vector<Complex> against_factors;  // zeta(v_j|v_{j+1}), j = 0..r-1
};

PoissonEvaluation poisson_eval(const ZetaField& field, const RayAddress& xi, const Vertex& v);
Complex poisson_value(const ZetaField& field, const RayAddress& xi, const Vertex& v);

// P(v) for every possible confluence depth: entry r is the kernel value for
// rays that leave [o, v] at depth r (r = |v| means rays through v).
std::vector<Complex> poisson_by_confluence(const ZetaField& field, const Vertex& v);

// One edge step u -> u_plus (u_plus a child of u) from base = P(u).
Complex poisson_step(const ZetaField& field, const RayAddress& xi, const Vertex& u, const Vertex& u_plus,
                     Complex base);

// Memoizes the denominators along the ray so repeated evaluations for the same
// xi only walk from v up to the confluence.  Not safe to share between threads.
class PoissonKernel {
 public:
  PoissonKernel(const ZetaField& field, RayAddress xi);

  const RayAddress& ray() const { return xi_; }
  Complex operator()(const Vertex& v) const;

 private:
  Complex against(std::size_t depth) const;

  const ZetaField* field_;
  RayAddress xi_;
  mutable std::vector<Vertex> ray_;
  mutable std::vector<Complex> against_{Complex{1.0, 0.0}};
};

struct LimitSample {
  int depth = 0;
  Vertex u;
  Complex ratio;  // G(u, v) / G(o, u)
  double deviation = 0.0;
};

struct LimitReport {
  Complex kernel;
  std::vector<LimitSample> samples;
  double max_deviation = 0.0;
};

// Every depth must exceed |v ^ xi|.
LimitReport poisson_limit_check(const ZetaField& field, const RayAddress& xi, const Vertex& v,
                                const std::vector<int>& depths);

struct EigenReport {
  double max_residual = 0.0;
  Vertex worst;
  std::size_t vertices = 0;
};

// max over the region of |(H P)(v) - gamma P(v)|.
EigenReport eigen_check(const ZetaField& field, const RayAddress& xi, const std::vector<Vertex>& region);

}  // namespace treespectra
