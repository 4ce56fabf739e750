#pragma once

// Brute-force ground truth on finite truncations of a model.
//
// The truncation keeps every vertex of the ball of radius R and drops all
// couplings leaving it, so boundary rows simply lose their outer neighbours.
// Rows follow the breadth-first order of TreeModel::ball.  The dense matrix is
// only formed for balls of at most kDenseLimit vertices; larger truncations
// still support sparse products (polynomial functions of H).

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "treespectra/functions.hpp"
#include "treespectra/tree.hpp"

namespace treespectra {

inline constexpr std::size_t kDenseLimit = 4096;

// Residual-correction steps after each dense LU solve.
inline constexpr int kRefinementSteps = 2;

class DenseTruncation {
 public:
  DenseTruncation(const TreeModel& model, int radius);

  int radius() const { return radius_; }
  std::size_t size() const { return vertices_.size(); }
  const Vertex& vertex(std::size_t row) const { return vertices_[row]; }
  std::optional<std::size_t> find(const Vertex& v) const;
  std::size_t row(const Vertex& v) const;  // throws TopologyError

  double diagonal(std::size_t row) const { return diagonal_[row]; }
  const std::vector<double>& diagonals() const { return diagonal_; }
  // (column, weight) pairs of the off-diagonal entries of a row
  const std::vector<std::pair<std::size_t, double>>& couplings(std::size_t row) const { return couplings_[row]; }
  const std::vector<std::vector<std::pair<std::size_t, double>>>& all_couplings() const { return couplings_; }

  bool has_dense() const { return dense_.size() > 0; }
  const Eigen::MatrixXd& dense() const;  // throws if size() > kDenseLimit

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

 private:
  int radius_;
  std::vector<Vertex> vertices_;
  std::map<Vertex, std::size_t> index_;
  std::vector<double> diagonal_;
  std::vector<std::vector<std::pair<std::size_t, double>>> couplings_;
  Eigen::MatrixXd dense_;
};

// (H_R - gamma)^{-1}(v, w) by a partial-pivoted LU solve followed by
// kRefinementSteps residual corrections; Im gamma must be > 0.
Complex dense_resolvent_entry(const DenseTruncation& trunc, const Vertex& v, const Vertex& w, Complex gamma);
Eigen::MatrixXcd dense_resolvent_matrix(const DenseTruncation& trunc, Complex gamma);

struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns are orthonormal eigenvectors
};

DenseSpectrum dense_spectrum(const DenseTruncation& trunc);

// max |sum_k lambda_k phi_k phi_k^T - H_R|
double spectrum_reconstruction_error(const DenseTruncation& trunc, const DenseSpectrum& spectrum);

// sum_k F(lambda_k) phi_k(v) phi_k(w)
Complex dense_function_entry(const DenseTruncation& trunc, const DenseSpectrum& spectrum, const TestFunction& f,
                             const Vertex& v, const Vertex& w);
Complex dense_function_entry(const DenseTruncation& trunc, const TestFunction& f, const Vertex& v, const Vertex& w);

// p(H_R) x by Horner's scheme with sparse products.
Eigen::VectorXcd polynomial_apply(const DenseTruncation& trunc, const std::vector<Complex>& coefficients,
                                  const Eigen::VectorXcd& x);
Complex polynomial_function_entry(const DenseTruncation& trunc, const std::vector<Complex>& coefficients,
                                  const Vertex& v, const Vertex& w);

// Resolvent of H_R restricted to the component of remove.from after deleting
// the edge {remove.from, remove.to}; v and w must lie in that component.
Complex restricted_dense_resolvent(const DenseTruncation& trunc, const DirectedEdge& remove, const Vertex& v,
                                   const Vertex& w, Complex gamma);

}  // namespace treespectra
