#include "treespectra/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <deque>

#include "treespectra/errors.hpp"

namespace treespectra {

DenseTruncation::DenseTruncation(const TreeModel& model, int radius) : radius_(radius) {
  if (radius < 0) throw TopologyError("truncation radius must be non-negative");
  vertices_ = model.ball(radius);
  for (std::size_t k = 0; k < vertices_.size(); ++k) index_.emplace(vertices_[k], k);
  diagonal_.resize(vertices_.size());
  couplings_.resize(vertices_.size());
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    diagonal_[k] = model.diagonal(vertices_[k]);
    for (const auto& w : model.neighbors(vertices_[k])) {
      if (auto it = index_.find(w); it != index_.end()) {
        couplings_[k].emplace_back(it->second, model.weight(vertices_[k], w));
      }
    }
  }
  if (vertices_.size() <= kDenseLimit) {
    const auto n = static_cast<Eigen::Index>(vertices_.size());
    dense_ = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      dense_(r, r) = diagonal_[k];
      for (auto [c, w] : couplings_[k]) dense_(r, static_cast<Eigen::Index>(c)) = w;
    }
  }
}

std::optional<std::size_t> DenseTruncation::find(const Vertex& v) const {
  if (auto it = index_.find(v); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t DenseTruncation::row(const Vertex& v) const {
  if (auto r = find(v)) return *r;
  throw TopologyError("vertex outside the truncation of radius " + std::to_string(radius_));
}

const Eigen::MatrixXd& DenseTruncation::dense() const {
  if (!has_dense()) {
    throw NumericalError("truncation with " + std::to_string(size()) + " vertices is too large for dense algebra");
  }
  return dense_;
}

Eigen::VectorXcd DenseTruncation::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    Complex acc = diagonal_[k] * x(r);
    for (auto [c, w] : couplings_[k]) acc += w * x(static_cast<Eigen::Index>(c));
    y(r) = acc;
  }
  return y;
}

namespace {

using LongComplex = std::complex<long double>;
using Couplings = std::vector<std::vector<std::pair<std::size_t, double>>>;

void require_upper(Complex gamma) {
  if (!(gamma.imag() > 0.0)) throw ParameterError("dense resolvent needs Im gamma > 0");
}

// Solves (H - gamma) X = B for a sparse symmetric H given by its diagonal and
// couplings.  The LU factorization is in double precision; each refinement
// step recomputes the residual in long double, which makes small entries of X
// accurate relative to their own size rather than to the largest entry.
Eigen::MatrixXcd shifted_solve(const std::vector<double>& diagonal, const Couplings& couplings, Complex gamma,
                               const Eigen::MatrixXcd& rhs) {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = diagonal[static_cast<std::size_t>(i)] - gamma;
    for (auto [c, w] : couplings[static_cast<std::size_t>(i)]) a(i, static_cast<Eigen::Index>(c)) = w;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  Eigen::MatrixXcd x = lu.solve(rhs);
  const LongComplex g(gamma.real(), gamma.imag());
  Eigen::MatrixXcd r(n, rhs.cols());
  for (int step = 0; step < kRefinementSteps; ++step) {
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        LongComplex acc = (static_cast<long double>(diagonal[row]) - g) * LongComplex(x(i, j));
        for (auto [c, w] : couplings[row]) acc += static_cast<long double>(w) * LongComplex(x(static_cast<Eigen::Index>(c), j));
        LongComplex res = LongComplex(rhs(i, j)) - acc;
        r(i, j) = Complex(static_cast<double>(res.real()), static_cast<double>(res.imag()));
      }
    }
    x += lu.solve(r);
  }
  return x;
}

}  // namespace

Complex dense_resolvent_entry(const DenseTruncation& trunc, const Vertex& v, const Vertex& w, Complex gamma) {
  require_upper(gamma);
  const auto rv = static_cast<Eigen::Index>(trunc.row(v));
  const auto rw = static_cast<Eigen::Index>(trunc.row(w));
  trunc.dense();
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(trunc.size()));
  e(rw) = 1.0;
  return shifted_solve(trunc.diagonals(), trunc.all_couplings(), gamma, e)(rv, 0);
}

Eigen::MatrixXcd dense_resolvent_matrix(const DenseTruncation& trunc, Complex gamma) {
  require_upper(gamma);
  trunc.dense();
  const auto n = static_cast<Eigen::Index>(trunc.size());
  return shifted_solve(trunc.diagonals(), trunc.all_couplings(), gamma, Eigen::MatrixXcd::Identity(n, n));
}

DenseSpectrum dense_spectrum(const DenseTruncation& trunc) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(trunc.dense());
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double spectrum_reconstruction_error(const DenseTruncation& trunc, const DenseSpectrum& s) {
  Eigen::MatrixXd rebuilt = s.vectors * s.values.asDiagonal() * s.vectors.transpose();
  return (rebuilt - trunc.dense()).cwiseAbs().maxCoeff();
}

Complex dense_function_entry(const DenseTruncation& trunc, const DenseSpectrum& s, const TestFunction& f,
                             const Vertex& v, const Vertex& w) {
  const auto rv = static_cast<Eigen::Index>(trunc.row(v));
  const auto rw = static_cast<Eigen::Index>(trunc.row(w));
  Complex acc{};
  for (Eigen::Index k = 0; k < s.values.size(); ++k) acc += f(s.values(k)) * (s.vectors(rv, k) * s.vectors(rw, k));
  return acc;
}

Complex dense_function_entry(const DenseTruncation& trunc, const TestFunction& f, const Vertex& v, const Vertex& w) {
  if (f.kind() == TestFunction::Kind::one) return v == w ? 1.0 : 0.0;
  if (f.kind() == TestFunction::Kind::polynomial) return polynomial_function_entry(trunc, f.coefficients(), v, w);
  return dense_function_entry(trunc, dense_spectrum(trunc), f, v, w);
}

Eigen::VectorXcd polynomial_apply(const DenseTruncation& trunc, const std::vector<Complex>& coefficients,
                                  const Eigen::VectorXcd& x) {
  if (coefficients.empty()) return Eigen::VectorXcd::Zero(x.size());
  Eigen::VectorXcd y = coefficients.back() * x;
  for (std::size_t k = coefficients.size() - 1; k-- > 0;) y = trunc.apply(y) + coefficients[k] * x;
  return y;
}

Complex polynomial_function_entry(const DenseTruncation& trunc, const std::vector<Complex>& coefficients,
                                  const Vertex& v, const Vertex& w) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(trunc.size()));
  e(static_cast<Eigen::Index>(trunc.row(w))) = 1.0;
  return polynomial_apply(trunc, coefficients, e)(static_cast<Eigen::Index>(trunc.row(v)));
}

Complex restricted_dense_resolvent(const DenseTruncation& trunc, const DirectedEdge& remove, const Vertex& v,
                                   const Vertex& w, Complex gamma) {
  require_upper(gamma);
  const std::size_t a = trunc.row(remove.from);
  const std::size_t b = trunc.row(remove.to);
  const auto& ca = trunc.couplings(a);
  if (std::none_of(ca.begin(), ca.end(), [b](const auto& c) { return c.first == b; })) {
    throw TopologyError("removed edge is not an edge of the truncation");
  }
  // component of a once the edge {a, b} is cut
  std::vector<int> local(trunc.size(), -1);
  std::vector<std::size_t> kept{a};
  local[a] = 0;
  std::deque<std::size_t> queue{a};
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (auto [y, weight] : trunc.couplings(x)) {
      if ((x == a && y == b) || local[y] >= 0) continue;
      local[y] = static_cast<int>(kept.size());
      kept.push_back(y);
      queue.push_back(y);
    }
  }
  const int lv = local[trunc.row(v)];
  const int lw = local[trunc.row(w)];
  if (lv < 0 || lw < 0) throw TopologyError("vertex lies in the removed branch");
  trunc.dense();
  std::vector<double> diagonal;
  Couplings couplings(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    diagonal.push_back(trunc.diagonal(kept[i]));
    for (auto [y, weight] : trunc.couplings(kept[i])) {
      if (local[y] >= 0 && !(kept[i] == a && y == b)) couplings[i].emplace_back(static_cast<std::size_t>(local[y]), weight);
    }
  }
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kept.size()));
  e(lw) = 1.0;
  return shifted_solve(diagonal, couplings, gamma, e)(lv, 0);
}

}  // namespace treespectra
