#pragma once

// Bounded test functions F(E) for the functional calculus F(H).

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treespectra {

class TestFunction {
 public:
  enum class Kind { one, polynomial, indicator, tabulated };

  static TestFunction one();
  // sum_k c_k E^k
  static TestFunction polynomial(std::vector<std::complex<double>> coefficients);
  // 1 on [a, b], 0 elsewhere
  static TestFunction indicator(double a, double b);
  // Piecewise linear through (x_k, y_k), x strictly increasing; 0 outside.
  static TestFunction tabulated(std::vector<double> x, std::vector<std::complex<double>> y);

  // "one", "poly:c0,c1,...", "indicator:a,b", "table:x0=y0,x1=y1,..."
  // (coefficients and table values may be complex, e.g. "1+2i").
  static TestFunction parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::vector<std::complex<double>>& coefficients() const { return coefficients_; }
  // Polynomial degree; 0 for `one`, nullopt for the other kinds.
  std::optional<int> degree() const;
  // Closed interval outside which F vanishes (indicator and tabulated).
  std::optional<std::pair<double, double>> support() const;

  std::complex<double> operator()(double energy) const;
  TestFunction conj() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::one;
  std::vector<std::complex<double>> coefficients_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> x_;
  std::vector<std::complex<double>> y_;
};

}  // namespace treespectra
