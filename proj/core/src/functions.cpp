#include "treespectra/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "treespectra/errors.hpp"
#include "treespectra/green.hpp"

namespace treespectra {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t k = s.find(sep, start);
    out.push_back(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

double real_part(std::string_view s) {
  Complex z = parse_complex(s);
  if (z.imag() != 0.0) throw ParameterError("expected a real number, got '" + std::string(s) + "'");
  return z.real();
}

std::string format_complex(std::complex<double> z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << 'i';
  return os.str();
}

}  // namespace

TestFunction TestFunction::one() { return TestFunction{}; }

TestFunction TestFunction::polynomial(std::vector<std::complex<double>> coefficients) {
  if (coefficients.empty()) throw ParameterError("polynomial needs at least one coefficient");
  for (auto c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ParameterError("non-finite coefficient");
  }
  TestFunction f;
  f.kind_ = Kind::polynomial;
  f.coefficients_ = std::move(coefficients);
  return f;
}

TestFunction TestFunction::indicator(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw ParameterError("indicator needs finite a < b");
  TestFunction f;
  f.kind_ = Kind::indicator;
  f.a_ = a;
  f.b_ = b;
  return f;
}

TestFunction TestFunction::tabulated(std::vector<double> x, std::vector<std::complex<double>> y) {
  if (x.size() < 2 || x.size() != y.size()) throw ParameterError("table needs at least two (x, y) pairs");
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (!(x[k] < x[k + 1])) throw ParameterError("table abscissae must be strictly increasing");
  }
  TestFunction f;
  f.kind_ = Kind::tabulated;
  f.x_ = std::move(x);
  f.y_ = std::move(y);
  return f;
}

TestFunction TestFunction::parse(std::string_view text) {
  if (text == "one") return one();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParameterError("unknown test function '" + std::string(text) + "'");
  std::string_view head = text.substr(0, colon);
  std::string_view body = text.substr(colon + 1);
  if (head == "poly") {
    std::vector<std::complex<double>> c;
    for (auto part : split(body, ',')) c.push_back(parse_complex(part));
    return polynomial(std::move(c));
  }
  if (head == "indicator") {
    auto parts = split(body, ',');
    if (parts.size() != 2) throw ParameterError("indicator needs 'indicator:a,b'");
    return indicator(real_part(parts[0]), real_part(parts[1]));
  }
  if (head == "table") {
    std::vector<double> x;
    std::vector<std::complex<double>> y;
    for (auto part : split(body, ',')) {
      auto eq = part.find('=');
      if (eq == std::string_view::npos) throw ParameterError("table entries must look like x=y");
      x.push_back(real_part(part.substr(0, eq)));
      y.push_back(parse_complex(part.substr(eq + 1)));
    }
    return tabulated(std::move(x), std::move(y));
  }
  throw ParameterError("unknown test function '" + std::string(text) + "'");
}

std::optional<int> TestFunction::degree() const {
  if (kind_ == Kind::one) return 0;
  if (kind_ == Kind::polynomial) return static_cast<int>(coefficients_.size()) - 1;
  return std::nullopt;
}

std::optional<std::pair<double, double>> TestFunction::support() const {
  if (kind_ == Kind::indicator) return std::pair{a_, b_};
  if (kind_ == Kind::tabulated) return std::pair{x_.front(), x_.back()};
  return std::nullopt;
}

std::complex<double> TestFunction::operator()(double e) const {
  switch (kind_) {
    case Kind::one:
      return 1.0;
    case Kind::polynomial: {
      std::complex<double> acc{};
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * e + *it;
      return acc;
    }
    case Kind::indicator:
      return (e >= a_ && e <= b_) ? 1.0 : 0.0;
    case Kind::tabulated: {
      if (e < x_.front() || e > x_.back()) return 0.0;
      auto k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), e) - x_.begin());
      if (k >= x_.size()) return y_.back();
      double t = (e - x_[k - 1]) / (x_[k] - x_[k - 1]);
      return (1.0 - t) * y_[k - 1] + t * y_[k];
    }
  }
  return 0.0;
}

TestFunction TestFunction::conj() const {
  TestFunction f = *this;
  for (auto& c : f.coefficients_) c = std::conj(c);
  for (auto& y : f.y_) y = std::conj(y);
  return f;
}

std::string TestFunction::describe() const {
  std::string out;
  switch (kind_) {
    case Kind::one:
      return "one";
    case Kind::polynomial:
      out = "poly:";
      for (std::size_t k = 0; k < coefficients_.size(); ++k) out += (k ? "," : "") + format_complex(coefficients_[k]);
      return out;
    case Kind::indicator:
      return "indicator:" + format_complex(a_) + "," + format_complex(b_);
    case Kind::tabulated:
      out = "table:";
      for (std::size_t k = 0; k < x_.size(); ++k) {
        out += (k ? "," : "") + format_complex(x_[k]) + "=" + format_complex(y_[k]);
      }
      return out;
  }
  return out;
}

}  // namespace treespectra
