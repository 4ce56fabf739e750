#include <Eigen/Dense>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "treespectra/errors.hpp"
#include "treespectra/oracle.hpp"

using namespace treespectra;
using fixtures::at;

namespace {

constexpr double kTight = 1e-12;

bool close(Complex a, Complex b, double tol = kTight) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("spectral parameters parse") {
  auto p = parse_spectral_parameter("0+1i");
  CHECK(p.energy == 0.0);
  CHECK(p.eta == 1.0);
  p = parse_spectral_parameter("0.5+0.1i");
  CHECK(p.energy == 0.5);
  CHECK(p.eta == 0.1);
  p = parse_spectral_parameter("2");
  CHECK(p.boundary());
  CHECK(p.energy == 2.0);
  p = parse_spectral_parameter("-0.3+0i");
  CHECK(p.boundary());
  CHECK(p.energy == -0.3);
  CHECK(parse_spectral_parameter("1i").eta == 1.0);
  CHECK(parse_spectral_parameter("i").eta == 1.0);
  p = parse_spectral_parameter("1e-3+2e-1i");
  CHECK(p.energy == 1e-3);
  CHECK(p.eta == 0.2);
  CHECK_THROWS_AS(parse_spectral_parameter("0-1i"), ParameterError);
  CHECK_THROWS_AS(parse_spectral_parameter("abc"), ParameterError);
  CHECK_THROWS_AS(parse_spectral_parameter(""), ParameterError);
}

TEST_CASE("admissibility") {
  CHECK_THROWS_AS(compute_zeta_field(fixtures::path2(), SpectralParameter::boundary_value(0.0)), ParameterError);
  CHECK_THROWS_AS(compute_zeta_field(fixtures::regular3(), SpectralParameter::boundary_value(3.0)),
                  ParameterError);
  CHECK_THROWS_AS(compute_zeta_field(fixtures::regular3(), {0.0, -1.0}), ParameterError);
  CHECK_NOTHROW(compute_zeta_field(fixtures::regular3(), SpectralParameter::boundary_value(2.8)));
}

TEST_CASE("homogeneous tail fixed point") {
  CHECK(close(zeta_homogeneous(2, 0.0, 1.0, {0.0, 1.0}), Complex(0.0, -0.5)));
  CHECK(close(zeta_homogeneous(2, 0.0, 1.0, SpectralParameter::boundary_value(0.0)),
              Complex(0.0, -std::sqrt(2.0) / 2.0)));
  CHECK(close(zeta_homogeneous(1, 0.0, 1.0, {0.0, 1.0}), Complex(0.0, (1.0 - std::sqrt(5.0)) / 2.0)));
  CHECK_THROWS_AS(zeta_homogeneous(0, 0.0, 1.0, {0.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(zeta_homogeneous(2, 0.0, 1.0, SpectralParameter::boundary_value(3.0)), ParameterError);
}

TEST_CASE("homogeneous fixed point solves its quadratic on the chosen branch") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const int q = 1 + k % 4;
    const double v0 = u(rng);
    const double t = k % 3 == 0 ? -0.7 : 1.3;
    SpectralParameter p{u(rng) * 3.0, std::pow(10.0, u(rng))};
    const Complex z = zeta_homogeneous(q, v0, t, p);
    // q t zeta^2 ... in terms of g = -zeta/t: q t^2 g^2 - (V0 - gamma) g + 1 = 0
    const Complex g = -z / t;
    CHECK(std::abs(q * t * t * g * g - (v0 - p.gamma()) * g + 1.0) < 1e-10 * (1.0 + std::norm(g) * q * t * t));
    CHECK(g.imag() > 0.0);
  }
}

TEST_CASE("boundary zeta has modulus q^{-1/2} inside the band") {
  for (int q : {1, 2, 3, 5}) {
    const double edge = 2.0 * std::sqrt(q);
    for (double s : {-0.99, -0.5, 0.0, 0.3, 0.97}) {
      const Complex z = zeta_homogeneous(q, 0.0, 1.0, SpectralParameter::boundary_value(s * edge));
      CHECK(std::abs(z) == doctest::Approx(1.0 / std::sqrt(q)).epsilon(1e-13));
      CHECK(z.imag() < 0.0);
    }
  }
}

TEST_CASE("two-vertex path at gamma = i") {
  const auto& m = fixtures::path2();
  const auto f = compute_zeta_field(m, {0.0, 1.0});
  const Vertex o = m.origin();
  const Vertex a = at(m, "0");
  CHECK(close(f.zeta(o, a), Complex(0.0, -1.0)));
  CHECK(close(f.green_diagonal(a), Complex(0.0, 0.5)));
  CHECK(close(green_pair(f, o, a), Complex(0.5, 0.0)));
  CHECK(close(green_restricted(f, {a, o}, a, a), Complex(0.0, 1.0)));
}

TEST_CASE("single vertex") {
  TreeModel m(path_description(1, {2.0}));
  const auto f = compute_zeta_field(m, {0.0, 1.0});
  CHECK(close(f.green_diagonal(m.origin()), 1.0 / Complex(2.0, -1.0)));
}

TEST_CASE("3-regular tree at gamma = i") {
  const auto& m = fixtures::regular3();
  const auto f = compute_zeta_field(m, {0.0, 1.0});
  const Vertex o = m.origin();
  for (const auto& v : m.ball(5)) {
    if (v == o) continue;
    CHECK(close(f.zeta(v, *m.parent(v)), Complex(0.0, -0.5)));
  }
  CHECK(close(f.green_diagonal(o), Complex(0.0, 0.4)));
  CHECK(close(f.m(o), Complex(0.0, 1.25)));
  CHECK(close(green_pair(f, o, at(m, "1")), Complex(0.2, 0.0)));
  CHECK(close(green_pair(f, o, o), Complex(0.0, 0.4)));
  CHECK(psi(f, o, o) == doctest::Approx(0.4 / std::numbers::pi).epsilon(1e-14));
  // m-difference and imaginary balance by hand
  const Complex z = f.zeta(at(m, "1"), o);
  CHECK(close(1.0 / z - z, 2.0 * f.m(o)));
  CHECK(2.0 * std::abs(z.imag()) == doctest::Approx(std::abs(z.imag()) / std::norm(z) - 1.0));
}

TEST_CASE("3-regular tree at E = 0 + i0") {
  const auto& m = fixtures::regular3();
  const auto f = compute_zeta_field(m, SpectralParameter::boundary_value(0.0));
  const Vertex o = m.origin();
  CHECK(close(f.zeta(at(m, "2"), o), Complex(0.0, -std::sqrt(2.0) / 2.0)));
  CHECK(close(f.green_diagonal(o), Complex(0.0, std::sqrt(2.0) / 3.0)));
  CHECK(psi(f, o, o) == doctest::Approx(std::sqrt(2.0) / (3.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(psi(m, o, o, SpectralParameter::boundary_value(0.0)) == doctest::Approx(0.150053).epsilon(1e-6));
  CHECK(std::abs(green_pair(f, o, at(m, "0")).imag()) < kTight);
  for (const auto& v : m.ball(6)) CHECK(std::isfinite(std::abs(f.green_diagonal(v))));
}

TEST_CASE("green_pair is symmetric and reaches into the tail") {
  const auto& m = fixtures::regular3();
  const auto f = compute_zeta_field(m, {0.3, 0.2});
  auto ball = m.ball(5);
  for (std::size_t i = 0; i < ball.size(); i += 7) {
    for (std::size_t j = 0; j < ball.size(); j += 5) {
      CHECK(close(green_pair(f, ball[i], ball[j]), green_pair(f, ball[j], ball[i])));
    }
  }
}

TEST_CASE("restricted Green functions") {
  const auto& m = fixtures::regular3();
  const auto f = compute_zeta_field(m, {0.5, 0.1});
  const Vertex o = m.origin();
  const Vertex a = at(m, "0");
  const Vertex b = at(m, "0.1");
  // k = 0
  CHECK(close(green_restricted(f, {a, b}, a, a), -f.zeta(a, b)));
  // both endpoint orders
  const Vertex c = at(m, "2.1");
  CHECK(close(green_restricted(f, {a, b}, c, a), green_restricted(f, {a, b}, a, c)));
  CHECK_THROWS_AS(green_restricted(f, {a, o}, c, a), TopologyError);  // arc crosses the removed edge
  CHECK_THROWS_AS(green_restricted(f, {a, b}, c, o), TopologyError);  // no endpoint at a
  CHECK_THROWS_AS(green_restricted(f, {a, c}, a, a), TopologyError);  // not an edge
}

TEST_CASE("tail values do not depend on the stored core radius") {
  TreeModel small(regular_tree_description(2, 1, 0.4, true));
  TreeModel large(regular_tree_description(2, 4, 0.4, true));
  for (SpectralParameter p : {SpectralParameter{0.1, 0.5}, SpectralParameter::boundary_value(1.0)}) {
    const auto fs = compute_zeta_field(small, p);
    const auto fl = compute_zeta_field(large, p);
    for (const auto& v : small.ball(5)) {
      const Vertex w = large.vertex_at(small.address(v));
      CHECK(close(fs.green_diagonal(v), fl.green_diagonal(w)));
      if (auto par = small.parent(v)) {
        const Vertex pw = large.vertex_at(small.address(*par));
        CHECK(close(fs.zeta(v, *par), fl.zeta(w, pw)));
        CHECK(close(fs.zeta(*par, v), fl.zeta(pw, w)));
      }
    }
  }
}

TEST_CASE("Herglotz signs on random weighted trees") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = fixtures::random_finite(rng, trial % 2 == 1);
    const auto f = compute_zeta_field(m, fixtures::random_gamma(rng));
    for (const auto& v : m.ball(m.core_radius())) {
      CHECK(f.green_diagonal(v).imag() > 0.0);
      for (const auto& w : m.neighbors(v)) CHECK(std::copysign(1.0, m.weight(v, w)) * f.zeta(v, w).imag() < 0.0);
    }
  }
}

TEST_CASE("zeta at the conjugate parameter is the conjugate") {
  // The engine only accepts eta >= 0, so the conjugate side comes from a
  // direct restricted inverse at conj(gamma).
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    RandomTreeOptions o;
    o.max_vertices = 30;
    o.weighted = true;
    TreeModel m(random_tree_description(rng, o));
    const auto p = fixtures::random_gamma(rng);
    const auto f = compute_zeta_field(m, p);
    DenseTruncation trunc(m, m.core_radius());
    for (std::size_t c = 1; c < m.core_size(); ++c) {
      const Vertex v{static_cast<std::uint32_t>(c), {}};
      const Vertex par = *m.parent(v);
      // component of v after cutting {v, par}: the subtree of v
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < trunc.size(); ++r) {
        auto arc = arc_between(m, trunc.vertex(r), par);
        if (arc.size() >= 2 && arc[arc.size() - 2] == v) rows.push_back(r);
      }
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXcd a(n, n);
      std::size_t at_v = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (trunc.vertex(rows[static_cast<std::size_t>(i)]) == v) at_v = static_cast<std::size_t>(i);
        for (Eigen::Index j = 0; j < n; ++j) {
          a(i, j) = trunc.dense()(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]),
                                  static_cast<Eigen::Index>(rows[static_cast<std::size_t>(j)]));
        }
        a(i, i) -= std::conj(p.gamma());
      }
      const Complex restricted = a.inverse()(static_cast<Eigen::Index>(at_v), static_cast<Eigen::Index>(at_v));
      const Complex conj_side = -m.weight(v, par) * restricted;
      CHECK(std::abs(conj_side - std::conj(f.zeta(v, par))) < 1e-9 * (1.0 + std::abs(conj_side)));
    }
  }
}

TEST_CASE("identity suite on the homogeneous model") {
  const auto& m = fixtures::regular3();
  for (SpectralParameter p : {SpectralParameter{0.0, 1.0}, SpectralParameter{0.5, 0.1},
                              SpectralParameter::boundary_value(-1.7)}) {
    const auto report = identity_suite(compute_zeta_field(m, p), 300, 17);
    CHECK(report.residuals.size() == 12);
    for (const auto& r : report.residuals) {
      INFO(r.name);
      CHECK(r.evaluations > 0);
      CHECK(r.max_residual < kIdentityTolerance);
    }
  }
}

TEST_CASE("identity suite on random models, plain and weighted") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    RandomTreeOptions o;
    o.weighted = trial % 2 == 1;
    if (trial % 4 == 2) o.tail_branching = 2;
    TreeModel m(random_tree_description(rng, o));
    const auto p = fixtures::random_gamma(rng);
    const auto report = identity_suite(compute_zeta_field(m, p), 100, static_cast<std::uint64_t>(trial));
    for (const auto& r : report.residuals) {
      INFO(r.name << " trial " << trial);
      CHECK(r.max_residual < kIdentityTolerance);
    }
  }
}

TEST_CASE("identity suite is reproducible for a fixed seed") {
  const auto f = compute_zeta_field(fixtures::regular3(), {0.2, 0.3});
  const auto a = identity_suite(f, 40, 99);
  const auto b = identity_suite(f, 40, 99);
  for (std::size_t k = 0; k < a.residuals.size(); ++k) {
    CHECK(a.residuals[k].max_residual == b.residuals[k].max_residual);
    CHECK(a.residuals[k].evaluations == b.residuals[k].evaluations);
  }
  CHECK_THROWS_AS(a.at("no such identity"), std::out_of_range);
  CHECK(a.at("symmetry").evaluations == 40);
}
