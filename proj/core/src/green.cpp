#include "treespectra/green.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "treespectra/errors.hpp"

namespace treespectra {

namespace {

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParameterError("malformed complex number '" + std::string(whole) + "'");
  }
  return value;
}

Complex guarded_inverse(Complex denominator, const char* where) {
  if (!(std::abs(denominator) >= kPoleThreshold)) {
    throw NumericalError(std::string("near-pole denominator in ") + where);
  }
  return 1.0 / denominator;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s += c;
  }
  if (s.empty()) throw ParameterError("empty complex number");
  std::string_view sv(s);
  if (sv.back() != 'i' && sv.back() != 'j') return {parse_real(sv, text), 0.0};
  sv.remove_suffix(1);
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t split = std::string_view::npos;
  for (std::size_t k = sv.size(); k-- > 1;) {
    if ((sv[k] == '+' || sv[k] == '-') && sv[k - 1] != 'e' && sv[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](std::string_view part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part, text);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(sv)};
  return {parse_real(sv.substr(0, split), text), imag_of(sv.substr(split))};
}

SpectralParameter parse_spectral_parameter(std::string_view text) {
  Complex z = parse_complex(text);
  if (!(z.imag() >= 0.0)) throw ParameterError("spectral parameter must have Im >= 0");
  return {z.real(), z.imag()};
}

void check_admissible(const TreeModel& model, const SpectralParameter& p) {
  if (!std::isfinite(p.energy) || !std::isfinite(p.eta) || p.eta < 0.0) {
    throw ParameterError("spectral parameter must be finite with eta >= 0");
  }
  if (!p.boundary()) return;
  if (!model.has_tail()) {
    throw ParameterError("boundary value E+i0 requires a model with a homogeneous tail");
  }
  auto [lo, hi] = model.tail_band();
  if (!(p.energy > lo && p.energy < hi)) {
    throw ParameterError("energy " + std::to_string(p.energy) + " is outside the open tail band (" +
                         std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
}

Complex zeta_homogeneous(int branching, double tail_potential, double tail_weight, const SpectralParameter& p) {
  if (branching < 1) throw ParameterError("tail branching must be at least 1");
  if (tail_weight == 0.0) throw ParameterError("tail weight must be nonzero");
  const double a = branching * tail_weight * tail_weight;
  if (p.boundary()) {
    double x = p.energy - tail_potential;
    double disc = 4.0 * a - x * x;
    if (!(disc > 0.0)) throw ParameterError("boundary energy outside the open tail band");
    Complex g{-x / (2.0 * a), std::sqrt(disc) / (2.0 * a)};
    return -tail_weight * g;
  }
  const Complex b = tail_potential - p.gamma();
  const Complex s = std::sqrt(b * b - 4.0 * a);
  Complex big = (std::abs(b + s) >= std::abs(b - s)) ? (b + s) / (2.0 * a) : (b - s) / (2.0 * a);
  Complex small = 1.0 / (a * big);
  Complex g = big.imag() > 0.0 ? big : small;
  return -tail_weight * g;
}

Complex ZetaField::zeta(const Vertex& at, const Vertex& away_from) const {
  const TreeModel& m = *model_;
  if (auto p = m.parent(at); p && *p == away_from) {
    return at.tail.empty() ? outward_[at.core] : tail_forward_;
  }
  if (auto p = m.parent(away_from); p && *p == at) {
    return away_from.tail.empty() ? inward_[away_from.core] : tail_backward(at.core, at.tail.size());
  }
  throw TopologyError("zeta requested for non-adjacent vertices " + m.format(at) + ", " + m.format(away_from));
}

Complex ZetaField::tail_backward(std::uint32_t frontier, std::size_t k) const {
  const auto& tail = *model_->tail();
  const double t = tail.weight;
  const Complex rest = tail.potential - gamma() + static_cast<double>(tail.branching - 1) * t * tail_forward_;
  Complex b = frontier_backward_[frontier];
  for (std::size_t j = 1; j <= k; ++j) b = -t * guarded_inverse(rest + t * b, "tail backward recursion");
  return b;
}

Complex ZetaField::tail_diagonal(std::uint32_t frontier, std::size_t k) const {
  const auto& tail = *model_->tail();
  const double t = tail.weight;
  Complex b = tail_backward(frontier, k - 1);
  return guarded_inverse(tail.potential - gamma() + t * b + static_cast<double>(tail.branching) * t * tail_forward_,
                         "tail diagonal");
}

Complex ZetaField::green_diagonal(const Vertex& v) const {
  return v.tail.empty() ? diagonal_[v.core] : tail_diagonal(v.core, v.tail.size());
}

ZetaField compute_zeta_field(const TreeModel& model, const SpectralParameter& parameter) {
  check_admissible(model, parameter);
  ZetaField f;
  f.model_ = &model;
  f.parameter_ = parameter;
  const std::size_t n = model.core_size();
  f.outward_.assign(n, Complex{});
  f.inward_.assign(n, Complex{});
  f.diagonal_.assign(n, Complex{});
  f.frontier_backward_.assign(n, Complex{});
  const Complex gamma = parameter.gamma();

  double t = 0.0;
  int q = 0;
  if (const auto& tail = model.tail()) {
    t = tail->weight;
    q = tail->branching;
    f.tail_forward_ = zeta_homogeneous(q, tail->potential, t, parameter);
  }
  const Complex tail_all = static_cast<double>(q) * t * f.tail_forward_;

  // leaves inward: zeta(c | parent c)
  for (std::size_t c = n; c-- > 1;) {
    const CoreVertex& cv = model.core(static_cast<std::uint32_t>(c));
    Complex den = cv.diagonal - gamma;
    for (auto k : cv.children) den += model.core(k).parent_weight * f.outward_[k];
    if (cv.frontier) den += tail_all;
    f.outward_[c] = -cv.parent_weight * guarded_inverse(den, "inward sweep");
  }

  // root outward: zeta(v | child) and G(v, v)
  for (std::uint32_t v = 0; v < n; ++v) {
    const CoreVertex& cv = model.core(v);
    Complex base = cv.diagonal - gamma;
    if (cv.parent >= 0) base += cv.parent_weight * f.inward_[v];
    Complex total = base;
    for (auto k : cv.children) total += model.core(k).parent_weight * f.outward_[k];
    if (cv.frontier) {
      total += tail_all;
      f.frontier_backward_[v] =
          -t * guarded_inverse(base + static_cast<double>(q - 1) * t * f.tail_forward_, "frontier recursion");
    }
    f.diagonal_[v] = guarded_inverse(total, "diagonal Green function");
    for (auto c : cv.children) {
      Complex den = base;
      for (auto k : cv.children) {
        if (k != c) den += model.core(k).parent_weight * f.outward_[k];
      }
      f.inward_[c] = -model.core(c).parent_weight * guarded_inverse(den, "outward sweep");
    }
  }
  return f;
}

Complex green_pair(const ZetaField& field, const Vertex& v, const Vertex& w) {
  const TreeModel& model = field.model();
  if (!model.contains(v) || !model.contains(w)) throw TopologyError("green_pair: vertex not in the model");
  if (!v.is_virtual() && !w.is_virtual()) {
    std::uint32_t a = v.core;
    std::uint32_t b = w.core;
    Complex prod{1.0, 0.0};
    while (model.core(a).depth > model.core(b).depth) {
      prod *= field.outward(a);
      a = static_cast<std::uint32_t>(model.core(a).parent);
    }
    while (model.core(b).depth > model.core(a).depth) {
      prod *= field.inward(b);
      b = static_cast<std::uint32_t>(model.core(b).parent);
    }
    while (a != b) {
      prod *= field.outward(a) * field.inward(b);
      a = static_cast<std::uint32_t>(model.core(a).parent);
      b = static_cast<std::uint32_t>(model.core(b).parent);
    }
    return prod * field.core_diagonal(w.core);
  }
  auto path = arc_between(model, v, w);
  Complex prod{1.0, 0.0};
  for (std::size_t j = 0; j + 1 < path.size(); ++j) prod *= field.zeta(path[j], path[j + 1]);
  return prod * field.green_diagonal(w);
}

Complex green_restricted(const ZetaField& field, const DirectedEdge& remove, const Vertex& v0, const Vertex& vk) {
  const TreeModel& model = field.model();
  const Vertex& a = remove.from;
  const Vertex& b = remove.to;
  if (!model.contains(a) || !model.contains(b) || !model.adjacent(a, b)) {
    throw TopologyError("removed edge must join two adjacent vertices of the model");
  }
  std::vector<Vertex> path;
  if (vk == a) {
    path = arc_between(model, v0, a);
  } else if (v0 == a) {
    path = arc_between(model, vk, a);
  } else {
    throw TopologyError("green_restricted: one endpoint must be the vertex at which the branch is removed");
  }
  if (path.size() >= 2 && path[path.size() - 2] == b) {
    throw TopologyError("green_restricted: endpoints are separated by the removed edge");
  }
  Complex prod{1.0, 0.0};
  for (std::size_t j = 0; j + 1 < path.size(); ++j) prod *= field.zeta(path[j], path[j + 1]);
  return -prod * field.zeta(a, b) / model.weight(a, b);
}

double psi(const ZetaField& field, const Vertex& v, const Vertex& w) {
  return green_pair(field, v, w).imag() / std::numbers::pi;
}

double psi(const TreeModel& model, const Vertex& v, const Vertex& w, const SpectralParameter& parameter) {
  return psi(compute_zeta_field(model, parameter), v, w);
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : residuals) m = std::max(m, r.max_residual);
  return m;
}

const IdentityResidual& IdentityReport::at(std::string_view name) const {
  for (const auto& r : residuals) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no identity named " + std::string(name));
}

IdentityReport identity_suite(const ZetaField& field, std::size_t samples, std::uint64_t seed) {
  const TreeModel& model = field.model();
  const Complex gamma = field.gamma();
  const double eta = field.parameter().eta;

  IdentityReport report;
  report.parameter = field.parameter();
  report.samples = samples;
  for (const char* name : {"diagonal_recursion", "branch_recursion", "path_product", "head_factor", "tail_factor",
                           "restricted_end", "restricted_start", "m_ratio", "m_difference", "symmetry",
                           "imaginary_balance", "psi_step"}) {
    report.residuals.push_back({name, 0.0, 0});
  }
  auto record = [&](std::size_t slot, double r) {
    auto& e = report.residuals[slot];
    e.max_residual = std::max(e.max_residual, std::isfinite(r) ? r : HUGE_VAL);
    ++e.evaluations;
  };
  enum {
    kDiagonal,
    kBranch,
    kPath,
    kHead,
    kTail,
    kRestrictedEnd,
    kRestrictedStart,
    kMRatio,
    kMDifference,
    kSymmetry,
    kBalance,
    kPsiStep
  };

  const auto pool = model.ball(model.core_radius() + 2);
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<Vertex>& from) -> const Vertex& {
    std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };
  std::uniform_int_distribution<int> length_dist(1, 6);
  auto G = [&](const Vertex& x, const Vertex& y) { return green_pair(field, x, y); };

  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Vertex> path{pick(pool)};
    const int target = length_dist(rng);
    while (static_cast<int>(path.size()) <= target) {
      auto nbrs = model.neighbors(path.back());
      if (path.size() >= 2) std::erase(nbrs, path[path.size() - 2]);
      if (nbrs.empty()) break;
      path.push_back(pick(nbrs));
    }

    // single-vertex identities at v = path[0]
    const Vertex& v = path.front();
    auto nbrs = model.neighbors(v);
    if (!nbrs.empty()) {
      const Vertex& w = pick(nbrs);
      const double dv = model.diagonal(v);
      Complex all{}, others{};
      double balance = 0.0;
      for (const auto& u : nbrs) {
        Complex term = model.weight(v, u) * field.zeta(u, v);
        all += term;
        if (u != w) {
          others += term;
          balance += std::abs(model.weight(v, u) * field.zeta(u, v).imag());
        }
      }
      const Complex mv = field.m(v);
      const Complex mw = field.m(w);
      const double pvw = model.weight(v, w);
      const Complex zvw = field.zeta(v, w);
      const Complex zwv = field.zeta(w, v);
      record(kDiagonal, std::abs(gamma - (dv + all + 2.0 * mv)));
      record(kBranch, std::abs(gamma - (dv + others + pvw / zvw)));
      record(kMRatio, std::abs(zvw - (mw / mv) * zwv));
      record(kMDifference, std::abs(1.0 / zvw - zwv - 2.0 * mv / pvw));
      record(kBalance, std::abs(balance - (std::abs(pvw * zvw.imag()) / std::norm(zvw) - eta)));
    }

    const std::size_t k = path.size() - 1;
    const Vertex& v0 = path.front();
    const Vertex& vk = path.back();
    const Complex g0k = G(v0, vk);
    record(kSymmetry, std::abs(g0k - G(vk, v0)));

    Complex forward{1.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) forward *= field.zeta(path[j], path[j + 1]);
    record(kPath, std::abs(g0k - (-forward / (2.0 * field.m(vk)))));

    if (k >= 1) {
      record(kHead, std::abs(g0k - field.zeta(path[0], path[1]) * G(path[1], vk)));
      const Complex zlast = field.zeta(vk, path[k - 1]);
      const Complex g0prev = G(v0, path[k - 1]);
      record(kTail, std::abs(g0k - zlast * g0prev));
      const double psi_k = g0k.imag() / std::numbers::pi;
      const double psi_prev = g0prev.imag() / std::numbers::pi;
      record(kPsiStep, std::abs(psi_k - zlast * psi_prev - zlast.imag() / std::numbers::pi * std::conj(g0prev)));

      // G^{(v1|v0)}(v1, vk) by deleting v0
      const Vertex& v1 = path[1];
      Complex schur = G(v1, vk) - G(v1, v0) * G(v0, vk) / G(v0, v0);
      Complex backward{1.0, 0.0};
      for (std::size_t i = 1; i <= k; ++i) backward *= field.zeta(path[i], path[i - 1]);
      record(kRestrictedStart, std::abs(schur - (-backward / model.weight(v1, v0))));
    }

    // G^{(vk|x)}(v0, vk) by deleting a further vertex x beyond vk
    auto beyond = model.neighbors(vk);
    if (k >= 1) std::erase(beyond, path[k - 1]);
    if (!beyond.empty()) {
      const Vertex& x = pick(beyond);
      Complex schur = g0k - G(v0, x) * G(x, vk) / G(x, x);
      Complex prod = forward * field.zeta(vk, x);
      record(kRestrictedEnd, std::abs(schur - (-prod / model.weight(vk, x))));
    }
  }
  return report;
}

}  // namespace treespectra
