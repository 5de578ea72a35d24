#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/contraction.hpp"
#include "cantor/errors.hpp"
#include "cantor/real.hpp"
#include "cantor/rng.hpp"
#include "cantor/symbolic.hpp"

namespace cantor {

// Parsed description of a built-in family; `base` is used by the
// "conjugated" family, `phi0`/`phi1` by the "poly" family.
struct SystemSpec {
  std::string family;
  std::vector<double> params;
  std::shared_ptr<SystemSpec> base;
  std::vector<double> phi0, phi1;
};

template <class R>
R distortion_constant(const R& c, const R& beta, const R& gamma) {
  using std::pow;
  const R bg = pow(beta, gamma);
  return c * bg / (R(1) - bg);
}

// Two strict contractions of [0,1] together with certified constants:
// derivative bounds alpha < Dphi_i < beta, the shared Holder data (gamma, c)
// of log Dphi_i, and the distortion constant K = c beta^gamma/(1-beta^gamma).
template <class R>
struct ContractionSystem {
  SmoothContraction<R> phi0, phi1;
  R alpha{}, beta{}, gamma{}, c{}, K{};
  bool certified = true;  // closed-form bounds vs grid estimates
  int depth_cap = kDefaultDepthCap;
  std::string family;
  std::vector<double> params;

  const SmoothContraction<R>& branch(int s) const { return s == 0 ? phi0 : phi1; }

  // Endpoints of the root gap G = (phi0(1), phi1(0)).
  R gap_lo() const { return phi0(R(1)); }
  R gap_hi() const { return phi1(R(0)); }

  void check_depth(int n) const {
    if (n > depth_cap) throw resource_limit("depth cap " + std::to_string(depth_cap) + " exceeded");
    if (n < 0) throw config_error("negative depth");
  }
};

namespace detail {

// Affine certificates need a symmetric widening so strict inequalities
// stay assertable after rounding at depth-cap compositions.
template <class R>
void widen_bounds(R& alpha, R& beta) {
  const R w = real_eps<R>() * R(1024);
  alpha *= (R(1) - w);
  beta *= (R(1) + w);
}

template <class R>
void finish_certificates(ContractionSystem<R>& sys) {
  detail::widen_bounds(sys.alpha, sys.beta);
  if (!(sys.alpha > R(0) && sys.beta < R(1) && sys.alpha <= sys.beta))
    throw config_error("derivative bounds outside (0,1): family " + sys.family);
  sys.K = distortion_constant(sys.c, sys.beta, sys.gamma);
}

}  // namespace detail

template <class R>
ContractionSystem<R> make_linear(const R& l, const R& r) {
  if (!(l > R(0) && r > R(0) && l + r < R(1)))
    throw config_error("linear family needs l > 0, r > 0, l + r < 1");
  ContractionSystem<R> sys;
  sys.phi0 = SmoothContraction<R>::polynomial({{R(0), l}});
  sys.phi1 = SmoothContraction<R>::polynomial({{R(1) - r, r}});
  sys.alpha = std::min(l, r);
  sys.beta = std::max(l, r);
  sys.gamma = R(1);
  sys.c = R(0);
  sys.family = "linear";
  sys.params = {static_cast<double>(l), static_cast<double>(r)};
  detail::finish_certificates(sys);
  return sys;
}

template <class R>
ContractionSystem<R> make_middle_third() {
  auto sys = make_linear<R>(R(1) / 3, R(1) / 3);
  sys.family = "middle-third";
  sys.params = {};
  return sys;
}

// phi0(x) = x/3 + a x(1-x), phi1(x) = (2+x)/3 + b x(1-x).
// Closed-form bounds: Dphi0 = 1/3 + a(1-2x) in [1/3-|a|, 1/3+|a|], and
// |D log Dphi0| = 2|a|/Dphi0 <= 2|a|/alpha (same shape for b).
template <class R>
ContractionSystem<R> make_perturbed(const R& a, const R& b) {
  using std::abs;
  if (!(abs(a) < R(1) / 3 && abs(b) < R(1) / 3))
    throw config_error("perturbed family needs |a|, |b| < 1/3");
  ContractionSystem<R> sys;
  const R third = R(1) / 3;
  sys.phi0 = SmoothContraction<R>::polynomial({{R(0), third + a, -a}});
  sys.phi1 = SmoothContraction<R>::polynomial({{R(2) / 3, third + b, -b}});
  const R m = std::max(abs(a), abs(b));
  sys.alpha = third - m;
  sys.beta = third + m;
  sys.gamma = R(1);
  sys.c = std::max(R(2) * abs(a) / (third - abs(a)), R(2) * abs(b) / (third - abs(b)));
  sys.family = "perturbed";
  sys.params = {static_cast<double>(a), static_cast<double>(b)};
  detail::finish_certificates(sys);
  return sys;
}

// Carries a polynomial-branch system through Psi(x) = x + eps x(1-x).
// Certified bounds follow from the chain rule:
//   alpha' = alpha (1-|eps|)/(1+|eps|),  beta' = beta (1+|eps|)/(1-|eps|),
//   c'     = (c + M (1+beta)) / (1-|eps|)  with M = 2|eps|/(1-|eps|).
template <class R>
ContractionSystem<R> make_conjugated(const ContractionSystem<R>& base, const R& eps) {
  using std::abs;
  if (!(abs(eps) < R(1))) throw config_error("conjugated family needs |eps| < 1");
  if (base.phi0.is_conjugated() || base.phi1.is_conjugated())
    throw config_error("conjugated family needs a polynomial-branch base system");
  ContractionSystem<R> sys;
  sys.phi0 = SmoothContraction<R>::conjugated(base.phi0.base(), eps);
  sys.phi1 = SmoothContraction<R>::conjugated(base.phi1.base(), eps);
  const R lo = R(1) - abs(eps), hi = R(1) + abs(eps);
  sys.alpha = base.alpha * lo / hi;
  sys.beta = base.beta * hi / lo;
  if (!(sys.beta < R(1)))
    throw config_error("conjugated family: derivative bound reaches 1; reduce |eps|");
  sys.gamma = R(1);
  const R M = R(2) * abs(eps) / lo;
  sys.c = (base.c + M * (R(1) + base.beta)) / lo;
  sys.certified = base.certified;
  sys.family = "conjugated(" + base.family + ")";
  sys.params = base.params;
  sys.params.push_back(static_cast<double>(eps));
  detail::finish_certificates(sys);
  return sys;
}

// User-supplied polynomial branches.  Certificates come from a dense grid
// with a safety margin and are marked empirical, not certified.
template <class R>
ContractionSystem<R> make_poly_system(const std::vector<R>& coeffs0, const std::vector<R>& coeffs1,
                                      int grid_size = 4096) {
  using std::abs;
  ContractionSystem<R> sys;
  sys.phi0 = SmoothContraction<R>::polynomial({coeffs0});
  sys.phi1 = SmoothContraction<R>::polynomial({coeffs1});
  R dmin(1), dmax(0), cmax(0);
  bool first = true;
  for (int s = 0; s < 2; ++s) {
    const auto& phi = sys.branch(s);
    for (int i = 0; i <= grid_size; ++i) {
      const R x = R(i) / R(grid_size);
      R v, d1, d2;
      phi.eval012(x, v, d1, d2);
      if (!(d1 > R(0))) throw config_error("poly system: non-increasing branch on grid");
      if (first || d1 < dmin) dmin = d1;
      if (first || d1 > dmax) dmax = d1;
      const R dlog = abs(d2 / d1);
      if (first || dlog > cmax) cmax = dlog;
      first = false;
    }
  }
  const R margin = R(1e-9);
  sys.alpha = dmin * (R(1) - margin);
  sys.beta = dmax * (R(1) + margin);
  sys.gamma = R(1);
  sys.c = cmax * (R(1) + margin);
  sys.certified = false;
  sys.family = "poly";
  detail::finish_certificates(sys);
  return sys;
}

template <class R>
ContractionSystem<R> make_system(const SystemSpec& spec) {
  auto need = [&](std::size_t k) {
    if (spec.params.size() != k)
      throw config_error("family " + spec.family + " expects " + std::to_string(k) + " params");
  };
  if (spec.family == "middle-third") {
    need(0);
    return make_middle_third<R>();
  }
  if (spec.family == "linear") {
    need(2);
    return make_linear<R>(R(spec.params[0]), R(spec.params[1]));
  }
  if (spec.family == "perturbed") {
    need(2);
    return make_perturbed<R>(R(spec.params[0]), R(spec.params[1]));
  }
  if (spec.family == "conjugated") {
    need(1);
    if (!spec.base) throw config_error("conjugated family needs a base system");
    return make_conjugated<R>(make_system<R>(*spec.base), R(spec.params[0]));
  }
  if (spec.family == "poly") {
    if (spec.phi0.empty() || spec.phi1.empty())
      throw config_error("poly family needs phi0/phi1 coefficient lists");
    std::vector<R> c0, c1;
    for (double v : spec.phi0) c0.push_back(R(v));
    for (double v : spec.phi1) c1.push_back(R(v));
    return make_poly_system<R>(c0, c1);
  }
  throw config_error("unknown system family: " + spec.family);
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationCheck {
  std::string name;
  bool pass;
  std::string witness;
};

template <class R>
struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = true;
  // hyperbolicity diagnostic: estimated (c, beta~) with Dphi_w < c beta~^n
  R c_est{}, btilde_est{};

  void add(std::string name, bool ok, std::string witness = {}) {
    pass = pass && ok;
    checks.push_back({std::move(name), ok, std::move(witness)});
  }
};

template <class R>
ValidationReport<R> validate(const ContractionSystem<R>& sys, int grid_size) {
  using std::abs;
  if (grid_size < 64) throw config_error("validate: grid_size must be >= 64");
  ValidationReport<R> rep;
  const R tol = R(1e-12);

  rep.add("phi0(0) == 0", abs(sys.phi0(R(0))) <= tol, to_decimal(sys.phi0(R(0))));
  rep.add("phi1(1) == 1", abs(sys.phi1(R(1)) - R(1)) <= tol, to_decimal(sys.phi1(R(1))));
  const R glo = sys.gap_lo(), ghi = sys.gap_hi();
  rep.add("phi0(1) < phi1(0)", ghi - glo > tol,
          "phi0(1)=" + to_decimal(glo) + " phi1(0)=" + to_decimal(ghi));

  for (int s = 0; s < 2; ++s) {
    const auto& phi = sys.branch(s);
    bool mono = true, bounds = true, unit = true;
    std::string mono_w, bounds_w;
    R prev = phi(R(0));
    for (int i = 1; i <= grid_size; ++i) {
      const R x = R(i) / R(grid_size);
      const R v = phi(x);
      if (!(v > prev) && mono) {
        mono = false;
        mono_w = "x=" + to_decimal(x);
      }
      prev = v;
      const R d = phi.deriv(x);
      if ((d < sys.alpha || d > sys.beta) && bounds) {
        bounds = false;
        bounds_w = "x=" + to_decimal(x) + " Dphi=" + to_decimal(d);
      }
      if (!(d > R(0) && d < R(1))) unit = false;
    }
    const std::string tag = "phi" + std::to_string(s);
    rep.add(tag + " strictly increasing", mono, mono_w);
    rep.add(tag + " derivative within [alpha, beta]", bounds, bounds_w);
    rep.add(tag + " derivative in (0,1)", unit);
  }

  // Proposition-(ii) style diagnostic on sampled words up to depth 12:
  // estimate (c, beta~) with sup Dphi_w <= c beta~^n.
  const int max_depth = 12;
  CounterRng rng(0xC0FFEE);
  std::vector<R> sup_by_depth;
  for (int n = 1; n <= max_depth; ++n) {
    R sup(0);
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t samples = std::min<std::uint64_t>(total, 128);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const std::uint64_t idx = (total <= 128) ? s : rng.below(total);
      for (int gp = 0; gp <= 4; ++gp) {
        R x = R(gp) / R(4);
        R prod(1);
        for (int j = n - 1; j >= 0; --j) {
          const auto& phi = sys.branch(static_cast<int>((idx >> (n - 1 - j)) & 1u));
          prod *= phi.deriv(x);
          x = phi(x);
        }
        if (prod > sup) sup = prod;
      }
    }
    sup_by_depth.push_back(sup);
  }
  using std::pow;
  R btilde(0);
  for (int n = 6; n <= max_depth; ++n) {
    const R root = pow(sup_by_depth[static_cast<std::size_t>(n - 1)], R(1) / R(n));
    if (root > btilde) btilde = root;
  }
  R cest(0);
  for (int n = 1; n <= max_depth; ++n) {
    const R q = sup_by_depth[static_cast<std::size_t>(n - 1)] / pow(btilde, R(n));
    if (q > cest) cest = q;
  }
  rep.btilde_est = btilde;
  rep.c_est = cest;
  rep.add("hyperbolic decay Dphi_w < c beta~^n", btilde < R(1),
          "c=" + to_decimal(cest) + " beta~=" + to_decimal(btilde));
  return rep;
}

// ---------------------------------------------------------------------------
// Bounded distortion check

template <class R>
struct DistortionReport {
  R max_abs_log_ratio{};
  R bound{};
  int samples = 0;
  bool pass = true;
  std::string witness;
};

// Samples random words of length n+m and pairs x,y in I_w, computes
// DS^m(x)/DS^m(y) by the chain rule over branch inverses and compares the
// log-ratio against the envelope K beta^(n gamma).
template <class R>
DistortionReport<R> check_distortion(const ContractionSystem<R>& sys, int n, int m, int samples,
                                     std::uint64_t seed) {
  using std::abs;
  using std::log;
  using std::pow;
  sys.check_depth(n + m);
  CounterRng rng(seed);
  DistortionReport<R> rep;
  rep.samples = samples;
  rep.bound = sys.K * pow(sys.beta, R(n) * sys.gamma);
  const R slack = real_eps<R>() * R(1u << 20);

  for (int s = 0; s < samples; ++s) {
    Symbols w(static_cast<std::size_t>(n + m));
    for (auto& b : w) b = static_cast<std::uint8_t>(rng.bit());
    // endpoints of I_w by the inside-out fold
    R a(0), bnd(1);
    for (int j = n + m - 1; j >= 0; --j) {
      const auto& phi = sys.branch(w[static_cast<std::size_t>(j)]);
      a = phi(a);
      bnd = phi(bnd);
    }
    R x = a + R(rng.uniform01()) * (bnd - a);
    R y = a + R(rng.uniform01()) * (bnd - a);
    // log DS^m along the first m branches of w
    R lx(0), ly(0);
    for (int k = 0; k < m; ++k) {
      const auto& phi = sys.branch(w[static_cast<std::size_t>(k)]);
      x = phi.inverse(std::min(R(1), std::max(R(0), x)));
      y = phi.inverse(std::min(R(1), std::max(R(0), y)));
      lx -= log(phi.deriv(x));
      ly -= log(phi.deriv(y));
    }
    const R lr = abs(lx - ly);
    if (lr > rep.max_abs_log_ratio) rep.max_abs_log_ratio = lr;
    if (lr > rep.bound + slack && rep.pass) {
      rep.pass = false;
      std::ostringstream os;
      os << "word=" << to_string(Word(w)) << " |log ratio|=" << to_decimal(lr);
      rep.witness = os.str();
    }
  }
  return rep;
}

}  // namespace cantor
