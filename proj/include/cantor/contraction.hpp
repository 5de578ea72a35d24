#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/real.hpp"

namespace cantor {

template <class R>
struct Polynomial {
  std::vector<R> c;  // c[k] * x^k

  R operator()(const R& x) const {
    R v(0);
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  }

  Polynomial derivative() const {
    Polynomial d;
    if (c.size() <= 1) {
      d.c = {R(0)};
      return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = c[k] * R(static_cast<int>(k));
    return d;
  }

  int degree() const { return static_cast<int>(c.size()) - 1; }

  // (p(b) - p(a)) / (b - a) without cancellation: sum of c_k * (a^j b^{k-1-j}).
  // This keeps cylinder lengths accurate at any composition depth.
  R slope(const R& a, const R& b) const {
    R total(0);
    for (std::size_t k = 1; k < c.size(); ++k) {
      R inner(0);
      R apow(1);
      for (std::size_t j = 0; j < k; ++j) {
        R bpow(1);
        for (std::size_t i = 0; i + j + 1 < k; ++i) bpow *= b;
        inner += apow * bpow;
        apow *= a;
      }
      total += c[k] * inner;
    }
    return total;
  }
};

enum class Smoothness { finite, infinitely, analytic };

// One contraction branch: either a polynomial, or a polynomial carried
// through the quadratic change of coordinates Psi(x) = x + eps*x*(1-x).
// Evaluation, first/second derivatives, interval slopes and the monotone
// inverse are exposed; slopes use cancellation-free forms throughout.
template <class R>
class SmoothContraction {
 public:
  static SmoothContraction polynomial(Polynomial<R> p) {
    SmoothContraction m;
    m.base_ = std::move(p);
    m.finish();
    return m;
  }

  static SmoothContraction conjugated(Polynomial<R> p, R eps) {
    using std::abs;
    if (!(abs(eps) < R(1))) throw config_error("conjugated map: |eps| must be < 1");
    SmoothContraction m;
    m.base_ = std::move(p);
    m.conj_ = true;
    m.eps_ = eps;
    m.finish();
    return m;
  }

  bool is_conjugated() const { return conj_; }
  const Polynomial<R>& base() const { return base_; }
  R conjugation_eps() const { return eps_; }

  Smoothness smoothness = Smoothness::analytic;
  R holder_gamma = R(1);

  R operator()(const R& x) const {
    if (!conj_) return base_(x);
    return psi(base_(psi_inv(x)));
  }

  R deriv(const R& x) const {
    if (!conj_) return dbase_(x);
    const R u = psi_inv(x);
    return psi_d(base_(u)) * dbase_(u) / psi_d(u);
  }

  R deriv2(const R& x) const {
    R v, d1, d2;
    eval012(x, v, d1, d2);
    return d2;
  }

  // Value with first and second derivative in one pass.
  void eval012(const R& x, R& v, R& d1, R& d2) const {
    if (!conj_) {
      v = base_(x);
      d1 = dbase_(x);
      d2 = d2base_(x);
      return;
    }
    // h = psi o base o psi^{-1}, assembled by the chain rule
    const R u = psi_inv(x);
    const R iu1 = R(1) / psi_d(u);       // (psi^{-1})'(x)
    const R iu2 = R(2) * eps_ * iu1 * iu1 * iu1;  // (psi^{-1})''(x), psi'' = -2 eps
    const R bv = base_(u);
    const R b1 = dbase_(u);
    const R b2 = d2base_(u);
    const R g1 = b1 * iu1;
    const R g2 = b2 * iu1 * iu1 + b1 * iu2;
    v = psi(bv);
    d1 = psi_d(bv) * g1;
    d2 = R(-2) * eps_ * g1 * g1 + psi_d(bv) * g2;
  }

  // (f(b) - f(a)) / (b - a), stable for nearly equal endpoints.
  R slope(const R& a, const R& b) const {
    if (a == b) return deriv(a);
    if (!conj_) return base_.slope(a, b);
    const R ua = psi_inv(a), ub = psi_inv(b);
    const R pa = base_(ua), pb = base_(ub);
    // d psi^{-1} over [a,b] equals 1 / (d psi over [ua,ub])
    return psi_slope(pa, pb) * base_.slope(ua, ub) / psi_slope(ua, ub);
  }

  // Monotone inverse on the image of [0,1].  Newton with a bisection
  // safeguard; converges to a few ulps of the working precision.  Arguments
  // a few ulps outside the image clamp to the matching endpoint.
  R inverse(const R& y) const {
    using std::abs;
    R lo(0), hi(1);
    const R ylo = (*this)(lo);
    const R yhi = (*this)(hi);
    const R slack = real_eps<R>() * R(64) * (abs(ylo) + abs(yhi) + R(1));
    if (y <= ylo) {
      if (y < ylo - slack) throw config_error("inverse: value below branch image");
      return lo;
    }
    if (y >= yhi) {
      if (y > yhi + slack) throw config_error("inverse: value above branch image");
      return hi;
    }
    R x = std::min(hi, std::max(lo, y));
    const R tol = real_eps<R>() * R(8);
    for (int it = 0; it < 220; ++it) {
      const R f = (*this)(x) - y;
      if (f == R(0)) return x;
      (f > R(0) ? hi : lo) = x;
      const R d = deriv(x);
      R nx = x - f / d;
      if (!(nx > lo && nx < hi)) nx = (lo + hi) / R(2);
      if (abs(nx - x) <= tol * (abs(x) + tol)) return nx;
      x = nx;
    }
    return x;
  }

 private:
  void finish() {
    dbase_ = base_.derivative();
    d2base_ = dbase_.derivative();
  }

  R psi(const R& u) const { return u + eps_ * u * (R(1) - u); }
  R psi_d(const R& u) const { return R(1) + eps_ * (R(1) - R(2) * u); }
  R psi_slope(const R& a, const R& b) const { return R(1) + eps_ * (R(1) - a - b); }

  R psi_inv(const R& y) const {
    using std::abs;
    using std::sqrt;
    if (eps_ == R(0)) return y;
    // root in [0,1] of eps*u^2 - (1+eps)*u + y = 0, then one Newton polish
    const R s = R(1) + eps_;
    const R disc = s * s - R(4) * eps_ * y;
    R u = R(2) * y / (s + sqrt(disc));  // stable form of the small root
    u -= (psi(u) - y) / psi_d(u);
    return u;
  }

  Polynomial<R> base_, dbase_, d2base_;
  bool conj_ = false;
  R eps_{};
};

}  // namespace cantor
