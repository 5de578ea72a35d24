#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cantor/errors.hpp"
#include "cantor/hierarchy.hpp"
#include "cantor/symbolic.hpp"
#include "cantor/system.hpp"

namespace cantor {

// Nonnegative weights on the level-n cylinders, indexed by the word read
// MSB first.  Houses conformal proxies, Gibbs weights and natural-extension
// marginals; `d` records the exponent the weights were built with.
template <class R>
struct CylinderMeasure {
  int depth = 0;
  std::vector<R> weights;
  R total{};
  R d{};

  R weight(const Word& w) const { return weights[word_index(w)]; }

  void retotal() {
    total = R(0);
    for (const auto& w : weights) total += w;
  }
};

template <class R>
struct DimensionResult {
  R d{};               // pressure root at the working depth
  R lower{}, upper{};  // distortion-certified bracket for the true dimension
  int depth_used = 0;
};

namespace detail {

// (left, length) of every level-n cylinder without word storage.
template <class R>
void cylinder_boxes(const ContractionSystem<R>& sys, int n, std::vector<R>& lefts,
                    std::vector<R>& lens) {
  sys.check_depth(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  lefts.assign(count, R(0));
  lens.assign(count, R(1));
  for (std::uint64_t i = 0; i < count; ++i) {
    R a(0), len(1), b(1);
    for (int j = n - 1; j >= 0; --j) {
      const auto& phi = sys.branch(static_cast<int>((i >> (n - 1 - j)) & 1u));
      len *= phi.slope(a, b);
      a = phi(a);
      b = phi(b);
    }
    lefts[i] = a;
    lens[i] = len;
  }
}

// log sum_i exp(s * loglen_i), evaluated stably.
template <class R>
R log_moran_sum(const std::vector<R>& loglens, const R& s) {
  using std::exp;
  using std::log;
  R m = loglens[0] * s;
  for (const auto& L : loglens) m = std::max(m, L * s);
  R acc(0);
  for (const auto& L : loglens) acc += exp(L * s - m);
  return m + log(acc);
}

template <class R, class F>
R bisect_decreasing(F&& f, R lo, R hi, const R& tol, int max_iter = 200) {
  R flo = f(lo), fhi = f(hi);
  if (!(flo > R(0) && fhi < R(0)))
    throw invariant_violation("bowen_root: pressure sum does not bracket a root in [0.01, 0.99]");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const R mid = (lo + hi) / R(2);
    (f(mid) > R(0) ? lo : hi) = mid;
  }
  return (lo + hi) / R(2);
}

// Pre-brackets the root in hardware doubles, then certifies and refines the
// bracket at working precision.  Cuts the extended-precision exp count from
// tens of bisection sweeps to a handful.
template <class R, class F>
R bisect_decreasing_hybrid(F&& f, const std::vector<R>& loglens, const R& offset_scale,
                           const R& tol) {
  if constexpr (std::is_same_v<R, double>) {
    return bisect_decreasing(f, R(0.01), R(0.99), tol);
  } else {
    std::vector<double> dl;
    dl.reserve(loglens.size());
    for (const auto& L : loglens) dl.push_back(static_cast<double>(L));
    const double doff = static_cast<double>(offset_scale);
    double lo = 0.01, hi = 0.99;
    double flo = log_moran_sum(dl, lo) - doff * lo;
    double fhi = log_moran_sum(dl, hi) - doff * hi;
    if (flo > 0 && fhi < 0) {
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = (lo + hi) / 2;
        ((log_moran_sum(dl, mid) - doff * mid) > 0 ? lo : hi) = mid;
      }
    }
    // certify the double bracket at working precision; widen on failure
    R rlo(lo), rhi(hi);
    const R pad = std::max(R(1e-11), tol / R(16));
    rlo = std::max(R(0.01), rlo - pad);
    rhi = std::min(R(0.99), rhi + pad);
    if (!(f(rlo) > R(0) && f(rhi) < R(0))) {
      rlo = R(0.01);
      rhi = R(0.99);
    }
    return bisect_decreasing(f, rlo, rhi, tol);
  }
}

}  // namespace detail

// Depth-n Moran/pressure root: the unique s with sum |I_w|^s = 1, bracketed
// by bisection.  The reported [lower, upper] widens the root by the
// distortion envelope e^{+-sK}, certifying that the true dimension lies
// inside for every depth.
template <class R>
DimensionResult<R> bowen_root(const ContractionSystem<R>& sys, int n, const R& tol,
                              std::uint64_t budget = std::uint64_t{1} << 20) {
  using std::log;
  if (n < 2) throw config_error("bowen_root: need depth >= 2");
  if ((std::uint64_t{1} << n) > budget) throw resource_limit("bowen_root: cylinder budget exceeded");
  std::vector<R> lefts, lens, loglens;
  detail::cylinder_boxes(sys, n, lefts, lens);
  loglens.reserve(lens.size());
  for (const auto& L : lens) loglens.push_back(log(L));

  auto root_of = [&](const R& offset_scale) {
    // solves log F(s) - offset_scale * s = 0; decreasing in s
    return detail::bisect_decreasing_hybrid(
        [&](const R& s) { return detail::log_moran_sum(loglens, s) - offset_scale * s; }, loglens,
        offset_scale, tol / R(2));
  };

  DimensionResult<R> out;
  out.depth_used = n;
  out.d = root_of(R(0));
  if (sys.K == R(0)) {
    out.lower = out.d - tol / R(2);
    out.upper = out.d + tol / R(2);
  } else {
    out.lower = root_of(sys.K) - tol / R(2);   // log F(s) = +sK
    out.upper = root_of(-sys.K) + tol / R(2);  // log F(s) = -sK
  }
  return out;
}

// Conformal proxy: weights proportional to |I_w|^d, normalized.  True
// conformal weights lie within the multiplicative band e^{+-K d}.
template <class R>
CylinderMeasure<R> conformal_weights(const ContractionSystem<R>& sys, const R& d, int n) {
  using std::exp;
  using std::log;
  std::vector<R> lefts, lens;
  detail::cylinder_boxes(sys, n, lefts, lens);
  CylinderMeasure<R> mu;
  mu.depth = n;
  mu.d = d;
  mu.weights.reserve(lens.size());
  R total(0);
  for (const auto& L : lens) {
    const R w = exp(d * log(L));
    mu.weights.push_back(w);
    total += w;
  }
  for (auto& w : mu.weights) w /= total;
  mu.total = R(1);
  return mu;
}

template <class R>
struct GibbsInfo {
  R lambda{};            // leading eigenvalue of the discretized operator
  int iterations = 0;
  R invariance_defect{};  // max_{|a| = n-1} |nu(sigma^{-1}[a]) - nu([a])|
};

// max over depth-(n-1) cylinders a of |nu([0a]) + nu([1a]) - nu([a])|,
// where nu([a]) is the children sum.
template <class R>
R shift_invariance_defect(const CylinderMeasure<R>& mu) {
  using std::abs;
  const int n = mu.depth;
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  R defect(0);
  for (std::uint64_t a = 0; a < half; ++a) {
    const R pre = mu.weights[a] + mu.weights[half + a];
    const R cur = mu.weights[2 * a] + mu.weights[2 * a + 1];
    defect = std::max(defect, abs(pre - cur));
  }
  return defect;
}

// Gibbs weights from the transfer operator for the potential -d log|DS|,
// discretized piecewise-constant on depth-n cylinders with branch weights
// |Dphi_i|^d at cylinder left endpoints.  Leading right/left eigenvectors
// combine into the invariant cylinder weights.
template <class R>
CylinderMeasure<R> gibbs_weights(const ContractionSystem<R>& sys, const R& d, int n,
                                 GibbsInfo<R>* info = nullptr,
                                 std::uint64_t budget = std::uint64_t{1} << 20) {
  using std::abs;
  using std::exp;
  using std::log;
  if (n < 2) throw config_error("gibbs_weights: need depth >= 2");
  if ((std::uint64_t{1} << n) > budget)
    throw resource_limit("gibbs_weights: cylinder budget exceeded");
  std::vector<R> lefts, lens;
  detail::cylinder_boxes(sys, n, lefts, lens);
  const std::uint64_t count = std::uint64_t{1} << n;
  const std::uint64_t half = count / 2;

  // branch weights at cylinder representatives
  std::vector<R> a0(count), a1(count);
  for (std::uint64_t w = 0; w < count; ++w) {
    a0[w] = exp(d * log(sys.phi0.deriv(lefts[w])));
    a1[w] = exp(d * log(sys.phi1.deriv(lefts[w])));
  }

  const R tol = real_eps<R>() * R(64);
  const int max_iter = 20000;
  R lambda(1);
  int used = 0;

  // right eigenvector: (L h)(w) = a0(w) h(0 w>>1) + a1(w) h(2^{n-1} + w>>1)
  std::vector<R> h(count, R(1)), tmp(count);
  for (int it = 0; it < max_iter; ++it) {
    R norm(0);
    for (std::uint64_t w = 0; w < count; ++w) {
      tmp[w] = a0[w] * h[w >> 1] + a1[w] * h[half + (w >> 1)];
      norm += tmp[w];
    }
    norm /= R(static_cast<double>(count));
    R delta(0);
    for (std::uint64_t w = 0; w < count; ++w) {
      tmp[w] /= norm;
      delta = std::max(delta, abs(tmp[w] - h[w]));
    }
    h.swap(tmp);
    lambda = norm;
    used = it + 1;
    if (delta <= tol) break;
    if (it + 1 == max_iter) throw invariant_violation("gibbs_weights: eigen-iteration stalled");
  }

  // left eigenvector: (m L)(v) = a_i(v0') m(v0') + a_i(v1') m(v1'),
  // where i is the leading symbol of v and v0', v1' its shift preimages
  std::vector<R> m(count, R(1) / R(static_cast<double>(count)));
  for (int it = 0; it < max_iter; ++it) {
    R norm(0);
    for (std::uint64_t v = 0; v < count; ++v) {
      const int i = static_cast<int>(v >> (n - 1));
      const std::uint64_t w0 = (v << 1) & (count - 1);
      const std::uint64_t w1 = w0 | 1;
      const auto& coeff = i == 0 ? a0 : a1;
      tmp[v] = coeff[w0] * m[w0] + coeff[w1] * m[w1];
      norm += tmp[v];
    }
    R delta(0);
    for (std::uint64_t v = 0; v < count; ++v) {
      tmp[v] /= norm;
      delta = std::max(delta, abs(tmp[v] - m[v]));
    }
    m.swap(tmp);
    used += 1;
    if (delta <= tol) break;
    if (it + 1 == max_iter) throw invariant_violation("gibbs_weights: eigen-iteration stalled");
  }

  CylinderMeasure<R> nu;
  nu.depth = n;
  nu.d = d;
  nu.weights.resize(count);
  R total(0);
  for (std::uint64_t w = 0; w < count; ++w) {
    nu.weights[w] = h[w] * m[w];
    total += nu.weights[w];
  }
  for (auto& w : nu.weights) w /= total;
  nu.total = R(1);

  if (info) {
    info->lambda = lambda;
    info->iterations = used;
    info->invariance_defect = shift_invariance_defect(nu);
  }
  return nu;
}

// Weights of the cylinders below w, transported onto [0,1] by rescale(I_w)
// under the conformal rule: each child weight picks up the |I_w|^{-d}
// Jacobian factor of the affine expansion.
template <class R>
CylinderMeasure<R> restrict_rescale(const ContractionSystem<R>& sys, const CylinderMeasure<R>& mu,
                                    const Word& w) {
  using std::exp;
  using std::log;
  if (w.size() >= mu.depth) throw config_error("restrict_rescale: |w| must be below mu.depth");
  const int sub = mu.depth - w.size();
  const std::uint64_t block = std::uint64_t{1} << sub;
  const std::uint64_t start = word_index(w) * block;
  R mass(0);
  for (std::uint64_t i = 0; i < block; ++i) mass += mu.weights[start + i];
  if (!(mass > R(0))) throw invariant_violation("restrict_rescale: zero-mass cylinder");
  const R len = interval_for_word(sys, w).length;
  const R factor = exp(-mu.d * log(len));
  CylinderMeasure<R> out;
  out.depth = sub;
  out.d = mu.d;
  out.weights.reserve(block);
  for (std::uint64_t i = 0; i < block; ++i) out.weights.push_back(mu.weights[start + i] * factor);
  out.retotal();
  return out;
}

}  // namespace cantor
