#pragma once

// Scalar-generic core of the multicentric Taylor recursion. Instantiated for
// std::complex<double>, fixed-precision MPFR complex pairs and Gaussian
// rationals, so the same algebra runs in every arithmetic.

#include <cstddef>
#include <utility>
#include <vector>

namespace polysep::detail {

/// Minimal complex pair over an arbitrary real field (MPFR floats, rationals).
template <class R>
struct Cx {
  R re{};
  R im{};

  Cx() = default;
  Cx(int v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
  Cx(R a, R b) : re(std::move(a)), im(std::move(b)) {}

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator/(const Cx& a, const Cx& b) {
    const R den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  Cx& operator+=(const Cx& b) { return *this = *this + b; }
  Cx& operator-=(const Cx& b) { return *this = *this - b; }
  Cx& operator*=(const Cx& b) { return *this = *this * b; }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

/// acc += a * b. Generic fallback; the Cx overload reuses scratch storage.
template <class S>
void mul_add(S& acc, const S& a, const S& b, S& /*scratch*/) {
  acc += a * b;
}

template <class S>
void mul_sub(S& acc, const S& a, const S& b, S& /*scratch*/) {
  acc -= a * b;
}

template <class R>
void mul_add(Cx<R>& acc, const Cx<R>& a, const Cx<R>& b, Cx<R>& t) {
  t.re = a.re;
  t.re *= b.re;
  acc.re += t.re;
  t.re = a.im;
  t.re *= b.im;
  acc.re -= t.re;
  t.im = a.re;
  t.im *= b.im;
  acc.im += t.im;
  t.im = a.im;
  t.im *= b.re;
  acc.im += t.im;
}

template <class R>
void mul_sub(Cx<R>& acc, const Cx<R>& a, const Cx<R>& b, Cx<R>& t) {
  t.re = a.re;
  t.re *= b.re;
  acc.re -= t.re;
  t.re = a.im;
  t.re *= b.im;
  acc.re += t.re;
  t.im = a.re;
  t.im *= b.im;
  acc.im -= t.im;
  t.im = a.im;
  t.im *= b.re;
  acc.im -= t.im;
}

/// leading * prod (z - r_i), ascending coefficients.
template <class S>
std::vector<S> poly_from_roots(const std::vector<S>& roots, const S& leading) {
  std::vector<S> c{leading};
  for (const auto& r : roots) {
    std::vector<S> next(c.size() + 1, S(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

/// Taylor coefficients at z0 by repeated synthetic division (ring operations only).
template <class S>
std::vector<S> taylor_shift(std::vector<S> c, const S& z0) {
  const std::size_t n = c.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t i = n - 1; i-- > k;) c[i] += z0 * c[i + 1];
  return c;
}

/**
 * Taylor coefficients a[j][n] = f_j^{(n)}(0)/n! of the branch functions in
 * phi(z) = sum_j delta_j(z) f_j(p(z)), p = leading * prod (z - roots_j).
 *
 * germ[j][n] holds phi^{(n)}(roots_j)/n!. Order n of branch j is obtained by
 * matching the h^n coefficient of phi(roots_j + h):
 *
 *   p'(r_j)^n a[j][n] = germ[j][n]
 *       - sum_k sum_{m<n} [h^{n-m}] delta_k(r_j + h) * F_jk[m]
 *       - (F_jj[n] without its l = n term)
 *
 * where F_jk(h) = f_k(p(r_j + h)) = sum_l a[k][l] (p(r_j + h))^l. The running
 * series F_jk are updated with a[k][n] * s_j^n once order n is complete,
 * with s_j the Taylor series of p at r_j, so the composition coefficients
 * b_{n,m}(r_j) never need to be tabulated.
 */
template <class S>
std::vector<std::vector<S>> taylor_recursion(const std::vector<S>& roots, const S& leading,
                                             const std::vector<std::vector<S>>& germ, int order) {
  const std::size_t d = roots.size();
  const std::size_t len = static_cast<std::size_t>(order) + 1;
  const std::vector<S> p = poly_from_roots(roots, leading);

  // s[j]: p(r_j + h); the constant term vanishes by construction.
  std::vector<std::vector<S>> s(d);
  for (std::size_t j = 0; j < d; ++j) {
    s[j] = taylor_shift(p, roots[j]);
    s[j][0] = S(0);
  }

  // dl[j][k][i] = [h^i] delta_k(r_j + h), i < d.
  std::vector<std::vector<std::vector<S>>> dl(d, std::vector<std::vector<S>>(d));
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<S> others;
    S denom(1);
    for (std::size_t i = 0; i < d; ++i) {
      if (i == k) continue;
      others.push_back(roots[i]);
      denom = denom * (roots[k] - roots[i]);
    }
    const std::vector<S> delta = poly_from_roots(others, S(1) / denom);
    for (std::size_t j = 0; j < d; ++j) dl[j][k] = taylor_shift(delta, roots[j]);
  }

  std::vector<std::vector<S>> a(d, std::vector<S>(len, S(0)));
  std::vector<std::vector<std::vector<S>>> f(d, std::vector<std::vector<S>>(d, std::vector<S>(len, S(0))));
  std::vector<std::vector<S>> spow(d, std::vector<S>(len, S(0)));  // s_j^n, truncated
  std::vector<S> c1pow(d, S(1));
  std::vector<std::vector<S>> buffer(d, std::vector<S>(len, S(0)));
  const S zero(0);
  S scratch(0);
  for (std::size_t j = 0; j < d; ++j) spow[j][0] = S(1);

  for (std::size_t n = 0; n < len; ++n) {
    for (std::size_t j = 0; j < d; ++j) {
      S rhs = germ[j][n];
      for (std::size_t k = 0; k < d; ++k) {
        const auto& dk = dl[j][k];
        const std::size_t lo = n + 1 > dk.size() ? n + 1 - dk.size() : 0;
        for (std::size_t m = lo; m < n; ++m) mul_sub(rhs, dk[n - m], f[j][k][m], scratch);
      }
      rhs -= f[j][j][n];
      a[j][n] = rhs / c1pow[j];
    }
    // Fold order n into the running compositions, then advance the powers.
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        const S& akn = a[k][n];
        auto& fjk = f[j][k];
        for (std::size_t m = n; m < len; ++m) mul_add(fjk[m], akn, spow[j][m], scratch);
      }
      if (n + 1 < len) {
        auto& next = buffer[j];
        for (std::size_t m = n; m < len; ++m) next[m] = zero;
        const auto& sj = s[j];
        for (std::size_t m = n; m < len; ++m) {
          const S& v = spow[j][m];
          for (std::size_t i = 1; i < sj.size() && m + i < len; ++i)
            mul_add(next[m + i], v, sj[i], scratch);
        }
        std::swap(spow[j], next);
        c1pow[j] = c1pow[j] * s[j][1];
      }
    }
  }
  return a;
}

}  // namespace polysep::detail
