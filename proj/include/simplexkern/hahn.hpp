#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "simplexkern/jacobi.hpp"
#include "simplexkern/multiindex.hpp"
#include "simplexkern/numkit.hpp"

namespace simplexkern {

// The Dirichlet-Multinomial pair (alpha, N) the Hahn kernels live on.
template <class T>
struct HahnContext {
  DirichletParams<T> alpha;
  int N;

  HahnContext(DirichletParams<T> a, int n) : alpha(std::move(a)), N(n) {
    if (N < 0) throw std::invalid_argument("HahnContext: N must be >= 0");
  }
};

namespace detail {

// xi^{H}_m for a raw parameter vector (may be negative, hypergeometric case).
// Denominator Pochhammer factors are checked and reported by name.
template <class T>
T xi_h_raw(const std::vector<T>& alpha, const T& theta, int m, const MultiIndex& r,
           const MultiIndex& s) {
  const int d = static_cast<int>(alpha.size());
  if (static_cast<int>(r.size()) != d || static_cast<int>(s.size()) != d)
    throw std::invalid_argument("xi_h: dimension mismatch");
  const int N = total_degree(r);
  if (total_degree(s) != N) throw std::invalid_argument("xi_h: |r| != |s|");
  if (m == 0) return T(1);

  const T denom_rs = rising(theta + T(N), m);
  if (denom_rs == T(0))
    throw std::domain_error("xi_h: rising(theta+N," + std::to_string(m) + ") vanishes");
  T out(0);
  const T top = rising(theta, m);
  for (const MultiIndex& l : compositions(d, m)) {
    T term = multinomial_as<T>(l) * top / (denom_rs * denom_rs);
    for (int i = 0; i < d; ++i) {
      if (l[i] == 0) continue;
      T den = rising(alpha[i], l[i]);
      if (den == T(0))
        throw std::domain_error("xi_h: rising(alpha_" + std::to_string(i + 1) + "," +
                                std::to_string(l[i]) + ") vanishes");
      term *= rising(alpha[i] + T(r[i]), l[i]) * rising(alpha[i] + T(s[i]), l[i]) / den;
    }
    out += term;
  }
  return out;
}

template <class T>
T chi_h_raw(const std::vector<T>& alpha, const T& theta, int m, const MultiIndex& r,
            const MultiIndex& s) {
  const int d = static_cast<int>(alpha.size());
  const int N = total_degree(r);
  if (total_degree(s) != N) throw std::invalid_argument("chi_h: |r| != |s|");
  if (m > N) throw std::invalid_argument("chi_h: m must be <= N");
  if (m == 0) return T(1);

  const T nfall = falling(T(N), m);
  T out(0);
  for (const MultiIndex& l : compositions(d, m)) {
    // 1/DM_alpha(l;m) with explicit vanishing checks
    T dm = multinomial_as<T>(l) / rising(theta, m);
    for (int i = 0; i < d; ++i) {
      T f = rising(alpha[i], l[i]);
      if (f == T(0))
        throw std::domain_error("chi_h: rising(alpha_" + std::to_string(i + 1) + "," +
                                std::to_string(l[i]) + ") vanishes");
      dm *= f;
    }
    T pr(1), ps(1);
    for (int i = 0; i < d; ++i) {
      pr *= falling(T(r[i]), l[i]);
      ps *= falling(T(s[i]), l[i]);
    }
    T c = multinomial_as<T>(l);
    out += (c * pr / nfall) * (c * ps / nfall) / dm;
  }
  return out;
}

}  // namespace detail

// xi^{H,alpha}_m(r,s) = sum_{|l|=m} DM_{a+r}(l;m) DM_{a+s}(l;m) / DM_a(l;m)
template <class T>
T xi_h(const HahnContext<T>& ctx, int m, const MultiIndex& r, const MultiIndex& s) {
  if (total_degree(r) != ctx.N || total_degree(s) != ctx.N)
    throw std::invalid_argument("xi_h: |r| and |s| must equal ctx.N");
  return detail::xi_h_raw(ctx.alpha.alpha, ctx.alpha.total, m, r, s);
}

// Falling-factorial (hypergeometric sampling) kernel chi^{H,alpha}_m(r,s).
template <class T>
T chi_h(const HahnContext<T>& ctx, int m, const MultiIndex& r, const MultiIndex& s) {
  return detail::chi_h_raw(ctx.alpha.alpha, ctx.alpha.total, m, r, s);
}

// H^{alpha}_{|n|}(r,s) = (|alpha|+N)_(n)/N_[n] * sum_{m<=n} a_{nm} xi^H_m(r,s)
template <class T>
KernelValue<T> h_kernel(const HahnContext<T>& ctx, int n, const MultiIndex& r,
                        const MultiIndex& s) {
  if (n > ctx.N)
    throw std::domain_error("h_kernel: degree n exceeds N (falling(N,n) vanishes)");
  T sum(0);
  for (int m = 0; m <= n; ++m)
    sum += coeff_a(ctx.alpha.total, n, m) * xi_h(ctx, m, r, s);
  return {n, rising(ctx.alpha.total + T(ctx.N), n) / falling(T(ctx.N), n) * sum};
}

// Same kernel through the Gasper chi-representation:
//   H_n = N_[n]/(|alpha|+N)_(n) * sum_{m<=n} a_{nm} chi^H_m(r,s)
template <class T>
KernelValue<T> h_kernel_chi_route(const HahnContext<T>& ctx, int n, const MultiIndex& r,
                                  const MultiIndex& s) {
  if (n > ctx.N) throw std::domain_error("h_kernel_chi_route: degree n exceeds N");
  T sum(0);
  for (int m = 0; m <= n; ++m)
    sum += coeff_a(ctx.alpha.total, n, m) * chi_h(ctx, m, r, s);
  return {n, falling(T(ctx.N), n) / rising(ctx.alpha.total + T(ctx.N), n) * sum};
}

// Univariate Hahn polynomial h_n(r;N) = 3F2(-n, n+a+b-1, -r; a, -N; 1).
template <class T>
T univariate_hahn(const T& a, const T& b, int n, int r, int N) {
  if (n < 0 || n > N) throw std::invalid_argument("univariate_hahn: need 0 <= n <= N");
  if (r < 0 || r > N) throw std::invalid_argument("univariate_hahn: need 0 <= r <= N");
  return hyp_terminating(HypKind::F32,
                         std::vector<T>{T(-n), T(n) + a + b - T(1), T(-r)},
                         std::vector<T>{a, T(-N)}, T(1), n);
}

// Orthogonality constant u with sum_r h_n(r;N)^2 DM_{a,b}(r;N) = 1/u:
//   u = C(N,n) (theta)_(n-1)(theta+2n-1)(a)_(n) / ((theta+N)_(n)(b)_(n))
template <class T>
T u_norm(const T& a, const T& b, int N, int n) {
  if (n == 0) return T(1);
  T theta = a + b;
  return binomial_as<T>(N, n) * rising(theta, n - 1) * (theta + T(2 * n - 1)) * rising(a, n) /
         (rising(theta + T(N), n) * rising(b, n));
}

// h_n(r;N) for all n = 0..nmax at every r = 0..N via the three-term
// recurrence; exact in rational arithmetic, stable in floating.
template <class T>
std::vector<std::vector<T>> hahn_table(const T& a, const T& b, int N, int nmax) {
  if (nmax > N) throw std::invalid_argument("hahn_table: nmax must be <= N");
  const T A = a - T(1), B = b - T(1);
  std::vector<std::vector<T>> h(nmax + 1, std::vector<T>(N + 1));
  for (int r = 0; r <= N; ++r) h[0][r] = T(1);
  if (nmax >= 1)
    for (int r = 0; r <= N; ++r) h[1][r] = T(1) - (a + b) * T(r) / (a * T(N));
  for (int n = 1; n < nmax; ++n) {
    T tn(n);
    T an = (tn + A + B + T(1)) * (tn + A + T(1)) * T(N - n) /
           ((T(2) * tn + A + B + T(1)) * (T(2) * tn + A + B + T(2)));
    T cn = tn * (tn + A + B + T(N + 1)) * (tn + B) /
           ((T(2) * tn + A + B) * (T(2) * tn + A + B + T(1)));
    for (int r = 0; r <= N; ++r)
      h[n + 1][r] = ((an + cn - T(r)) * h[n][r] - cn * h[n - 1][r]) / an;
  }
  return h;
}

// Posterior mean of the shifted Jacobi polynomial,
//   htilde_n(k;N) = E[R_n^{a,b}(X)] under Beta(a+k, b+N-k),
// summed term by term from the 2F1 series (exact for rational inputs).
template <class T>
T posterior_jacobi_mean(const T& a, const T& b, int n, int k, int N) {
  const T theta = a + b;
  T sum(0), coef(1);
  for (int j = 0; j <= n; ++j) {
    if (j > 0)
      coef *= (T(-n) + T(j - 1)) * (T(n) + theta - T(1) + T(j - 1)) /
              ((b + T(j - 1)) * T(j));
    sum += coef * rising(b + T(N - k), j) / rising(theta + T(N), j);
  }
  return sum;
}

// Connection coefficients b_{ml} between xi^H and chi^H:
//   b_{ml} = sum_{n=l}^{m} (N_[n]/(theta+N)_(n))^2 c_{mn} a_{nl}
template <class T>
T connection_b(const T& total_alpha, int N, int m, int l) {
  if (l > m) throw std::invalid_argument("connection_b: need l <= m");
  T out(0);
  for (int n = l; n <= m; ++n) {
    T w = falling(T(N), n) / rising(total_alpha + T(N), n);
    out += w * w * coeff_c(total_alpha, m, n) * coeff_a(total_alpha, n, l);
  }
  return out;
}

// Coordinate projection H_n(s, e_j N) = zeta_n * htilde_n(s_j; N) with the
// pair (alpha_j, |alpha|-alpha_j).
template <class T>
T project_hahn(const HahnContext<T>& ctx, int n, const MultiIndex& s, int j) {
  if (j < 1 || j > ctx.alpha.dim())
    throw std::invalid_argument("project_hahn: coordinate out of range");
  if (total_degree(s) != ctx.N) throw std::invalid_argument("project_hahn: |s| != N");
  const T aj = ctx.alpha.alpha[j - 1];
  const T bj = ctx.alpha.total - aj;
  return zeta(aj, bj, n) * posterior_jacobi_mean(aj, bj, n, s[j - 1], ctx.N);
}

// Kernels on the hypergeometric distribution: explicitDM evaluated at
// alpha = -c. Vanishing Pochhammer denominators are reported by name.
template <class T>
KernelValue<T> hypergeom_kernel(const MultiIndex& c, int N, int n, const MultiIndex& r,
                                const MultiIndex& s) {
  const int d = static_cast<int>(c.size());
  if (static_cast<int>(r.size()) != d || static_cast<int>(s.size()) != d)
    throw std::invalid_argument("hypergeom_kernel: dimension mismatch");
  if (total_degree(r) != N || total_degree(s) != N)
    throw std::invalid_argument("hypergeom_kernel: |r| and |s| must equal N");
  for (int i = 0; i < d; ++i)
    if (r[i] > c[i] || s[i] > c[i])
      throw std::domain_error("hypergeom_kernel: composition exceeds c at coordinate " +
                              std::to_string(i + 1));
  if (n > N) throw std::domain_error("hypergeom_kernel: degree n exceeds N");

  std::vector<T> alpha(d);
  for (int i = 0; i < d; ++i) alpha[i] = T(-c[i]);
  const T theta = T(-total_degree(c));
  const T nfall = falling(T(N), n);
  if (nfall == T(0)) throw std::domain_error("hypergeom_kernel: falling(N,n) vanishes");
  T sum(0);
  for (int m = 0; m <= n; ++m)
    sum += detail::coeff_a_unchecked(theta, n, m) *
           detail::xi_h_raw(alpha, theta, m, r, s);
  return {n, rising(theta + T(N), n) / nfall * sum};
}

// Gasper's product formula double sum; equals h_n(r;N) h_n(s;N) on the nose
// and is kept as an independent oracle.
template <class T>
T gasper_product_double_sum(const T& a, const T& b, int n, int r, int s, int N) {
  const T theta = a + b;
  T sign_n = (n % 2 == 0) ? T(1) : T(-1);
  T pref = sign_n * rising(b, n) / rising(a, n);
  T out(0);
  for (int l = 0; l <= n; ++l)
    for (int k = 0; k + l <= n; ++k) {
      T sign = ((l + k) % 2 == 0) ? T(1) : T(-1);
      T nf = falling(T(N), l + k);
      T term = sign * falling(T(n), l + k) * rising(theta + T(n - 1), l + k) *
               falling(T(r), l) * falling(T(s), l) * falling(T(N - r), k) *
               falling(T(N - s), k) /
               (factorial_as<T>(l) * factorial_as<T>(k) * nf * nf * rising(a, l) *
                rising(b, k));
      out += term;
    }
  return pref * out;
}

}  // namespace simplexkern
