#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "simplexkern/multiindex.hpp"
#include "simplexkern/numkit.hpp"
#include "simplexkern/polynomial.hpp"

namespace simplexkern {

template <class T>
struct KernelValue {
  int degree;
  T value;
};

namespace detail {

// a^{theta}_{nm} without the positivity gate; the hypergeometric-distribution
// kernels reuse it at negative theta.
template <class T>
T coeff_a_unchecked(const T& theta, int n, int m) {
  if (m < 0 || m > n) throw std::invalid_argument("coeff_a: need 0 <= m <= n");
  if (n == 0) return T(1);  // Gamma-ratio convention, forced by Q_0 == 1
  T sign = ((n - m) % 2 == 0) ? T(1) : T(-1);
  return (theta + T(2 * n - 1)) * sign * rising(theta + T(m), n - 1) /
         (factorial_as<T>(m) * factorial_as<T>(n - m));
}

}  // namespace detail

// Kernel expansion coefficient
//   a^{|alpha|}_{nm} = (|alpha|+2n-1)(-1)^{n-m} (|alpha|+m)_(n-1) / (m!(n-m)!),
// with a_00 = 1.
template <class T>
T coeff_a(const T& total_alpha, int n, int m) {
  if (!(total_alpha > T(0))) throw std::domain_error("coeff_a: |alpha| must be positive");
  return detail::coeff_a_unchecked(total_alpha, n, m);
}

// Inverse-triangle coefficient c^{theta}_{mn} = m_[n] / (theta+m)_(n).
template <class T>
T coeff_c(const T& total_alpha, int m, int n) {
  if (n < 0 || n > m) throw std::invalid_argument("coeff_c: need 0 <= n <= m");
  return falling(T(m), n) / rising(total_alpha + T(m), n);
}

// Lower-triangular a/c system through max_degree; A and C are exact inverses.
template <class T>
class CoeffTriangle {
 public:
  CoeffTriangle(const T& total_alpha, int max_degree)
      : theta_(total_alpha), max_degree_(max_degree) {
    a_.resize(max_degree + 1);
    c_.resize(max_degree + 1);
    for (int n = 0; n <= max_degree; ++n) {
      a_[n].resize(n + 1);
      c_[n].resize(n + 1);
      for (int m = 0; m <= n; ++m) {
        a_[n][m] = coeff_a(theta_, n, m);
        c_[n][m] = coeff_c(theta_, n, m);
      }
    }
    for (int n = 0; n <= max_degree; ++n)
      if (a_[n][n] == T(0)) throw std::domain_error("coeff triangle not invertible");
  }

  const T& theta() const { return theta_; }
  int max_degree() const { return max_degree_; }
  const T& a(int n, int m) const { return a_[n][m]; }
  const T& c(int m, int n) const { return c_[m][n]; }

  // max |(A*C)_{nm} - delta_{nm}|; zero iff the triangles invert exactly.
  T identity_defect() const {
    T worst(0);
    for (int n = 0; n <= max_degree_; ++n)
      for (int m = 0; m <= n; ++m) {
        T s(0);
        for (int k = m; k <= n; ++k) s += a_[n][k] * c_[k][m];
        T d = s - (n == m ? T(1) : T(0));
        if (d < T(0)) d = -d;
        if (d > worst) worst = d;
      }
    return worst;
  }

 private:
  T theta_;
  int max_degree_;
  std::vector<std::vector<T>> a_, c_;
};

// xi_{|m|}^{alpha}(x,y) = sum over |l| = m of
//   C(m,l) (|alpha|)_(m) / prod (alpha_i)_(l_i) * prod (x_i y_i)^{l_i}
template <class T>
T xi(const DirichletParams<T>& alpha, int m, const std::vector<T>& x,
     const std::vector<T>& y) {
  const int d = alpha.dim();
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw std::invalid_argument("xi: point dimension mismatch");
  if (m == 0) return T(1);
  T out(0);
  const T top = rising(alpha.total, m);
  for (const MultiIndex& l : compositions(d, m)) {
    T term = multinomial_as<T>(l) * top;
    for (int i = 0; i < d; ++i) {
      if (l[i] == 0) continue;
      T xy = x[i] * y[i];
      for (int k = 0; k < l[i]; ++k) term *= xy;
      term /= rising(alpha.alpha[i], l[i]);
    }
    out += term;
  }
  return out;
}

// Q^{alpha}_{|n|}(x,y) = sum_{m<=n} a^{|alpha|}_{nm} xi_m(x,y)
template <class T>
KernelValue<T> q_kernel(const DirichletParams<T>& alpha, int n, const std::vector<T>& x,
                        const std::vector<T>& y) {
  T out(0);
  for (int m = 0; m <= n; ++m) out += coeff_a(alpha.total, n, m) * xi(alpha, m, x, y);
  return {n, out};
}

// xi_m(x, .) as a polynomial in the second argument (exact oracle building block).
template <class T>
Polynomial<T> xi_poly_second(const DirichletParams<T>& alpha, int m,
                             const std::vector<T>& x) {
  const int d = alpha.dim();
  Polynomial<T> p(d);
  if (m == 0) {
    p.add_term(MultiIndex(d, 0), T(1));
    return p;
  }
  const T top = rising(alpha.total, m);
  for (const MultiIndex& l : compositions(d, m)) {
    T coeff = multinomial_as<T>(l) * top;
    for (int i = 0; i < d; ++i) {
      if (l[i] == 0) continue;
      for (int k = 0; k < l[i]; ++k) coeff *= x[i];
      coeff /= rising(alpha.alpha[i], l[i]);
    }
    p.add_term(l, coeff);
  }
  return p;
}

template <class T>
Polynomial<T> q_kernel_poly_second(const DirichletParams<T>& alpha, int n,
                                   const std::vector<T>& x) {
  Polynomial<T> p(alpha.dim());
  for (int m = 0; m <= n; ++m)
    p += xi_poly_second(alpha, m, x) * coeff_a(alpha.total, n, m);
  return p;
}

// Shifted Jacobi polynomial normalized at 1:
//   R_n^{a,b}(x) = 2F1(-n, n+a+b-1; b; 1-x)
template <class T>
T univariate_r(const T& a, const T& b, int n, const T& x) {
  if (!(a > T(0)) || !(b > T(0)))
    throw std::domain_error("univariate_r: parameters must be positive");
  return hyp_terminating(HypKind::F21, std::vector<T>{T(-n), T(n) + a + b - T(1)},
                         std::vector<T>{b}, T(1) - x, n);
}

// R_0..R_nmax at one x through the classical Jacobi three-term recurrence;
// stable for floating evaluation at high degree.
template <class T>
std::vector<T> univariate_r_table(const T& a, const T& b, int nmax, const T& x) {
  // R_n(x) = P_n^{(A,B)}(2x-1)/P_n^{(A,B)}(1), A = b-1, B = a-1
  const T A = b - T(1), B = a - T(1);
  const T z = T(2) * x - T(1);
  std::vector<T> p(nmax + 1), out(nmax + 1);
  p[0] = T(1);
  if (nmax >= 1) p[1] = (A + B + T(2)) / T(2) * z + (A - B) / T(2);
  for (int n = 2; n <= nmax; ++n) {
    T tn(n);
    T c1 = T(2) * tn * (tn + A + B) * (T(2) * tn + A + B - T(2));
    T c2 = (T(2) * tn + A + B - T(1)) *
           ((T(2) * tn + A + B) * (T(2) * tn + A + B - T(2)) * z + A * A - B * B);
    T c3 = T(2) * (tn + A - T(1)) * (tn + B - T(1)) * (T(2) * tn + A + B);
    p[n] = (c2 * p[n - 1] - c3 * p[n - 2]) / c1;
  }
  for (int n = 0; n <= nmax; ++n) out[n] = p[n] * factorial_as<T>(n) / rising(b, n);
  return out;
}

// 1/zeta_n = n!/((theta+2n-1)(theta)_(n-1)) * (a)_(n)/(b)_(n); zeta_0 = 1.
template <class T>
T zeta(const T& a, const T& b, int n) {
  if (!(a > T(0)) || !(b > T(0))) throw std::domain_error("zeta: parameters must be positive");
  if (n == 0) return T(1);
  T theta = a + b;
  return (theta + T(2 * n - 1)) * rising(theta, n - 1) * rising(b, n) /
         (factorial_as<T>(n) * rising(a, n));
}

// Q_n^{alpha}(y, e_j) via the coordinate reduction:
//   zeta_n^{alpha_j, |alpha|-alpha_j} * R_n^{alpha_j, |alpha|-alpha_j}(y_j)
template <class T>
T project_to_coordinate(const DirichletParams<T>& alpha, int n, const std::vector<T>& y,
                        int j) {
  if (j < 1 || j > alpha.dim())
    throw std::invalid_argument("project_to_coordinate: coordinate out of range");
  const T aj = alpha.alpha[j - 1];
  const T bj = alpha.total - aj;
  return zeta(aj, bj, n) * univariate_r(aj, bj, n, y[j - 1]);
}

// Kernel under the grouped parameter vector A*alpha. Blocks must partition
// {1..d}; x and y are points on the grouped simplex.
template <class T>
KernelValue<T> aggregate(const DirichletParams<T>& alpha,
                         const std::vector<std::vector<int>>& blocks, int n,
                         const std::vector<T>& x_grouped, const std::vector<T>& y_grouped) {
  const int d = alpha.dim();
  std::vector<bool> seen(d, false);
  std::vector<T> grouped;
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("aggregate: empty block");
    T s(0);
    for (int j : block) {
      if (j < 1 || j > d || seen[j - 1])
        throw std::invalid_argument("aggregate: blocks must partition {1..d}");
      seen[j - 1] = true;
      s += alpha.alpha[j - 1];
    }
    grouped.push_back(s);
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("aggregate: blocks must cover {1..d}");
  DirichletParams<T> ga(grouped);
  return q_kernel(ga, n, x_grouped, y_grouped);
}

}  // namespace simplexkern
