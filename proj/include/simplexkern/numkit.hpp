#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "simplexkern/multiindex.hpp"
#include "simplexkern/rational.hpp"

namespace simplexkern {

// Rising factorial (a)_(x) = a(a+1)...(a+x-1); empty product is 1.
template <class T>
T rising(T a, int x) {
  if (x < 0) throw std::invalid_argument("rising: negative order");
  T out(1);
  for (int i = 0; i < x; ++i) out *= a + T(i);
  return out;
}

// Falling factorial (a)_[x] = a(a-1)...(a-x+1); vanishes when a is an
// integer with 0 <= a < x.
template <class T>
T falling(T a, int x) {
  if (x < 0) throw std::invalid_argument("falling: negative order");
  T out(1);
  for (int i = 0; i < x; ++i) out *= a - T(i);
  return out;
}

inline Integer factorial(int n) {
  Integer out(1);
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

inline Integer binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Integer out(1);
  for (int i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

// |m|! / prod m_i!  as an exact integer.
inline Integer multinomial(const MultiIndex& m) {
  Integer out = factorial(total_degree(m));
  for (int mi : m) {
    if (mi < 0) throw std::invalid_argument("multinomial: negative entry");
    out /= factorial(mi);
  }
  return out;
}

template <class T>
T multinomial_as(const MultiIndex& m) {
  return T(multinomial(m).convert_to<double>());
}
template <>
inline Rational multinomial_as<Rational>(const MultiIndex& m) {
  return Rational(multinomial(m));
}

template <class T>
T binomial_as(int n, int k) {
  return T(binomial(n, k).convert_to<double>());
}
template <>
inline Rational binomial_as<Rational>(int n, int k) {
  return Rational(binomial(n, k));
}

template <class T>
T factorial_as(int n) {
  return T(factorial(n).convert_to<double>());
}
template <>
inline Rational factorial_as<Rational>(int n) {
  return Rational(factorial(n));
}

// Strictly positive Dirichlet weights with cached total.
template <class T>
struct DirichletParams {
  std::vector<T> alpha;
  T total;

  explicit DirichletParams(std::vector<T> a) : alpha(std::move(a)), total(0) {
    if (alpha.empty()) throw std::invalid_argument("alpha must be nonempty");
    for (const T& ai : alpha) {
      if (!(ai > T(0))) throw std::invalid_argument("alpha entries must be positive");
      total += ai;
    }
  }

  int dim() const { return static_cast<int>(alpha.size()); }
};

enum class HypKind { F21, F32 };

// Terminating hypergeometric sum through term n = terminate_at. One numerator
// parameter must be the nonpositive integer -n; a denominator Pochhammer
// vanishing before the series terminates is an error.
template <class T>
T hyp_terminating(HypKind kind, const std::vector<T>& num, const std::vector<T>& den,
                  const T& z, int terminate_at) {
  const size_t p = kind == HypKind::F21 ? 2 : 3;
  const size_t q = kind == HypKind::F21 ? 1 : 2;
  if (num.size() != p || den.size() != q)
    throw std::invalid_argument("hyp_terminating: wrong parameter count for kind");
  bool terminates = false;
  for (const T& a : num)
    if (a == T(-terminate_at)) terminates = true;
  if (!terminates)
    throw std::domain_error("hyp_terminating: no numerator parameter equals -terminate_at");

  T sum(0), term(1);
  for (int k = 0;; ++k) {
    sum += term;
    if (k == terminate_at) break;
    for (const T& b : den)
      if (b + T(k) == T(0))
        throw std::domain_error(
            "hyp_terminating: denominator Pochhammer factor vanishes at k=" + std::to_string(k));
    T next = term * z / T(k + 1);
    for (const T& a : num) next *= a + T(k);
    for (const T& b : den) next /= b + T(k);
    term = next;
  }
  return sum;
}

// E[prod X_i^{k_i}] under Dirichlet(alpha): prod (alpha_i)_(k_i) / (|alpha|)_(|k|).
template <class T>
T dirichlet_moment(const DirichletParams<T>& alpha, const MultiIndex& k) {
  if (static_cast<int>(k.size()) != alpha.dim())
    throw std::invalid_argument("dirichlet_moment: dimension mismatch");
  T num(1);
  for (int i = 0; i < alpha.dim(); ++i) num *= rising(alpha.alpha[i], k[i]);
  return num / rising(alpha.total, total_degree(k));
}

constexpr int kDefaultMaxExactDegree = 12;

}  // namespace simplexkern
