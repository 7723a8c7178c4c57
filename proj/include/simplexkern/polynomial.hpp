#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "simplexkern/multiindex.hpp"
#include "simplexkern/numkit.hpp"

namespace simplexkern {

// Sparse polynomial in d variables: exponent multi-index -> coefficient.
template <class T>
class Polynomial {
 public:
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, const T& c) {
    Polynomial p(dim);
    p.add_term(MultiIndex(dim, 0), c);
    return p;
  }

  static Polynomial monomial(int dim, const MultiIndex& e, const T& c) {
    Polynomial p(dim);
    p.add_term(e, c);
    return p;
  }

  int dim() const { return dim_; }
  const std::map<MultiIndex, T>& terms() const { return terms_; }

  void add_term(const MultiIndex& e, const T& c) {
    if (static_cast<int>(e.size()) != dim_)
      throw std::invalid_argument("polynomial term dimension mismatch");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!(c == T(0))) terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r = *this;
    r += o;
    return r;
  }

  Polynomial operator*(const Polynomial& o) const {
    Polynomial r(dim_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        MultiIndex e(dim_);
        for (int i = 0; i < dim_; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  Polynomial operator*(const T& s) const {
    Polynomial r(dim_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + o * T(-1); }

  T evaluate(const std::vector<T>& x) const {
    T out(0);
    for (const auto& [e, c] : terms_) {
      T t = c;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      out += t;
    }
    return out;
  }

  // Applies the variable permutation x_i -> x_{sigma(i)}.
  Polynomial permuted(const std::vector<int>& sigma) const {
    Polynomial r(dim_);
    for (const auto& [e, c] : terms_) {
      MultiIndex pe(dim_);
      for (int i = 0; i < dim_; ++i) pe[sigma[i]] = e[i];
      r.add_term(pe, c);
    }
    return r;
  }

  bool is_zero() const { return terms_.empty(); }

 private:
  int dim_;
  std::map<MultiIndex, T> terms_;
};

// E[p(X)] under Dirichlet(alpha), term by term.
template <class T>
T dirichlet_expectation(const DirichletParams<T>& alpha, const Polynomial<T>& p) {
  T out(0);
  for (const auto& [e, c] : p.terms()) out += c * dirichlet_moment(alpha, e);
  return out;
}

}  // namespace simplexkern
