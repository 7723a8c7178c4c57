#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "simplexkern/dist.hpp"
#include "simplexkern/jacobi.hpp"
#include "simplexkern/multiindex.hpp"
#include "simplexkern/numkit.hpp"
#include "simplexkern/polynomial.hpp"

namespace simplexkern {

namespace detail {

// All set partitions of {0..k-1} as block lists, via restricted growth strings.
inline const std::vector<std::vector<std::vector<int>>>& set_partitions(int k) {
  static std::vector<std::vector<std::vector<std::vector<int>>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(cache.size()) <= k) {
    int kk = static_cast<int>(cache.size());
    std::vector<std::vector<std::vector<int>>> parts;
    std::vector<int> rgs(kk, 0);
    std::function<void(int, int)> rec = [&](int pos, int max_block) {
      if (pos == kk) {
        int nblocks = max_block;
        std::vector<std::vector<int>> blocks(nblocks);
        for (int i = 0; i < kk; ++i) blocks[rgs[i]].push_back(i);
        parts.push_back(std::move(blocks));
        return;
      }
      for (int b = 0; b <= max_block; ++b) {
        rgs[pos] = b;
        rec(pos + 1, std::max(max_block, b + 1));
      }
    };
    if (kk == 0)
      parts.push_back({});
    else
      rec(0, 0);
    cache.push_back(std::move(parts));
  }
  return cache[k];
}

// Sum over ordered tuples of DISTINCT indices of prod_p f(i_p, p), where
// f(i, p) is given per part p through column sums already fused per block:
// pass g(block) = sum_i prod_{p in block} f(i, p). Inclusion-exclusion over
// set partitions with Moebius weight prod_B (-1)^{|B|-1} (|B|-1)!.
template <class T, class BlockSum>
T distinct_tuple_sum(int k, BlockSum&& block_sum) {
  if (k == 0) return T(1);
  T out(0);
  for (const auto& partition : set_partitions(k)) {
    T term(1);
    for (const auto& block : partition) {
      T g = block_sum(block);
      T w = factorial_as<T>(static_cast<int>(block.size()) - 1);
      if (block.size() % 2 == 0) w = -w;
      term *= w * g;
    }
    out += term;
  }
  return out;
}

}  // namespace detail

// Monomial functional [x, r]_d: sum over ordered subsequences of k distinct
// indices of prod_j x_{i_j}^{r_j}. Computed through power sums, so it stays
// cheap for truncated infinite points.
template <class T>
T power_sum_functional(const std::vector<T>& x, const Partition& part) {
  const auto& parts = part.parts();
  const int k = part.k();
  if (k == 0) return T(1);
  if (k > static_cast<int>(x.size()))
    throw std::invalid_argument("power_sum_functional: more parts than coordinates");
  return detail::distinct_tuple_sum<T>(k, [&](const std::vector<int>& block) {
    int e = 0;
    for (int p : block) e += parts[p];
    T s(0);
    for (const T& xi : x) {
      T t(1);
      for (int c = 0; c < e; ++c) t *= xi;
      s += t;
    }
    return s;
  });
}

// sharp(l) = C(|l|, l) / prod beta_i(l)!
template <class T>
T sharp(const Partition& part) {
  T out = multinomial_as<T>(MultiIndex(part.parts().begin(), part.parts().end()));
  for (const auto& [j, bj] : part.multiplicities()) out /= factorial_as<T>(bj);
  return out;
}

// Ranked Jacobi xi: sum over partitions l of m with at most d parts of
//   sharp(l)[x;l] sharp(l)[y;l] / DM_down_{theta,d}(l; m)
template <class T>
T xi_ranked(const T& theta, int d, int m, const std::vector<T>& x,
            const std::vector<T>& y) {
  if (m == 0) return T(1);
  T out(0);
  for (const Partition& l : enumerate_partitions(m, std::min(m, d))) {
    T s = sharp<T>(l);
    out += s * power_sum_functional(x, l) * s * power_sum_functional(y, l) /
           ranked_dm_pmf(theta, d, l, m);
  }
  return out;
}

// Ranked kernel; the degree-1 kernel vanishes identically.
template <class T>
KernelValue<T> q_kernel_ranked(const T& theta, int d, int n, const std::vector<T>& x,
                               const std::vector<T>& y) {
  T out(0);
  for (int m = 0; m <= n; ++m)
    out += coeff_a(theta, n, m) * xi_ranked(theta, d, m, x, y);
  return {n, out};
}

inline void check_tail_budget(const RankedPoint& x, double budget, const char* who) {
  if (x.tail > budget)
    throw std::domain_error(std::string(who) + ": truncation tail mass " +
                            std::to_string(x.tail) + " exceeds budget " +
                            std::to_string(budget));
}

// Poisson-Dirichlet xi: partition sum with the ESF denominator. Tail
// sensitivity: power sums of order >= 2 see at most tail^2, the order-1 sum
// is 1 - tail by construction.
inline double xi_pd(double theta, int m, const RankedPoint& x, const RankedPoint& y,
                    double tail_budget = 1e-3) {
  if (m == 0) return 1.0;
  check_tail_budget(x, tail_budget, "xi_pd");
  check_tail_budget(y, tail_budget, "xi_pd");
  double out = 0.0;
  for (const Partition& l : enumerate_partitions(m, m)) {
    double s = sharp<double>(l);
    out += s * power_sum_functional(x.weights, l) * s * power_sum_functional(y.weights, l) /
           esf_pmf(theta, l);
  }
  return out;
}

inline KernelValue<double> q_kernel_pd(double theta, int n, const RankedPoint& x,
                                       const RankedPoint& y, double tail_budget = 1e-3) {
  double out = 0.0;
  for (int m = 0; m <= n; ++m)
    out += coeff_a(theta, n, m) * xi_pd(theta, m, x, y, tail_budget);
  return {n, out};
}

// (1/d!) sum over variable permutations of p(sigma x).
template <class T>
Polynomial<T> symmetrize_polynomial(const Polynomial<T>& p) {
  const int d = p.dim();
  std::vector<int> sigma(d);
  for (int i = 0; i < d; ++i) sigma[i] = i;
  Polynomial<T> out(d);
  int count = 0;
  do {
    out += p.permuted(sigma);
    ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out * (T(1) / factorial_as<T>(d));
}

// Permutation-averaged Hahn xi for the symmetric ranked DM, computed by
// grouping compositions l by partition shape:
//   xi^{H down}_m(r,s) = theta_(m)/((theta+N)_(m))^2 *
//     sum_{shape l, k <= d} C(m,l)/prod beta_j! * S_l(r) S_l(s) / (d_[k] prod (theta/d)_(j)^{beta_j})
// where S_l(r) sums prod_p rising(theta/d + r_i_p, l_p) over distinct indices.
template <class T>
T xi_h_ranked(const T& theta, int d, int m, const MultiIndex& r, const MultiIndex& s) {
  if (static_cast<int>(r.size()) > d || static_cast<int>(s.size()) > d)
    throw std::invalid_argument("xi_h_ranked: more coordinates than d");
  const int N = total_degree(r);
  if (total_degree(s) != N) throw std::invalid_argument("xi_h_ranked: |r| != |s|");
  if (m == 0) return T(1);
  const T sym = theta / T(d);
  auto padded = [&](const MultiIndex& v) {
    std::vector<int> out(v.begin(), v.end());
    out.resize(d, 0);
    return out;
  };
  const std::vector<int> rp = padded(r), sp = padded(s);

  auto big_s = [&](const std::vector<int>& counts, const std::vector<int>& parts) {
    return detail::distinct_tuple_sum<T>(
        static_cast<int>(parts.size()), [&](const std::vector<int>& block) {
          T g(0);
          for (int i = 0; i < d; ++i) {
            T t(1);
            for (int p : block) t *= rising(sym + T(counts[i]), parts[p]);
            g += t;
          }
          return g;
        });
  };

  const T denom = rising(theta + T(N), m);
  T out(0);
  for (const Partition& l : enumerate_partitions(m, std::min(m, d))) {
    const auto& parts = l.parts();
    T weight = multinomial_as<T>(MultiIndex(parts.begin(), parts.end()));
    for (const auto& [j, bj] : l.multiplicities()) {
      weight /= factorial_as<T>(bj);
      for (int c = 0; c < bj; ++c) weight /= rising(sym, j);
    }
    weight /= falling(T(d), l.k());
    out += weight * big_s(rp, parts) * big_s(sp, parts);
  }
  return out * rising(theta, m) / (denom * denom);
}

// Ranked Hahn kernel: explicit DM kernel shape with xi^H replaced by its
// permutation average.
template <class T>
KernelValue<T> h_kernel_ranked(const T& theta, int d, int N, int n, const Partition& r,
                               const Partition& s) {
  if (r.total() != N || s.total() != N)
    throw std::invalid_argument("h_kernel_ranked: partitions must sum to N");
  if (n > N) throw std::domain_error("h_kernel_ranked: degree n exceeds N");
  MultiIndex rm(r.parts().begin(), r.parts().end());
  MultiIndex sm(s.parts().begin(), s.parts().end());
  rm.resize(d, 0);
  sm.resize(d, 0);
  T sum(0);
  for (int m = 0; m <= n; ++m)
    sum += coeff_a(theta, n, m) * xi_h_ranked(theta, d, m, rm, sm);
  return {n, rising(theta + T(N), n) / falling(T(N), n) * sum};
}

// d -> infinity limit of xi_h_ranked: each part maps either to an occupied
// type (rising factorial of its count) or to a fresh unseen type with weight
// theta (j-1)!. This is the [r;b]' form with the new-type convention made
// explicit.
template <class T>
T xi_h_esf(const T& theta, int N, int m, const Partition& r, const Partition& s) {
  if (r.total() != N || s.total() != N)
    throw std::invalid_argument("xi_h_esf: partitions must sum to N");
  if (m == 0) return T(1);

  auto big_s = [&](const Partition& occ, const std::vector<int>& parts) {
    const int k = static_cast<int>(parts.size());
    T total(0);
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::vector<int> chosen;
      T fresh(1);
      for (int p = 0; p < k; ++p) {
        if (mask & (1 << p))
          chosen.push_back(p);
        else
          fresh *= theta * factorial_as<T>(parts[p] - 1);
      }
      if (static_cast<int>(chosen.size()) > occ.k()) continue;
      T occ_sum = detail::distinct_tuple_sum<T>(
          static_cast<int>(chosen.size()), [&](const std::vector<int>& block) {
            T g(0);
            for (int c : occ.parts()) {
              T t(1);
              for (int b : block) t *= rising(T(c), parts[chosen[b]]);
              g += t;
            }
            return g;
          });
      total += fresh * occ_sum;
    }
    return total;
  };

  const T denom = rising(theta + T(N), m);
  T out(0);
  for (const Partition& l : enumerate_partitions(m, m)) {
    const auto& parts = l.parts();
    T weight = multinomial_as<T>(MultiIndex(parts.begin(), parts.end()));
    for (const auto& [j, bj] : l.multiplicities()) {
      weight /= factorial_as<T>(bj);
      for (int c = 0; c < bj; ++c) weight *= T(1) / (theta * factorial_as<T>(j - 1));
    }
    out += weight * big_s(r, parts) * big_s(s, parts);
  }
  return out * rising(theta, m) / (denom * denom);
}

// Kernel polynomials with respect to the Ewens sampling formula; the degree-1
// kernel vanishes identically.
template <class T>
KernelValue<T> h_kernel_esf(const T& theta, int N, int n, const Partition& r,
                            const Partition& s) {
  if (n > N) throw std::domain_error("h_kernel_esf: degree n exceeds N");
  T sum(0);
  for (int m = 0; m <= n; ++m)
    sum += coeff_a(theta, n, m) * xi_h_esf(theta, N, m, r, s);
  return {n, rising(theta + T(N), n) / falling(T(N), n) * sum};
}

}  // namespace simplexkern
