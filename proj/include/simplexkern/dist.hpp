#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "simplexkern/multiindex.hpp"
#include "simplexkern/numkit.hpp"
#include "simplexkern/rng.hpp"

namespace simplexkern {

// Dirichlet-Multinomial mass at r with N = |r|:
//   C(N, r) * prod (alpha_i)_(r_i) / (|alpha|)_(N)
template <class T>
T dm_pmf(const DirichletParams<T>& alpha, const MultiIndex& r) {
  if (static_cast<int>(r.size()) != alpha.dim())
    throw std::invalid_argument("dm_pmf: dimension mismatch");
  T out = multinomial_as<T>(r);
  for (int i = 0; i < alpha.dim(); ++i) out *= rising(alpha.alpha[i], r[i]);
  return out / rising(alpha.total, total_degree(r));
}

// Ewens sampling formula at a partition r of |r|:
//   |r|! / (prod j^{beta_j} beta_j!) * theta^k / (theta)_(|r|)
template <class T>
T esf_pmf(const T& theta, const Partition& part) {
  if (part.total() < 1) throw std::invalid_argument("esf_pmf: |part| must be >= 1");
  T out = factorial_as<T>(part.total());
  for (const auto& [j, bj] : part.multiplicities()) {
    for (int c = 0; c < bj; ++c) out /= T(j);
    out /= factorial_as<T>(bj);
  }
  for (int c = 0; c < part.k(); ++c) out *= theta;
  return out / rising(theta, part.total());
}

// Ranked Dirichlet-Multinomial with symmetric parameter theta/d:
//   d_[k] * N! / (prod j!^{beta_j} beta_j!) * prod (theta/d)_(j)^{beta_j} / (theta)_(N)
template <class T>
T ranked_dm_pmf(const T& theta, int d, const Partition& part, int N) {
  if (part.total() != N) throw std::invalid_argument("ranked_dm_pmf: |part| != N");
  if (part.k() > d) throw std::domain_error("ranked_dm_pmf: partition has more than d parts");
  T symmetric = theta / T(d);
  T out = falling(T(d), part.k()) * factorial_as<T>(N);
  for (const auto& [j, bj] : part.multiplicities()) {
    for (int c = 0; c < bj; ++c) out *= rising(symmetric, j) / factorial_as<T>(j);
    out /= factorial_as<T>(bj);
  }
  return out / rising(theta, N);
}

// prod C(c_i, r_i) / C(|c|, |r|); requires r_i <= c_i.
template <class T>
T hypergeom_pmf(const MultiIndex& c, const MultiIndex& r) {
  if (c.size() != r.size()) throw std::invalid_argument("hypergeom_pmf: dimension mismatch");
  T out(1);
  for (size_t i = 0; i < c.size(); ++i) {
    if (r[i] > c[i])
      throw std::domain_error("hypergeom_pmf: r_i exceeds c_i at coordinate " +
                              std::to_string(i + 1));
    out *= binomial_as<T>(c[i], r[i]);
  }
  return out / binomial_as<T>(total_degree(c), total_degree(r));
}

// --- samplers (floating flavor) ---

inline std::vector<double> sample_dirichlet(const DirichletParams<double>& alpha,
                                            RngStream& rng) {
  std::vector<double> x(alpha.dim());
  double tot = 0.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    x[i] = rng.gamma(alpha.alpha[i]);
    tot += x[i];
  }
  for (double& xi : x) xi /= tot;
  return x;
}

// Multinomial draw by sequential conditional binomial splitting.
inline MultiIndex sample_multinomial(int n, const std::vector<double>& p, RngStream& rng) {
  MultiIndex r(p.size(), 0);
  int rem = n;
  double mass = 1.0;
  for (size_t i = 0; i + 1 < p.size() && rem > 0; ++i) {
    double q = mass > 0 ? std::min(1.0, std::max(0.0, p[i] / mass)) : 0.0;
    r[i] = rng.binomial(rem, q);
    rem -= r[i];
    mass -= p[i];
  }
  r[p.size() - 1] += rem;
  return r;
}

inline MultiIndex sample_dm(const DirichletParams<double>& alpha, int N, RngStream& rng) {
  std::vector<double> x = sample_dirichlet(alpha, rng);
  return sample_multinomial(N, x, rng);
}

inline std::vector<double> sample_posterior_dirichlet(const DirichletParams<double>& alpha,
                                                      const MultiIndex& r, RngStream& rng) {
  if (static_cast<int>(r.size()) != alpha.dim())
    throw std::invalid_argument("sample_posterior_dirichlet: dimension mismatch");
  std::vector<double> a = alpha.alpha;
  for (int i = 0; i < alpha.dim(); ++i) a[i] += r[i];
  DirichletParams<double> post(a);
  return sample_dirichlet(post, rng);
}

// Ranked weights with explicit truncated tail mass; weights are weakly
// decreasing and sum to 1 - tail.
struct RankedPoint {
  std::vector<double> weights;
  double tail = 0.0;
};

inline RankedPoint make_ranked(std::vector<double> w) {
  std::sort(w.begin(), w.end(), std::greater<double>());
  double s = 0.0;
  for (double wi : w) s += wi;
  return RankedPoint{std::move(w), std::max(0.0, 1.0 - s)};
}

// PD(theta) via GEM stick-breaking followed by ranking. Sticks are broken
// until the unbroken mass is below tail_bound; the `truncation` largest atoms
// are returned and everything else is reported as tail.
inline RankedPoint sample_pd(double theta, int truncation, RngStream& rng,
                             double tail_bound = 1e-6) {
  if (truncation < 1) throw std::invalid_argument("sample_pd: truncation must be >= 1");
  if (!(theta > 0)) throw std::invalid_argument("sample_pd: theta must be positive");
  std::vector<double> atoms;
  double remaining = 1.0;
  const int max_sticks = 100000;
  int sticks = 0;
  while (remaining >= tail_bound && sticks < max_sticks) {
    double v = rng.beta(1.0, theta);
    atoms.push_back(remaining * v);
    remaining *= 1.0 - v;
    ++sticks;
  }
  std::sort(atoms.begin(), atoms.end(), std::greater<double>());
  double tail = remaining;
  if (static_cast<int>(atoms.size()) > truncation) {
    for (size_t i = truncation; i < atoms.size(); ++i) tail += atoms[i];
    atoms.resize(truncation);
  }
  if (tail >= tail_bound * 1.0001 && remaining < tail_bound)
    throw std::domain_error("sample_pd: tail bound unattainable at the given truncation");
  if (remaining >= tail_bound)
    throw std::domain_error("sample_pd: tail bound unattainable within the stick budget");
  return RankedPoint{std::move(atoms), tail};
}

}  // namespace simplexkern
