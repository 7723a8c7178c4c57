#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "simplexkern/dist.hpp"
#include "simplexkern/jacobi.hpp"
#include "simplexkern/rng.hpp"

namespace simplexkern {

// Exchangeable bivariate Dirichlet-marginal law: X ~ D_alpha, M ~ mixing pmf,
// l ~ Multinomial(M; X), Y ~ D_{alpha + l}.
struct CopulaSpec {
  DirichletParams<double> alpha;
  std::vector<double> mixing_pmf;  // degenerate delta_m allowed

  CopulaSpec(DirichletParams<double> a, std::vector<double> pmf)
      : alpha(std::move(a)), mixing_pmf(std::move(pmf)) {
    if (mixing_pmf.empty()) throw std::invalid_argument("CopulaSpec: empty mixing pmf");
    double tot = 0.0;
    for (double p : mixing_pmf) {
      if (p < 0.0) throw std::invalid_argument("CopulaSpec: negative pmf entry");
      tot += p;
    }
    if (std::abs(tot - 1.0) > 1e-12)
      throw std::invalid_argument("CopulaSpec: mixing pmf must sum to 1");
  }

  static CopulaSpec degenerate(DirichletParams<double> a, int m) {
    std::vector<double> pmf(m + 1, 0.0);
    pmf[m] = 1.0;
    return CopulaSpec(std::move(a), std::move(pmf));
  }

  bool is_degenerate() const {
    for (double p : mixing_pmf)
      if (p != 0.0 && p != 1.0) return false;
    return true;
  }
};

inline int sample_pmf_index(const std::vector<double>& pmf, RngStream& rng) {
  double u = rng.uniform();
  double cum = 0.0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    cum += pmf[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(pmf.size()) - 1;
}

struct CopulaDraw {
  std::vector<double> x;
  std::vector<double> y;
  int m;  // realized mixing level
};

inline CopulaDraw sample_pair(const CopulaSpec& spec, RngStream& rng) {
  CopulaDraw out;
  out.x = sample_dirichlet(spec.alpha, rng);
  out.m = sample_pmf_index(spec.mixing_pmf, rng);
  MultiIndex l = sample_multinomial(out.m, out.x, rng);
  out.y = sample_posterior_dirichlet(spec.alpha, l, rng);
  return out;
}

struct PdCopulaDraw {
  RankedPoint x;
  RankedPoint y;
  int m;
};

// Poisson-Dirichlet analogue. Step (ii) samples a partition of m from the
// atoms of x; step (iii) draws Y from the posterior: Dirichlet(l_1..l_k,
// theta) weights split between the sampled atoms and a fresh PD(theta) point
// (the finite-d limit of D_{alpha+l} with symmetric alpha). The posterior
// step is validated empirically against the finite-d sampler at d = 200
// rather than derived; see the copula tests.
inline PdCopulaDraw sample_pair_pd(double theta, const std::vector<double>& mixing_pmf,
                                   int truncation, RngStream& rng) {
  PdCopulaDraw out;
  out.x = sample_pd(theta, truncation, rng);
  out.m = sample_pmf_index(mixing_pmf, rng);

  // m iid picks from the atom distribution; the sub-1e-6 tail is folded into
  // the smallest atom
  std::vector<int> counts(out.x.weights.size(), 0);
  for (int pick = 0; pick < out.m; ++pick) {
    double u = rng.uniform();
    double cum = 0.0;
    size_t idx = out.x.weights.size() - 1;
    for (size_t i = 0; i < out.x.weights.size(); ++i) {
      cum += out.x.weights[i];
      if (u < cum) {
        idx = i;
        break;
      }
    }
    ++counts[idx];
  }

  if (out.m == 0) {
    out.y = sample_pd(theta, truncation, rng);
    return out;
  }

  // Dirichlet(l_1,...,l_k, theta) split: gammas at the observed atoms plus a
  // Gamma(theta) share for the fresh remainder
  std::vector<double> atom_mass;
  double total = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    double g = rng.gamma(static_cast<double>(counts[i]));
    atom_mass.push_back(g);
    total += g;
  }
  double fresh_share = rng.gamma(theta);
  total += fresh_share;

  auto fresh = sample_pd(theta, truncation, rng);
  std::vector<double> merged;
  for (double g : atom_mass) merged.push_back(g / total);
  double scale = fresh_share / total;
  for (double w : fresh.weights) merged.push_back(w * scale);
  out.y = make_ranked(std::move(merged));
  out.y.tail = fresh.tail * scale;
  if (static_cast<int>(out.y.weights.size()) > truncation) {
    for (size_t i = truncation; i < out.y.weights.size(); ++i)
      out.y.tail += out.y.weights[i];
    out.y.weights.resize(truncation);
  }
  return out;
}

struct Estimate {
  double value;
  double std_error;
};

// Empirical canonical correlation of degree n: mean of the orthonormal-kernel
// contrast Q_n(X,Y)/dim_n, whose expectation is rho_n for a canonical-
// correlation pair. dim_n = C(n+d-2, d-2) counts the degree-n polynomials;
// for d = 2 this is the plain Qo_n(X) Qo_n(Y) product. The jackknife SE of a
// sample mean reduces to the usual standard error.
inline Estimate estimate_canonical_correlation(const std::vector<CopulaDraw>& samples,
                                               const DirichletParams<Rational>& alpha,
                                               int n) {
  const int d = alpha.dim();
  double dim = binomial(n + d - 2, d - 2).convert_to<double>();
  if (n == 0) dim = 1.0;
  std::vector<double> ad;
  for (int i = 0; i < d; ++i) ad.push_back(to_double(alpha.alpha[i]));
  DirichletParams<double> alpha_d(ad);
  RunningStat stat;
  for (const auto& s : samples)
    stat.add(q_kernel(alpha_d, n, s.x, s.y).value / dim);
  return {stat.mean(), stat.std_error()};
}

}  // namespace simplexkern
