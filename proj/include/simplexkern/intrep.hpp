#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "simplexkern/dist.hpp"
#include "simplexkern/hahn.hpp"
#include "simplexkern/jacobi.hpp"
#include "simplexkern/parallel.hpp"
#include "simplexkern/rng.hpp"

namespace simplexkern {

struct GasperVerdict {
  bool ok;
  std::string reason;
};

// Product-formula region of the shifted Jacobi polynomials on [0,1]:
// beta >= alpha and (alpha >= 1/2 or alpha + beta >= 2).
inline GasperVerdict check_gasper_region(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) return {false, "parameters must be positive"};
  if (beta < alpha) return {false, "beta < alpha"};
  if (alpha >= 0.5) return {true, "alpha >= 1/2"};
  if (alpha + beta >= 2.0) return {true, "alpha + beta >= 2"};
  return {false, "alpha < 1/2 and alpha + beta < 2"};
}

// Explicit-measure subregion where the (u, omega) sampler below applies.
inline bool koornwinder_samplable(double alpha, double beta) {
  return alpha >= 0.5 && beta >= alpha;
}

// One draw of Z with R_n(x)R_n(y) = E[R_n(Z)]:
//   Z = x y + U^2 (1-x)(1-y) + 2 U cos(Omega) sqrt(x(1-x)y(1-y))
//     = | sqrt(xy) + U e^{i Omega} sqrt((1-x)(1-y)) |^2
// with U^2 ~ Beta(alpha, beta-alpha) (U = 1 when beta = alpha) and
// cos(Omega) ~ 2 Beta(alpha-1/2, alpha-1/2) - 1 (Rademacher at alpha = 1/2).
inline double sample_koornwinder(double alpha, double beta, double x, double y,
                                 RngStream& rng) {
  if (!koornwinder_samplable(alpha, beta))
    throw std::domain_error(
        "sample_koornwinder: explicit measure needs alpha >= 1/2 and beta >= alpha");
  double u = (beta == alpha) ? 1.0 : std::sqrt(rng.beta(alpha, beta - alpha));
  double c;
  if (alpha == 0.5)
    c = rng.rademacher() ? 1.0 : -1.0;
  else
    c = 2.0 * rng.beta(alpha - 0.5, alpha - 0.5) - 1.0;
  double z = x * y + u * u * (1.0 - x) * (1.0 - y) +
             2.0 * u * c * std::sqrt(x * (1.0 - x) * y * (1.0 - y));
  return std::min(1.0, std::max(0.0, z));
}

struct DensityValue {
  double value;
  double last_term;  // convergence diagnostic
};

// Partial sum of K(x,y,z) = sum_n zeta_n R_n(x) R_n(y) R_n(z).
inline DensityValue density_k(double alpha, double beta, double x, double y, double z,
                              int truncation) {
  auto rx = univariate_r_table(alpha, beta, truncation, x);
  auto ry = univariate_r_table(alpha, beta, truncation, y);
  auto rz = univariate_r_table(alpha, beta, truncation, z);
  double acc = 0.0, last = 0.0;
  for (int n = 0; n <= truncation; ++n) {
    last = zeta(alpha, beta, n) * rx[n] * ry[n] * rz[n];
    acc += last;
  }
  return {acc, last};
}

// Per-stage region gate of the multivariate product-formula recursion, for
// parameters already sorted in decreasing order. Stage j couples the pair
// (alpha_j, alpha_{j-1}), so the Gasper condition is applied pairwise.
inline void check_z_chain_region(const std::vector<double>& alpha_sorted) {
  for (size_t j = 1; j < alpha_sorted.size(); ++j) {
    double aj = alpha_sorted[j];
    double prev = alpha_sorted[j - 1];
    bool gate = (aj <= prev && aj >= 0.5) || (prev + aj >= 2.0);
    if (!gate)
      throw std::domain_error("z-chain region violated at stage " + std::to_string(j + 1));
    if (!koornwinder_samplable(aj, prev))
      throw std::domain_error("z-chain stage " + std::to_string(j + 1) +
                              " lies outside the explicit sampling subregion");
  }
}

// Joint decreasing sort of (alpha, x, y); the kernel and xi are invariant
// under simultaneous coordinate permutations.
inline void sort_z_chain_inputs(std::vector<double>& alpha, std::vector<double>& x,
                                std::vector<double>& y) {
  const size_t d = alpha.size();
  std::vector<size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return alpha[a] > alpha[b]; });
  std::vector<double> a2(d), x2(d), y2(d);
  for (size_t i = 0; i < d; ++i) {
    a2[i] = alpha[idx[i]];
    x2[i] = x[idx[i]];
    y2[i] = y[idx[i]];
  }
  alpha.swap(a2);
  x.swap(x2);
  y.swap(y2);
}

// Z_d recursion: Z_1 = 1, Z_j = Phi_j D_j Z_{j-1}, unrolled coordinate by
// coordinate. Stage j works on the prefix-renormalized coordinate
// u_j = x_j/(x_1+...+x_j) and draws Phi_j from the stage measure with the
// parameter pair (alpha_j, alpha_{j-1}). The product D_j Z_{j-1} reduces to
// (u_j + (1-u_j) sqrt(Z))(w_j + (1-w_j) sqrt(Z)), which keeps the chain in
// [0,1]; X*_j = u_j/(u_j + (1-u_j) sqrt(Z)) with the continuous limit X* = 1
// when both vanish. An all-zero prefix contributes u_j = 0.
inline double sample_z_chain_sorted(const std::vector<double>& alpha,
                                    const std::vector<double>& x,
                                    const std::vector<double>& y, RngStream& rng) {
  const size_t d = alpha.size();
  double z = 1.0;
  double px = x[0], py = y[0];
  for (size_t j = 1; j < d; ++j) {
    px += x[j];
    py += y[j];
    double u = px > 0.0 ? x[j] / px : 0.0;
    double w = py > 0.0 ? y[j] / py : 0.0;
    double sq = std::sqrt(z);
    auto star = [&](double v) {
      double den = v + (1.0 - v) * sq;
      return den == 0.0 ? 1.0 : v / den;
    };
    double phi = sample_koornwinder(alpha[j], alpha[j - 1], star(u), star(w), rng);
    z = phi * (u + (1.0 - u) * sq) * (w + (1.0 - w) * sq);
  }
  return z;
}

inline double sample_z_chain(const DirichletParams<double>& alpha,
                             const std::vector<double>& x, const std::vector<double>& y,
                             RngStream& rng) {
  std::vector<double> a = alpha.alpha, xs = x, ys = y;
  sort_z_chain_inputs(a, xs, ys);
  check_z_chain_region(a);
  return sample_z_chain_sorted(a, xs, ys, rng);
}

struct McCheck {
  std::string name;
  double estimate;
  double std_error;
  double exact;
  double z_score;
};

namespace detail {

// Deterministic sharded Monte Carlo over the Z chain: accumulate per-draw
// values of every statistic in `eval` (indexed layout), merge in shard order.
template <class Eval>
std::vector<RunningStat> z_chain_monte_carlo(const DirichletParams<double>& alpha,
                                             const std::vector<double>& x,
                                             const std::vector<double>& y,
                                             std::uint64_t draws, std::uint64_t seed,
                                             size_t n_stats, Eval&& eval) {
  std::vector<double> a = alpha.alpha, xs = x, ys = y;
  sort_z_chain_inputs(a, xs, ys);
  check_z_chain_region(a);

  std::vector<std::vector<RunningStat>> shard_stats(kMonteCarloShards,
                                                    std::vector<RunningStat>(n_stats));
  RngStream base(seed);
  for_each_shard(kMonteCarloShards, [&](unsigned shard) {
    RngStream rng = base.substream(shard);
    std::uint64_t n = draws / kMonteCarloShards +
                      (shard < draws % kMonteCarloShards ? 1 : 0);
    std::vector<double> vals(n_stats);
    for (std::uint64_t i = 0; i < n; ++i) {
      double z = sample_z_chain_sorted(a, xs, ys, rng);
      eval(z, vals);
      for (size_t s = 0; s < n_stats; ++s) shard_stats[shard][s].add(vals[s]);
    }
  });
  std::vector<RunningStat> merged(n_stats);
  for (unsigned shard = 0; shard < kMonteCarloShards; ++shard)
    for (size_t s = 0; s < n_stats; ++s) merged[s].merge(shard_stats[shard][s]);
  return merged;
}

}  // namespace detail

// Monte Carlo check of the moment identity
//   E[Z_d^m] = (alpha_d)_(m)/(|alpha|)_(m) * xi_m(x,y)
// against the exact xi from the jacobi module (alpha_d = smallest parameter).
inline std::vector<McCheck> verify_z_moments(const DirichletParams<Rational>& alpha_exact,
                                             const std::vector<Rational>& x,
                                             const std::vector<Rational>& y, int max_m,
                                             std::uint64_t draws, std::uint64_t seed) {
  std::vector<double> ad, xd, yd;
  for (int i = 0; i < alpha_exact.dim(); ++i) {
    ad.push_back(to_double(alpha_exact.alpha[i]));
    xd.push_back(to_double(x[i]));
    yd.push_back(to_double(y[i]));
  }
  DirichletParams<double> alpha(ad);
  auto stats = detail::z_chain_monte_carlo(
      alpha, xd, yd, draws, seed, max_m, [&](double z, std::vector<double>& vals) {
        double p = 1.0;
        for (int m = 1; m <= max_m; ++m) {
          p *= z;
          vals[m - 1] = p;
        }
      });

  Rational amin = *std::min_element(alpha_exact.alpha.begin(), alpha_exact.alpha.end());
  std::vector<McCheck> out;
  for (int m = 1; m <= max_m; ++m) {
    Rational target = rising(amin, m) / rising(alpha_exact.total, m) *
                      xi(alpha_exact, m, x, y);
    double t = to_double(target);
    out.push_back({"E[Z^" + std::to_string(m) + "]", stats[m - 1].mean(),
                   stats[m - 1].std_error(), t, stats[m - 1].z_score(t)});
  }
  return out;
}

// Monte Carlo check of the kernel representation
//   Q^alpha_n(x,y) = E[Q^{(alpha_d, |alpha|-alpha_d)}_n(Z_d, 1)].
inline std::vector<McCheck> verify_kernel_representation(
    const DirichletParams<Rational>& alpha_exact, const std::vector<Rational>& x,
    const std::vector<Rational>& y, int max_n, std::uint64_t draws, std::uint64_t seed) {
  std::vector<double> ad, xd, yd;
  for (int i = 0; i < alpha_exact.dim(); ++i) {
    ad.push_back(to_double(alpha_exact.alpha[i]));
    xd.push_back(to_double(x[i]));
    yd.push_back(to_double(y[i]));
  }
  DirichletParams<double> alpha(ad);

  Rational amin = *std::min_element(alpha_exact.alpha.begin(), alpha_exact.alpha.end());
  Rational theta = alpha_exact.total;
  // Q^{(a,b)}_n(z,1) = sum_m a_nm (theta)_(m)/(a)_(m) z^m
  std::vector<std::vector<double>> coef(max_n + 1);
  for (int n = 0; n <= max_n; ++n) {
    coef[n].resize(n + 1);
    for (int m = 0; m <= n; ++m)
      coef[n][m] = to_double(coeff_a(theta, n, m) * rising(theta, m) / rising(amin, m));
  }

  auto stats = detail::z_chain_monte_carlo(
      alpha, xd, yd, draws, seed, max_n + 1, [&](double z, std::vector<double>& vals) {
        double zp = 1.0;
        std::vector<double> pows(max_n + 1);
        for (int m = 0; m <= max_n; ++m) {
          pows[m] = zp;
          zp *= z;
        }
        for (int n = 0; n <= max_n; ++n) {
          double acc = 0.0;
          for (int m = 0; m <= n; ++m) acc += coef[n][m] * pows[m];
          vals[n] = acc;
        }
      });

  std::vector<McCheck> out;
  for (int n = 0; n <= max_n; ++n) {
    double t = to_double(q_kernel(alpha_exact, n, x, y).value);
    out.push_back({"E[Q_" + std::to_string(n) + "(Z,1)]", stats[n].mean(),
                   stats[n].std_error(), t, stats[n].z_score(t)});
  }
  return out;
}

struct MixingWeights {
  std::vector<double> weights;      // u_{r,s;alpha}(k), k = 0..N
  std::vector<double> std_errors;
};

// u_{r,s;alpha}(k) = E[Binomial(N, Z_d) pmf at k] with (X,Y) posterior-mixed;
// accumulating the whole pmf row per draw keeps sum_k u(k) = 1 exactly.
inline MixingWeights hahn_mixing_weight(const DirichletParams<double>& alpha,
                                        const MultiIndex& r, const MultiIndex& s,
                                        std::uint64_t draws, std::uint64_t seed) {
  const int N = total_degree(r);
  if (total_degree(s) != N) throw std::invalid_argument("hahn_mixing_weight: |r| != |s|");
  std::vector<double> binom(N + 1);
  for (int k = 0; k <= N; ++k) binom[k] = binomial(N, k).convert_to<double>();

  std::vector<std::vector<RunningStat>> shard_stats(kMonteCarloShards,
                                                    std::vector<RunningStat>(N + 1));
  RngStream base(seed);
  for_each_shard(kMonteCarloShards, [&](unsigned shard) {
    RngStream rng = base.substream(shard);
    std::uint64_t n = draws / kMonteCarloShards +
                      (shard < draws % kMonteCarloShards ? 1 : 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      auto xpost = sample_posterior_dirichlet(alpha, r, rng);
      auto ypost = sample_posterior_dirichlet(alpha, s, rng);
      double z = sample_z_chain(alpha, xpost, ypost, rng);
      for (int k = 0; k <= N; ++k) {
        double mass = binom[k] * std::pow(z, k) * std::pow(1.0 - z, N - k);
        shard_stats[shard][k].add(mass);
      }
    }
  });
  MixingWeights out;
  out.weights.resize(N + 1);
  out.std_errors.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    RunningStat merged;
    for (unsigned shard = 0; shard < kMonteCarloShards; ++shard)
      merged.merge(shard_stats[shard][k]);
    out.weights[k] = merged.mean();
    out.std_errors[k] = merged.std_error();
  }
  return out;
}

// Full reconstruction of the Hahn kernel from the mixing weights:
//   H_n(r,s) = zeta_n ((theta+N)_(n)/N_[n])^2 sum_k u(k) htilde_n(k;N)
// with the pair (alpha_d, |alpha|-alpha_d) on the univariate side.
inline std::vector<McCheck> verify_hahn_mixture(const DirichletParams<Rational>& alpha_exact,
                                                const MultiIndex& r, const MultiIndex& s,
                                                int max_n, std::uint64_t draws,
                                                std::uint64_t seed) {
  const int N = total_degree(r);
  std::vector<double> ad;
  for (int i = 0; i < alpha_exact.dim(); ++i) ad.push_back(to_double(alpha_exact.alpha[i]));
  DirichletParams<double> alpha(ad);

  Rational amin = *std::min_element(alpha_exact.alpha.begin(), alpha_exact.alpha.end());
  Rational bmin = alpha_exact.total - amin;
  HahnContext<Rational> ctx(alpha_exact, N);

  // per-draw statistic: sum_k Binom(N,Z)(k) htilde_n(k;N), scaled afterwards
  std::vector<std::vector<double>> ht(max_n + 1, std::vector<double>(N + 1));
  for (int n = 0; n <= max_n; ++n)
    for (int k = 0; k <= N; ++k)
      ht[n][k] = to_double(posterior_jacobi_mean(amin, bmin, n, k, N));
  std::vector<double> binom(N + 1);
  for (int k = 0; k <= N; ++k) binom[k] = binomial(N, k).convert_to<double>();

  std::vector<std::vector<RunningStat>> shard_stats(
      kMonteCarloShards, std::vector<RunningStat>(max_n + 1));
  RngStream base(seed);
  for_each_shard(kMonteCarloShards, [&](unsigned shard) {
    RngStream rng = base.substream(shard);
    std::uint64_t nn = draws / kMonteCarloShards +
                       (shard < draws % kMonteCarloShards ? 1 : 0);
    for (std::uint64_t i = 0; i < nn; ++i) {
      auto xpost = sample_posterior_dirichlet(alpha, r, rng);
      auto ypost = sample_posterior_dirichlet(alpha, s, rng);
      double z = sample_z_chain(alpha, xpost, ypost, rng);
      for (int n = 0; n <= max_n; ++n) {
        double acc = 0.0;
        for (int k = 0; k <= N; ++k)
          acc += binom[k] * std::pow(z, k) * std::pow(1.0 - z, N - k) * ht[n][k];
        shard_stats[shard][n].add(acc);
      }
    }
  });

  std::vector<McCheck> out;
  for (int n = 0; n <= max_n; ++n) {
    RunningStat merged;
    for (unsigned shard = 0; shard < kMonteCarloShards; ++shard)
      merged.merge(shard_stats[shard][n]);
    Rational cn = falling(Rational(N), n) / rising(alpha_exact.total + Rational(N), n);
    double scale = to_double(zeta(amin, bmin, n) / (cn * cn));
    double exact = to_double(h_kernel(ctx, n, r, s).value);
    double est = scale * merged.mean();
    double se = scale * merged.std_error();
    double zsc = se == 0.0 ? (est == exact ? 0.0 : 1e30) : (est - exact) / se;
    out.push_back({"H_" + std::to_string(n), est, se, exact, zsc});
  }
  return out;
}

}  // namespace simplexkern
