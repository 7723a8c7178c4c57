// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Tolerances are pinned in code next to each check; Monte Carlo criteria run
// on fixed seeds, and criterion 6 carries the documented re-run rule (at most
// one |z| > 3 cell, which must pass on a single re-run with a shifted seed).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "simplexkern/copula.hpp"
#include "simplexkern/dist.hpp"
#include "simplexkern/hahn.hpp"
#include "simplexkern/intrep.hpp"
#include "simplexkern/jacobi.hpp"
#include "simplexkern/pds.hpp"
#include "simplexkern/polynomial.hpp"
#include "simplexkern/symkern.hpp"

using namespace simplexkern;

namespace {

Rational q(long p, long den = 1) { return Rational(p, den); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<Rational> rational_point(int d, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> pick(1, 9);
  std::vector<Rational> x(d);
  Rational tot(0);
  for (int i = 0; i < d; ++i) {
    x[i] = Rational(pick(gen));
    tot += x[i];
  }
  for (auto& v : x) v /= tot;
  return x;
}

// Dirichlet monomial moments with a per-alpha cache; the polynomial products
// in the exact oracles hit few distinct exponents.
struct MomentCache {
  const DirichletParams<Rational>& alpha;
  std::map<MultiIndex, Rational> cache;

  explicit MomentCache(const DirichletParams<Rational>& a) : alpha(a) {}

  const Rational& operator()(const MultiIndex& e) {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, dirichlet_moment(alpha, e)).first;
    return it->second;
  }

  Rational expect(const Polynomial<Rational>& p) {
    Rational out(0);
    for (const auto& [e, c] : p.terms()) out += c * (*this)(e);
    return out;
  }
};

// ---- criterion 1 ----
Outcome criterion_orthogonality() {
  std::vector<std::vector<Rational>> alpha_sets = {
      {q(1), q(1)}, {q(1), q(2)}, {q(1), q(1), q(2)}, {q(1, 2), q(3, 2), q(1)}};
  std::mt19937_64 gen(424242);
  long checks = 0;
  for (const auto& as : alpha_sets) {
    DirichletParams<Rational> alpha(as);
    MomentCache mom(alpha);
    for (int pair = 0; pair < 5; ++pair) {
      auto x = rational_point(alpha.dim(), gen);
      auto z = rational_point(alpha.dim(), gen);
      std::vector<Polynomial<Rational>> qx, qz;
      for (int n = 0; n <= 4; ++n) {
        qx.push_back(q_kernel_poly_second(alpha, n, x));
        qz.push_back(q_kernel_poly_second(alpha, n, z));
      }
      for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
          Rational lhs = mom.expect(qx[n] * qz[m]);
          Rational rhs = (n == m) ? q_kernel(alpha, n, x, z).value : q(0);
          ++checks;
          if (lhs != rhs)
            return {false, "mismatch at |n|=" + std::to_string(n) +
                               ", |m|=" + std::to_string(m)};
        }
    }
  }
  return {true, std::to_string(checks) + " exact identities, tolerance zero"};
}

// ---- criterion 2 ----
Outcome criterion_triangle() {
  for (Rational t : {q(1), q(2), q(1, 2), q(7, 3), q(11)}) {
    CoeffTriangle<Rational> tri(t, 12);
    if (tri.identity_defect() != q(0))
      return {false, "A*C != I at theta=" + to_string(t)};
  }
  return {true, "A*C = I through degree 12 for 5 rational theta, exact"};
}

// ---- criterion 3 ----
Outcome criterion_maineq() {
  Rational a(1), b(2);
  Rational theta = a + b;
  DirichletParams<Rational> alpha({a, b});
  MomentCache mom(alpha);
  auto r_moment = [&](int n, const MultiIndex& e) {
    Rational s(0), coef(1);
    for (int j = 0; j <= n; ++j) {
      if (j > 0)
        coef *= (Rational(-n) + Rational(j - 1)) *
                (Rational(n) + theta - 1 + Rational(j - 1)) / ((b + Rational(j - 1)) * Rational(j));
      s += coef * mom(MultiIndex{e[0], e[1] + j});
    }
    return s;
  };
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= 5; ++k) {
        Rational acc(0);
        for (const MultiIndex& l : compositions(2, m)) {
          Rational w = multinomial_as<Rational>(l) * rising(theta, m) /
                       (rising(a, l[0]) * rising(b, l[1]));
          acc += w * r_moment(n, l) * r_moment(k, l);
        }
        Rational expect = (n == k) ? falling(q(m), n) / rising(theta + q(m), n) / zeta(a, b, n)
                                   : q(0);
        if (acc != expect)
          return {false, "mismatch at m=" + std::to_string(m) + " n=" + std::to_string(n) +
                             " k=" + std::to_string(k)};
      }
  return {true, "E[xi_m Qo_n Qo_k] = delta_nk m_[n]/(theta+m)_(n), m <= 4, exact"};
}

// ---- criterion 4 ----
Outcome criterion_hahn_exact() {
  std::vector<std::vector<Rational>> alpha_sets = {{q(1), q(2)}, {q(1), q(1), q(2)}};
  for (const auto& as : alpha_sets) {
    DirichletParams<Rational> alpha(as);
    const int d = alpha.dim();
    for (int N = 1; N <= 4; ++N) {
      HahnContext<Rational> ctx(alpha, N);
      const auto& supp = compositions(d, N);
      const int S = static_cast<int>(supp.size());
      // kernel table
      std::vector<std::vector<std::vector<Rational>>> H(
          N + 1, std::vector<std::vector<Rational>>(S, std::vector<Rational>(S)));
      for (int n = 0; n <= N; ++n)
        for (int i = 0; i < S; ++i)
          for (int j = 0; j < S; ++j)
            H[n][i][j] = h_kernel(ctx, n, supp[i], supp[j]).value;
      std::vector<Rational> w(S);
      for (int i = 0; i < S; ++i) w[i] = dm_pmf(alpha, supp[i]);

      // posterior-mixture identity
      for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j) {
          std::vector<Rational> ar = alpha.alpha, asft = alpha.alpha;
          for (int c = 0; c < d; ++c) {
            ar[c] += Rational(supp[i][c]);
            asft[c] += Rational(supp[j][c]);
          }
          DirichletParams<Rational> pr(ar), ps(asft);
          for (int n = 0; n <= N; ++n) {
            Rational mixture(0);
            for (int m = 0; m <= n; ++m) {
              Rational xim(0);
              for (const auto& l : compositions(d, m)) {
                Rational ww = multinomial_as<Rational>(l) * rising(alpha.total, m);
                for (int c = 0; c < d; ++c) ww /= rising(alpha.alpha[c], l[c]);
                xim += ww * dirichlet_moment(pr, l) * dirichlet_moment(ps, l);
              }
              mixture += coeff_a(alpha.total, n, m) * xim;
            }
            Rational lhs = rising(alpha.total + q(N), n) / falling(q(N), n) * mixture;
            if (lhs != H[n][i][j])
              return {false, "posterior mixture broke at d=" + std::to_string(d) +
                                 " N=" + std::to_string(N)};
          }
        }

      // exhaustive orthogonality
      for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
          for (int n = 0; n <= N; ++n)
            for (int m = 0; m <= N; ++m) {
              Rational acc(0);
              for (int s = 0; s < S; ++s) acc += w[s] * H[n][i][s] * H[m][j][s];
              Rational expect = (n == m) ? H[n][i][j] : q(0);
              if (acc != expect)
                return {false, "orthogonality broke at d=" + std::to_string(d) +
                                   " N=" + std::to_string(N)};
            }
    }
  }
  return {true, "posterior mixture + exhaustive DM orthogonality, d=2,3, N<=4, exact"};
}

// ---- criterion 5 ----
Outcome criterion_gasper() {
  Rational a(1), b(2);
  for (int N = 1; N <= 5; ++N)
    for (int n = 0; n <= N; ++n)
      for (int r = 0; r <= N; ++r)
        for (int s = 0; s <= N; ++s)
          if (gasper_product_double_sum(a, b, n, r, s, N) !=
              univariate_hahn(a, b, n, r, N) * univariate_hahn(a, b, n, s, N))
            return {false, "d=2 product formula broke at N=" + std::to_string(N)};

  std::vector<std::vector<Rational>> alpha_sets = {{q(1), q(2)}, {q(1), q(1), q(2)}};
  for (const auto& as : alpha_sets) {
    DirichletParams<Rational> alpha(as);
    const int d = alpha.dim();
    for (int N = 1; N <= 5; ++N) {
      HahnContext<Rational> ctx(alpha, N);
      for (const auto& r : compositions(d, N))
        for (const auto& s : compositions(d, N))
          for (int n = 0; n <= N; ++n)
            if (h_kernel(ctx, n, r, s).value != h_kernel_chi_route(ctx, n, r, s).value)
              return {false, "chi route broke at d=" + std::to_string(d) +
                                 " N=" + std::to_string(N)};
    }
  }
  return {true, "chi and xi representations agree, d=2,3, N<=5, exact"};
}

// ---- criterion 6 ----
Outcome criterion_zchain() {
  DirichletParams<Rational> alpha({q(2), q(2), q(1)});
  const std::uint64_t draws = 1000000;
  const std::uint64_t seed = 6001;
  std::mt19937_64 gen(99);
  int failures = 0;
  std::string failed_name;
  double worst = 0.0;
  std::vector<McCheck> rerun_pool;
  for (int pair = 0; pair < 5; ++pair) {
    auto x = rational_point(3, gen);
    auto y = rational_point(3, gen);
    auto m = verify_z_moments(alpha, x, y, 3, draws, seed + pair);
    auto k = verify_kernel_representation(alpha, x, y, 4, draws, seed + 100 + pair);
    std::vector<McCheck> all = m;
    all.insert(all.end(), k.begin(), k.end());
    for (const auto& c : all) {
      worst = std::max(worst, std::abs(c.z_score));
      if (std::abs(c.z_score) > 3.0) {
        ++failures;
        failed_name = "pair " + std::to_string(pair) + " " + c.name;
        // re-run rule: the single offending check repeats on a shifted seed
        auto rm = verify_z_moments(alpha, x, y, 3, draws, seed + pair + 7700);
        auto rk = verify_kernel_representation(alpha, x, y, 4, draws,
                                               seed + 100 + pair + 7700);
        std::vector<McCheck> rall = rm;
        rall.insert(rall.end(), rk.begin(), rk.end());
        for (const auto& rc : rall)
          if (rc.name == c.name && std::abs(rc.z_score) > 3.0)
            return {false, "re-run of " + failed_name + " still exceeds |z|=3"};
      }
    }
  }
  if (failures > 1)
    return {false, std::to_string(failures) + " checks exceeded |z|=3 (allowed: 1)"};
  char buf[128];
  std::snprintf(buf, sizeof(buf), "40 z-scores at 10^6 draws, worst |z|=%.2f, re-runs used: %d",
                worst, failures);
  return {true, buf};
}

// ---- criterion 7 ----
Outcome criterion_koornwinder() {
  const double a = 1.0, b = 2.0;
  const std::uint64_t seed = 7001;
  RngStream rng(seed);
  double worst = 0.0;
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double y : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      std::vector<RunningStat> stats(7);
      for (int i = 0; i < 100000; ++i) {
        double z = sample_koornwinder(a, b, x, y, rng);
        auto rz = univariate_r_table(a, b, 6, z);
        for (int n = 0; n <= 6; ++n) stats[n].add(rz[n]);
      }
      auto rx = univariate_r_table(a, b, 6, x);
      auto ry = univariate_r_table(a, b, 6, y);
      for (int n = 1; n <= 6; ++n) {
        double z = stats[n].z_score(rx[n] * ry[n]);
        worst = std::max(worst, std::abs(z));
        if (std::abs(z) > 3.0) {
          char buf[128];
          std::snprintf(buf, sizeof(buf), "|z|=%.2f at x=%.1f y=%.1f n=%d", std::abs(z), x,
                        y, n);
          return {false, buf};
        }
      }
    }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "150 cells at 10^5 draws, worst |z|=%.2f", worst);
  return {true, buf};
}

// ---- criterion 8 ----
Outcome criterion_pd_moments() {
  RngStream rng(8008);
  RunningStat f;
  for (int i = 0; i < 100000; ++i) {
    auto w = sample_pd(1.0, 128, rng);
    double f2 = 0.0;
    for (double wi : w.weights) f2 += wi * wi;
    f.add(f2);
  }
  char buf[256];
  bool mean_ok = std::abs(f.mean() - 0.5) <= 0.01;
  // The pinned variance target is 1/12. The closed-form value for PD(theta)
  // is Var[sum w^2] = 2 theta/((theta+3)(theta+2)(theta+1)^2) = 1/24 at
  // theta = 1 (rederivable from the partition moment formulas), so a correct
  // sampler concentrates at 1/24 and this check is expected to stay red; the
  // target is kept as pinned rather than loosened to fit.
  bool var_ok = std::abs(f.variance() - 1.0 / 12.0) <= 0.005;
  std::snprintf(buf, sizeof(buf),
                "E=%.4f (target 0.5+-0.01 %s), Var=%.4f (pinned target 1/12+-0.005 %s; "
                "closed-form PD(1) value is 1/24=%.4f)",
                f.mean(), mean_ok ? "ok" : "FAIL", f.variance(), var_ok ? "ok" : "FAIL",
                1.0 / 24.0);
  return {mean_ok && var_ok, buf};
}

// ---- criterion 9 ----
Outcome criterion_pds_roundtrip() {
  Rational theta(2);
  for (int l = 0; l <= 8; ++l) {
    DegreeSequence<Rational> pmf;
    pmf.provenance = "delta";
    pmf.values.assign(9, q(0));
    pmf.values[l] = q(1);
    auto rho = pmf_to_jpds(theta, pmf);
    if (jpds_to_pmf(theta, rho, 8).pmf.values != pmf.values)
      return {false, "pmf round trip broke at delta_" + std::to_string(l)};
  }

  DegreeSequence<Rational> wf;
  wf.provenance = "wright-fisher theta=2 t=1";
  for (int n = 0; n <= 40; ++n)
    wf.values.push_back(rational_from_double(std::exp(-0.5 * n * (n + 1.0))));
  auto h = jpds_to_hpds(theta, 4, wf);
  DirichletParams<Rational> a11({q(1), q(1)});
  if (scan_hpds(a11, 4, h).verdict != Verdict::kCertifiedPositive)
    return {false, "WF image failed the exhaustive HPDS certificate at N=4"};

  DegreeSequence<Rational> pmf{{q(1, 8), q(1, 2), q(1, 4), q(1, 8)}, "mix"};
  auto rho = pmf_to_jpds(theta, pmf);
  std::mt19937_64 gen(55);
  std::vector<DirichletParams<Rational>> alphas = {
      DirichletParams<Rational>({q(1), q(1)}),
      DirichletParams<Rational>({q(1, 2), q(1), q(1, 2)})};
  for (const auto& alpha : alphas)
    for (int trial = 0; trial < 3; ++trial) {
      auto x = rational_point(alpha.dim(), gen);
      auto y = rational_point(alpha.dim(), gen);
      Rational lhs(0), rhs(0);
      for (int m = 0; m <= pmf.max_degree(); ++m) lhs += pmf.values[m] * xi(alpha, m, x, y);
      for (int n = 0; n <= rho.max_degree(); ++n)
        rhs += rho.values[n] * q_kernel(alpha, n, x, y).value;
      if (lhs != rhs)
        return {false, "dimension independence broke at d=" + std::to_string(alpha.dim())};
    }
  return {true,
          "round trip <=8 exact; WF HPDS certificate at N=4; series rearrangement d=2,3"};
}

// ---- criterion 10 ----
Outcome criterion_counterexample() {
  auto rep = counterexample_check(5.0, 2.0, 4, 1e-3);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "first sign violation at derivative order %d (s=%.2f, value %.3g)",
                rep.violation_order, rep.location, rep.value);
  return {rep.violation_order >= 1 && rep.violation_order <= 4, buf};
}

// ---- criterion 11 ----
Outcome criterion_bernstein() {
  DegreeSequence<double> wf;
  wf.provenance = "wright-fisher theta=2 t=1";
  for (int n = 0; n <= 30; ++n) wf.values.push_back(std::exp(-0.5 * n * (n + 1.0)));

  auto b64 = bernstein_approx(1.0, 1.0, wf, 64, 64);
  for (int n = 0; n <= 3; ++n)
    if (std::abs(b64.values[n] - wf.values[n]) > 5e-2) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "|rho^64_%d - rho_%d| = %.4f > 5e-2", n, n,
                    std::abs(b64.values[n] - wf.values[n]));
      return {false, buf};
    }

  DirichletParams<Rational> a11({q(1), q(1)});
  for (int N : {16, 64}) {
    auto bn = N == 64 ? b64 : bernstein_approx(1.0, 1.0, wf, N, N);
    DegreeSequence<Rational> exactseq;
    exactseq.provenance = bn.provenance;
    for (double v : bn.values) exactseq.values.push_back(rational_from_double(v));
    if (scan_hpds(a11, N, exactseq).verdict != Verdict::kCertifiedPositive)
      return {false, "rho^N failed its exact HPDS scan at N=" + std::to_string(N)};
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "|rho^64_n - rho_n| <= 5e-2 for n<=3; HPDS certified at N=16,64");
  return {true, buf};
}

// ---- criterion 12 ----
Outcome criterion_copula() {
  DirichletParams<Rational> alpha({q(1), q(1)});
  CopulaSpec delta2 = CopulaSpec::degenerate(DirichletParams<double>({1, 1}), 2);
  RngStream rng(1212);
  std::vector<CopulaDraw> batch;
  batch.reserve(100000);
  for (int i = 0; i < 100000; ++i) batch.push_back(sample_pair(delta2, rng));
  auto est = estimate_canonical_correlation(batch, alpha, 1);
  double z_delta = (est.value - 0.5) / est.std_error;

  CopulaSpec indep = CopulaSpec::degenerate(DirichletParams<double>({1, 1}), 0);
  RngStream rng2(1213);
  std::vector<CopulaDraw> batch2;
  batch2.reserve(100000);
  for (int i = 0; i < 100000; ++i) batch2.push_back(sample_pair(indep, rng2));
  auto est2 = estimate_canonical_correlation(batch2, alpha, 1);
  double z_indep = est2.value / est2.std_error;

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "delta_2: rho_1=%.4f (target 0.5, z=%.2f); independence: rho_1=%.4f (z=%.2f)",
                est.value, z_delta, est2.value, z_indep);
  return {std::abs(z_delta) <= 3.0 && std::abs(z_indep) <= 3.0, buf};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"01 exact-kernel-orthogonality", criterion_orthogonality},
      {"02 triangle-inversion", criterion_triangle},
      {"03 maineq-moments", criterion_maineq},
      {"04 hahn-exactness", criterion_hahn_exact},
      {"05 gasper-product-formula", criterion_gasper},
      {"06 z-chain-representation", criterion_zchain},
      {"07 koornwinder-sampler", criterion_koornwinder},
      {"08 pd-moments", criterion_pd_moments},
      {"09 pds-roundtrip-positivity", criterion_pds_roundtrip},
      {"10 counterexample", criterion_counterexample},
      {"11 bernstein-approximation", criterion_bernstein},
      {"12 copula-spectral", criterion_copula},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out = c.run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.1fs) %s\n", out.pass ? "PASS" : "FAIL", c.name, secs,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  if (failed) std::printf("%d criterion/criteria FAILED\n", failed);
  return failed == 0 ? 0 : 1;
}
