#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "simplexkern/dist.hpp"
#include "simplexkern/hahn.hpp"
#include "simplexkern/jacobi.hpp"
#include "simplexkern/quadrature.hpp"

namespace simplexkern {

// rho_0, rho_1, ... up to a truncation degree, with a provenance note that
// travels into reports and serialized artifacts.
template <class T>
struct DegreeSequence {
  std::vector<T> values;
  std::string provenance;

  int max_degree() const { return static_cast<int>(values.size()) - 1; }
};

enum class Verdict { kCertifiedPositive, kGridPositive, kViolated, kInconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kCertifiedPositive: return "certified-positive";
    case Verdict::kGridPositive: return "grid-positive";
    case Verdict::kViolated: return "violated";
    default: return "inconclusive";
  }
}

struct PositivityReport {
  Verdict verdict = Verdict::kInconclusive;
  std::string witness;      // offending point, when violated
  double witness_value = 0.0;
  int truncation = 0;
  double tail_bound = -1.0;  // negative when no bound is available
};

template <class T>
struct SeriesValue {
  T value;
  T last_term;  // magnitude diagnostic for the truncation
};

// p(x,y) = sum_{n <= truncation} rho_n Q_n(x,y). The d=2 path goes through
// the zeta R R product with recurrence tables, which stays stable at high
// degree; other dimensions use the xi triangle directly.
template <class T>
SeriesValue<T> p_rho(const DirichletParams<T>& alpha, const DegreeSequence<T>& rho,
                     const std::vector<T>& x, const std::vector<T>& y, int truncation) {
  if (truncation > rho.max_degree())
    throw std::invalid_argument("p_rho: truncation exceeds the sequence length");
  T acc(0), last(0);
  if (alpha.dim() == 2) {
    const T a = alpha.alpha[0], b = alpha.alpha[1];
    auto rx = univariate_r_table(a, b, truncation, x[0]);
    auto ry = univariate_r_table(a, b, truncation, y[0]);
    for (int n = 0; n <= truncation; ++n) {
      last = rho.values[n] * zeta(a, b, n) * rx[n] * ry[n];
      acc += last;
    }
  } else {
    for (int n = 0; n <= truncation; ++n) {
      last = rho.values[n] * q_kernel(alpha, n, x, y).value;
      acc += last;
    }
  }
  if (last < T(0)) last = -last;
  return {acc, last};
}

// Barycentric lattice with the given resolution plus all vertices and edge
// midpoints.
template <class T>
std::vector<std::vector<T>> simplex_grid(int d, int resolution) {
  std::vector<std::vector<T>> pts;
  for (const MultiIndex& c : enumerate_compositions(d, resolution)) {
    std::vector<T> p(d);
    for (int i = 0; i < d; ++i) p[i] = T(c[i]) / T(resolution);
    pts.push_back(std::move(p));
  }
  auto push_unique = [&](std::vector<T> p) {
    for (const auto& q : pts)
      if (q == p) return;
    pts.push_back(std::move(p));
  };
  for (int i = 0; i < d; ++i) {
    std::vector<T> v(d, T(0));
    v[i] = T(1);
    push_unique(v);
    for (int j = i + 1; j < d; ++j) {
      std::vector<T> m(d, T(0));
      m[i] = T(1) / T(2);
      m[j] = T(1) / T(2);
      push_unique(m);
    }
  }
  return pts;
}

namespace detail {
inline bool negative(const Rational& v) { return v < Rational(0); }
inline bool negative(double v) { return v < -1e-9; }

template <class T>
std::string point_label(const std::vector<T>& x) {
  std::string s = "(";
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    if constexpr (scalar_traits<T>::exact)
      s += to_string(x[i]);
    else
      s += std::to_string(x[i]);
  }
  return s + ")";
}

inline std::string point_label(const MultiIndex& x) {
  std::string s = "(";
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}
}  // namespace detail

// Grid scan of the JPDS series. Grid positivity is NOT a certificate for the
// continuous simplex; the verdict says so.
template <class T>
PositivityReport scan_jpds(const DirichletParams<T>& alpha, const DegreeSequence<T>& rho,
                           int grid_resolution, int truncation) {
  PositivityReport rep;
  rep.truncation = truncation;
  auto grid = simplex_grid<T>(alpha.dim(), grid_resolution);
  for (const auto& x : grid)
    for (const auto& y : grid) {
      T v = p_rho(alpha, rho, x, y, truncation).value;
      if (detail::negative(v)) {
        rep.verdict = Verdict::kViolated;
        rep.witness = detail::point_label(x) + " x " + detail::point_label(y);
        rep.witness_value = to_double(v);
        return rep;
      }
    }
  rep.verdict = Verdict::kGridPositive;
  return rep;
}

// Exhaustive scan of the HPDS series over the full discrete support; at a
// fixed N this is finite, so the verdict is a certificate (exact flavor).
template <class T>
PositivityReport scan_hpds(const DirichletParams<T>& alpha, int N,
                           const DegreeSequence<T>& rho) {
  PositivityReport rep;
  const int nmax = std::min(N, rho.max_degree());
  rep.truncation = nmax;
  const int d = alpha.dim();
  const auto& supp = compositions(d, N);

  std::vector<std::vector<T>> kernel_cache;
  if (d == 2) {
    auto h = hahn_table(alpha.alpha[0], alpha.alpha[1], N, nmax);
    std::vector<T> u(nmax + 1);
    for (int n = 0; n <= nmax; ++n) u[n] = u_norm(alpha.alpha[0], alpha.alpha[1], N, n);
    kernel_cache.assign(supp.size(), std::vector<T>());
    for (size_t i = 0; i < supp.size(); ++i) {
      kernel_cache[i].resize(nmax + 1);
      for (int n = 0; n <= nmax; ++n) kernel_cache[i][n] = h[n][supp[i][0]];
    }
    for (size_t i = 0; i < supp.size(); ++i)
      for (size_t j = 0; j < supp.size(); ++j) {
        T acc(0);
        for (int n = 0; n <= nmax; ++n)
          acc += rho.values[n] * u[n] * kernel_cache[i][n] * kernel_cache[j][n];
        if (detail::negative(acc)) {
          rep.verdict = Verdict::kViolated;
          rep.witness = detail::point_label(supp[i]) + " x " + detail::point_label(supp[j]);
          rep.witness_value = to_double(acc);
          return rep;
        }
      }
  } else {
    HahnContext<T> ctx(alpha, N);
    for (const auto& r : supp)
      for (const auto& s : supp) {
        T acc(0);
        for (int n = 0; n <= nmax; ++n)
          acc += rho.values[n] * h_kernel(ctx, n, r, s).value;
        if (detail::negative(acc)) {
          rep.verdict = Verdict::kViolated;
          rep.witness = detail::point_label(r) + " x " + detail::point_label(s);
          rep.witness_value = to_double(acc);
          return rep;
        }
      }
  }
  rep.verdict =
      scalar_traits<T>::exact ? Verdict::kCertifiedPositive : Verdict::kGridPositive;
  return rep;
}

// rho_n = sum_{m >= n} m_[n]/(theta+m)_(n) d_m for a pmf {d_m}. Every weight
// lies in [0,1], so a truncated pmf tail bounds the truncated rho tail.
template <class T>
DegreeSequence<T> pmf_to_jpds(const T& theta, const DegreeSequence<T>& pmf,
                              double pmf_tolerance = 1e-12) {
  T total(0);
  for (const T& dm : pmf.values) {
    if (dm < T(0)) throw std::domain_error("pmf_to_jpds: negative pmf entry");
    total += dm;
  }
  if constexpr (scalar_traits<T>::exact) {
    if (total != T(1)) throw std::domain_error("pmf_to_jpds: pmf does not sum to 1");
  } else {
    if (std::abs(to_double(total) - 1.0) > pmf_tolerance)
      throw std::domain_error("pmf_to_jpds: pmf does not sum to 1");
  }
  const int mmax = pmf.max_degree();
  DegreeSequence<T> rho;
  rho.provenance = "pmf_to_jpds(" + pmf.provenance + ")";
  rho.values.resize(mmax + 1, T(0));
  for (int n = 0; n <= mmax; ++n)
    for (int m = n; m <= mmax; ++m)
      rho.values[n] += coeff_c(theta, m, n) * pmf.values[m];
  return rho;
}

template <class T>
struct PmfInversion {
  DegreeSequence<T> pmf;
  PositivityReport sign_report;        // sign pattern of the inverted entries
  std::vector<T> derivative_route;     // d=2 cross-check values
  bool converged = true;               // floating-flavor Cauchy diagnostic
};

// d_m = sum_{n >= m} a_nm rho_n (alternating series), plus the derivative
// cross-check d_m = (alpha)_(m)/(theta)_(m) p^(m)(0) at the symmetric split
// alpha = beta = theta/2. Floating flavor iterates the coefficients through
// the ratio a_{n+1,m}/a_{n,m} to stay inside double range at high degree,
// with compensated summation and a tail-growth diagnostic.
template <class T>
PmfInversion<T> jpds_to_pmf(const T& theta, const DegreeSequence<T>& rho, int max_m) {
  const int nmax = rho.max_degree();
  PmfInversion<T> out;
  out.pmf.provenance = "jpds_to_pmf(" + rho.provenance + ")";
  out.pmf.values.resize(max_m + 1, T(0));
  for (int m = 0; m <= max_m; ++m) {
    if constexpr (scalar_traits<T>::exact) {
      T acc(0);
      for (int n = m; n <= nmax; ++n)
        acc += coeff_a(theta, n, m) * rho.values[n];
      out.pmf.values[m] = acc;
    } else {
      double th = to_double(theta);
      // a_mm by interleaved multiply/divide, then the n -> n+1 ratio
      double a = (m == 0) ? 1.0 : th + 2.0 * m - 1.0;
      for (int i = 0; i < m - 1; ++i) a *= (th + m + i) / (i + 1.0);
      if (m >= 2) a /= m;  // completes (theta+m)_(m-1)/m!
      double acc = 0.0, comp = 0.0, prev_term = 0.0;
      bool growing_tail = false;
      for (int n = m; n <= nmax; ++n) {
        double term = a * to_double(rho.values[n]);
        double yv = term - comp;
        double t = acc + yv;
        comp = (t - acc) - yv;
        acc = t;
        if (n > nmax - 3 && std::abs(term) > std::abs(prev_term) &&
            std::abs(term) > 1e-12)
          growing_tail = true;
        prev_term = term;
        // (theta+m+n-1)/(theta+2n-1) is identically 1 at n = m, where both
        // factors can vanish together (theta = 1, n = 0)
        a *= -(th + 2.0 * n + 1.0) / (n + 1.0 - m) *
             ((m == n) ? 1.0 : (th + m + n - 1.0) / (th + 2.0 * n - 1.0));
      }
      if (growing_tail) out.converged = false;
      out.pmf.values[m] = T(acc);
    }
  }

  out.sign_report.truncation = nmax;
  out.sign_report.verdict = Verdict::kGridPositive;
  for (int m = 0; m <= max_m; ++m) {
    if (detail::negative(out.pmf.values[m])) {
      out.sign_report.verdict = Verdict::kViolated;
      out.sign_report.witness = "d_" + std::to_string(m);
      out.sign_report.witness_value = to_double(out.pmf.values[m]);
      break;
    }
  }

  const T half = theta / T(2);
  if constexpr (scalar_traits<T>::exact) {
    // exact derivative route: R_n^(m)(0) = (-1)^m sum_{j>=m} c_nj j_[m]
    for (int m = 0; m <= max_m; ++m) {
      T acc(0);
      for (int n = 0; n <= nmax; ++n) {
        T coef(1), deriv(0);
        for (int j = 0; j <= n; ++j) {
          if (j > 0)
            coef *= (T(-n) + T(j - 1)) * (T(n) + theta - T(1) + T(j - 1)) /
                    ((half + T(j - 1)) * T(j));
          if (j >= m) deriv += coef * falling(T(j), m);
        }
        if (m % 2 == 1) deriv = -deriv;
        acc += rho.values[n] * zeta(half, half, n) * deriv;
      }
      out.derivative_route.push_back(rising(half, m) / rising(theta, m) /
                                     factorial_as<T>(m) * acc);
    }
  } else {
    // floating derivative route: forward differences of the stable d=2 series
    DirichletParams<T> split({half, half});
    auto p1 = [&](T xv) {
      std::vector<T> x = {xv, T(1) - xv};
      std::vector<T> one = {T(1), T(0)};
      return p_rho(split, rho, x, one, nmax).value;
    };
    const double h = 2e-3;
    for (int m = 0; m <= max_m; ++m) {
      double acc = 0.0;
      for (int i = 0; i <= m; ++i) {
        double sign = ((m - i) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binomial(m, i).convert_to<double>() * to_double(p1(T(i * h)));
      }
      acc /= std::pow(h, m);
      out.derivative_route.push_back(rising(half, m) / rising(theta, m) /
                                     factorial_as<T>(m) * T(acc));
    }
  }
  return out;
}

// rho_n -> rho_n N_[n]/(theta+N)_(n), zero beyond N.
template <class T>
DegreeSequence<T> jpds_to_hpds(const T& theta, int N, const DegreeSequence<T>& rho) {
  DegreeSequence<T> out;
  out.provenance = "jpds_to_hpds(" + rho.provenance + ", N=" + std::to_string(N) + ")";
  out.values.resize(rho.values.size(), T(0));
  for (int n = 0; n <= rho.max_degree() && n <= N; ++n)
    out.values[n] = rho.values[n] * falling(T(N), n) / rising(theta + T(N), n);
  return out;
}

// Bernstein-type approximation of a JPDS:
//   rho^N_n = N_[n]/(theta+N)_(n) sum_{i,j} DM(i;N) DM(j;N) p_rho(i/N, j/N) H_n(i,j)
template <class T>
DegreeSequence<T> bernstein_approx(const T& a, const T& b, const DegreeSequence<T>& rho,
                                   int N, int nmax) {
  if (nmax > N) throw std::invalid_argument("bernstein_approx: nmax must be <= N");
  DirichletParams<T> alpha({a, b});
  const T theta = a + b;
  const int trunc = rho.max_degree();

  std::vector<T> dm(N + 1);
  for (int i = 0; i <= N; ++i) dm[i] = dm_pmf(alpha, {i, N - i});
  auto h = hahn_table(a, b, N, nmax);
  std::vector<T> u(nmax + 1);
  for (int n = 0; n <= nmax; ++n) u[n] = u_norm(a, b, N, n);

  std::vector<std::vector<T>> rtab(N + 1);
  for (int i = 0; i <= N; ++i) rtab[i] = univariate_r_table(a, b, trunc, T(i) / T(N));
  std::vector<T> ztab(trunc + 1);
  for (int n = 0; n <= trunc; ++n) ztab[n] = zeta(a, b, n);

  DegreeSequence<T> out;
  out.provenance = "bernstein_approx(" + rho.provenance + ", N=" + std::to_string(N) + ")";
  out.values.resize(nmax + 1, T(0));
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      T p(0);
      for (int n = 0; n <= trunc; ++n)
        p += rho.values[n] * ztab[n] * rtab[i][n] * rtab[j][n];
      T w = dm[i] * dm[j] * p;
      for (int n = 0; n <= nmax; ++n)
        out.values[n] += w * u[n] * h[n][i] * h[n][j];
    }
  for (int n = 0; n <= nmax; ++n)
    out.values[n] *= falling(T(N), n) / rising(theta + T(N), n);
  return out;
}

template <class T>
struct TruncatedPmfReport {
  DegreeSequence<T> rho;
  PositivityReport hpds;
  PositivityReport jpds;
};

// A pmf supported on {0..N} maps to a sequence that is both HPDS at N
// (exhaustively certified) and JPDS (grid-scanned), checked at the canonical
// d=2 split alpha = beta = theta/2.
template <class T>
TruncatedPmfReport<T> truncated_pmf_pds(const T& theta, const DegreeSequence<T>& pmf,
                                        int N, int grid_resolution = 20) {
  if (pmf.max_degree() > N)
    throw std::domain_error("truncated_pmf_pds: pmf support exceeds N");
  TruncatedPmfReport<T> out;
  out.rho = pmf_to_jpds(theta, pmf);
  out.rho.values.resize(N + 1, T(0));
  DirichletParams<T> split({theta / T(2), theta / T(2)});
  out.hpds = scan_hpds(split, N, out.rho);
  out.jpds = scan_jpds(split, out.rho, grid_resolution, out.rho.max_degree());
  return out;
}

// Positivity-preserving parameter shift (a,b) -> (a+mu, b-mu):
//   rho_n -> rho_n zeta^{a+mu,b-mu}_n / zeta^{a,b}_n
template <class T>
DegreeSequence<T> shift_parameters(const T& a, const T& b, const T& mu,
                                   const DegreeSequence<T>& rho) {
  if (mu < T(0) || !(b - mu > T(0)))
    throw std::domain_error("shift_parameters: need 0 <= mu < beta");
  DegreeSequence<T> out;
  out.provenance = "shift_parameters(" + rho.provenance + ")";
  out.values.resize(rho.values.size());
  for (int n = 0; n <= rho.max_degree(); ++n)
    out.values[n] = rho.values[n] * zeta(a + mu, b - mu, n) / zeta(a, b, n);
  return out;
}

struct CounterexampleReport {
  int violation_order = -1;  // first derivative order with a sign violation
  double location = 0.0;
  double value = 0.0;
};

// q(s) = E[g(Ws)] for W ~ Beta(theta/2, theta/2) and g completely monotone
// (g = exp(-lambda .)). If the Gasper extreme-point sequences mapped to
// pmfs, q would be a probability generating function with all derivatives
// nonnegative; the alternating signs of q's derivatives refute that.
inline CounterexampleReport counterexample_check(double lambda, double theta,
                                                 int max_order = 6, double fd_step = 1e-3) {
  const double a = theta / 2.0, b = theta / 2.0;
  auto rule = gauss_legendre_on(0.0, 1.0, 64);
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  auto q = [&](double s) {
    return integrate(rule, [&](double w) {
      double dens = std::exp((a - 1.0) * std::log(w) + (b - 1.0) * std::log(1.0 - w) - lbeta);
      return std::exp(-lambda * w * s) * dens;
    });
  };
  // central finite differences of order k
  auto deriv = [&](int k, double s) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) {
      double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binomial(k, i).convert_to<double>() * q(s + (i - k / 2.0) * fd_step);
    }
    return acc / std::pow(fd_step, k);
  };
  CounterexampleReport rep;
  for (int k = 1; k <= max_order; ++k) {
    for (double s = 0.1; s < 0.95; s += 0.1) {
      double v = deriv(k, s);
      if (v < -1e-6) {
        rep.violation_order = k;
        rep.location = s;
        rep.value = v;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace simplexkern
