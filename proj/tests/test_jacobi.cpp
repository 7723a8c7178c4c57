#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "simplexkern/jacobi.hpp"
#include "simplexkern/polynomial.hpp"

using namespace simplexkern;

namespace {

Rational q(long p, long den = 1) { return Rational(p, den); }

std::vector<Rational> rational_simplex_point(int d, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> pick(1, 9);
  std::vector<Rational> x(d);
  Rational tot(0);
  for (int i = 0; i < d; ++i) {
    x[i] = Rational(pick(gen));
    tot += x[i];
  }
  for (auto& xi : x) xi /= tot;
  return x;
}

// E[p(X) | AX = x'] for block-grouped conditioning: within each block the
// rescaled coordinates are an independent Dirichlet with the block's alphas.
Rational conditional_block_moment(const DirichletParams<Rational>& alpha,
                                  const std::vector<std::vector<int>>& blocks,
                                  const std::vector<Rational>& x_grouped,
                                  const Polynomial<Rational>& p) {
  Rational out(0);
  for (const auto& [e, c] : p.terms()) {
    Rational term = c;
    for (size_t b = 0; b < blocks.size(); ++b) {
      std::vector<Rational> block_alpha;
      MultiIndex block_exp;
      int total_exp = 0;
      for (int j : blocks[b]) {
        block_alpha.push_back(alpha.alpha[j - 1]);
        block_exp.push_back(e[j - 1]);
        total_exp += e[j - 1];
      }
      term *= rational_pow(x_grouped[b], total_exp);
      if (block_alpha.size() > 1)
        term *= dirichlet_moment(DirichletParams<Rational>(block_alpha), block_exp);
    }
    out += term;
  }
  return out;
}

}  // namespace

TEST_CASE("coefficient a: particular cases from the degree-1 and degree-2 kernels") {
  Rational t(7, 2);
  CHECK(coeff_a(t, 0, 0) == q(1));
  CHECK(coeff_a(t, 1, 1) == t + 1);
  CHECK(coeff_a(t, 1, 0) == -(t + 1));
  CHECK(coeff_a(t, 2, 2) == (t + 3) * (t + 2) / 2);
  CHECK(coeff_a(t, 2, 1) == -(t + 3) * (t + 1));
  CHECK(coeff_a(t, 2, 0) == (t + 3) * t / 2);
  CHECK_THROWS_AS(coeff_a(q(0), 1, 0), std::domain_error);
  CHECK_THROWS_AS(coeff_a(q(-1), 1, 0), std::domain_error);
}

TEST_CASE("coefficient c") {
  Rational t(3, 2);
  CHECK(coeff_c(t, 5, 0) == q(1));
  for (int m = 0; m <= 6; ++m)
    CHECK(coeff_c(t, m, m) == Rational(factorial(m)) / rising(t + Rational(m), m));
}

TEST_CASE("triangle inversion is exact") {
  for (Rational t : {q(1), q(2), q(1, 2), q(7, 3), q(11)}) {
    CoeffTriangle<Rational> tri(t, 8);
    CHECK(tri.identity_defect() == q(0));
  }
}

TEST_CASE("xi values") {
  DirichletParams<Rational> a11({q(1), q(1)});
  std::vector<Rational> e1 = {q(1), q(0)};
  std::vector<Rational> mid = {q(1, 2), q(1, 2)};
  CHECK(xi(a11, 0, mid, e1) == q(1));
  // xi_m(e_j, e_k) = (|alpha|)_(m)/(alpha_j)_(m) delta_jk
  CHECK(xi(a11, 2, e1, e1) == q(3));
  std::vector<Rational> e2 = {q(0), q(1)};
  CHECK(xi(a11, 2, e1, e2) == q(0));
  CHECK(xi(a11, 1, mid, mid) == q(1));
}

TEST_CASE("xi is nonnegative and has unit Dirichlet mean") {
  std::mt19937_64 gen(31);
  DirichletParams<Rational> alpha({q(1), q(1, 2), q(2)});
  for (int trial = 0; trial < 10; ++trial) {
    auto x = rational_simplex_point(3, gen);
    auto y = rational_simplex_point(3, gen);
    for (int m = 0; m <= 4; ++m) {
      CHECK(xi(alpha, m, x, y) >= q(0));
      // E_Y[xi_m(x, Y)] = 1 exactly (row sums of the transition kernel)
      CHECK(dirichlet_expectation(alpha, xi_poly_second(alpha, m, x)) == q(1));
    }
  }
}

TEST_CASE("q_kernel basic values") {
  DirichletParams<Rational> a11({q(1), q(1)});
  std::vector<Rational> mid = {q(1, 2), q(1, 2)};
  CHECK(q_kernel(a11, 0, mid, mid).value == q(1));
  CHECK(q_kernel(a11, 1, mid, mid).value == q(0));
}

TEST_CASE("d=2 kernel equals zeta_n R_n(x) R_n(y) exactly") {
  std::mt19937_64 gen(77);
  for (auto [an, bn] : {std::pair<long, long>{1, 1}, {1, 2}, {3, 2}}) {
    Rational a(an), b(bn);
    DirichletParams<Rational> alpha({a, b});
    for (int trial = 0; trial < 4; ++trial) {
      auto x = rational_simplex_point(2, gen);
      auto y = rational_simplex_point(2, gen);
      for (int n = 0; n <= 6; ++n)
        CHECK(q_kernel(alpha, n, x, y).value ==
              zeta(a, b, n) * univariate_r(a, b, n, x[0]) * univariate_r(a, b, n, y[0]));
    }
  }
}

TEST_CASE("reproducing property: E_Y[Q_n(x,Y) Q_m(z,Y)] = delta Q_n(x,z) exactly") {
  std::mt19937_64 gen(13);
  std::vector<DirichletParams<Rational>> alphas = {
      DirichletParams<Rational>({q(1), q(1)}),
      DirichletParams<Rational>({q(1), q(1), q(2)})};
  for (const auto& alpha : alphas) {
    int d = alpha.dim();
    for (int trial = 0; trial < 3; ++trial) {
      auto x = rational_simplex_point(d, gen);
      auto z = rational_simplex_point(d, gen);
      for (int n = 0; n <= 3; ++n) {
        auto qn = q_kernel_poly_second(alpha, n, x);
        for (int m = 0; m <= 3; ++m) {
          auto qm = q_kernel_poly_second(alpha, m, z);
          Rational lhs = dirichlet_expectation(alpha, qn * qm);
          Rational rhs = (n == m) ? q_kernel(alpha, n, x, z).value : q(0);
          CHECK(lhs == rhs);
        }
      }
    }
  }
}

TEST_CASE("maineq: E[xi_m Qo_n(X) Qo_k(Y)] = delta_nk m_[n]/(theta+m)_(n) exactly") {
  Rational a(1), b(2);
  Rational theta = a + b;
  DirichletParams<Rational> alpha({a, b});
  // E[X^e R_n(X_1)] summed from the 2F1 series of R_n, exact
  auto mom = [&](int n, const MultiIndex& e) {
    Rational s(0), coef(1);
    for (int j = 0; j <= n; ++j) {
      if (j > 0)
        coef *= (Rational(-n) + Rational(j - 1)) * (Rational(n) + theta - 1 + Rational(j - 1)) /
                ((b + Rational(j - 1)) * Rational(j));
      s += coef * dirichlet_moment(alpha, {e[0], e[1] + j});
    }
    return s;
  };
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= 5; ++k) {
        Rational acc(0);
        for (const MultiIndex& l : compositions(2, m)) {
          Rational w =
              multinomial_as<Rational>(l) * rising(theta, m) / (rising(a, l[0]) * rising(b, l[1]));
          acc += w * mom(n, l) * mom(k, l);
        }
        // orthonormal version carries zeta_n, so the R-based diagonal is c_{mn}/zeta_n
        Rational expected =
            (n == k) ? falling(q(m), n) / rising(theta + Rational(m), n) / zeta(a, b, n)
                     : q(0);
        CHECK(acc == expected);
      }
}

TEST_CASE("kernel-from-xi inversion: applying triangle c to Q recovers xi") {
  std::mt19937_64 gen(8);
  DirichletParams<Rational> alpha({q(2), q(1), q(1, 2)});
  auto x = rational_simplex_point(3, gen);
  auto y = rational_simplex_point(3, gen);
  for (int m = 0; m <= 5; ++m) {
    Rational acc(0);
    for (int n = 0; n <= m; ++n)
      acc += coeff_c(alpha.total, m, n) * q_kernel(alpha, n, x, y).value;
    CHECK(acc == xi(alpha, m, x, y));
  }
}

TEST_CASE("univariate R") {
  Rational a(3, 2), b(5, 2);
  for (int n = 0; n <= 6; ++n) {
    CHECK(univariate_r(a, b, n, q(1)) == q(1));
    Rational sign = (n % 2 == 0) ? q(1) : q(-1);
    CHECK(univariate_r(a, b, n, q(0)) == sign * rising(a, n) / rising(b, n));
  }
}

TEST_CASE("recurrence table agrees with the terminating series exactly") {
  Rational a(1), b(2);
  for (Rational x : {q(0), q(1, 3), q(1, 2), q(9, 10), q(1)}) {
    auto table = univariate_r_table(a, b, 10, x);
    for (int n = 0; n <= 10; ++n) CHECK(table[n] == univariate_r(a, b, n, x));
  }
}

TEST_CASE("zeta identities") {
  CHECK(zeta(q(1), q(2), 0) == q(1));
  // sum_m a_nm (|alpha|)_(m)/(alpha_j)_(m) = zeta_n^{alpha_j, |alpha|-alpha_j}
  DirichletParams<Rational> alpha({q(1), q(1), q(2)});
  for (int j = 1; j <= 3; ++j) {
    Rational aj = alpha.alpha[j - 1];
    for (int n = 0; n <= 6; ++n) {
      Rational acc(0);
      for (int m = 0; m <= n; ++m)
        acc += coeff_a(alpha.total, n, m) * rising(alpha.total, m) / rising(aj, m);
      CHECK(acc == zeta(aj, alpha.total - aj, n));
    }
  }
  // alternating-sum identity: sum_m C(n,m)(-1)^(n-m) (theta+m)_(n-1) = 0, n >= 1
  for (Rational t : {q(1), q(5, 2)})
    for (int n = 1; n <= 8; ++n) {
      Rational acc(0);
      for (int m = 0; m <= n; ++m) {
        Rational sign = ((n - m) % 2 == 0) ? q(1) : q(-1);
        acc += Rational(binomial(n, m)) * sign * rising(t + Rational(m), n - 1);
      }
      CHECK(acc == q(0));
    }
}

TEST_CASE("coordinate projection equals the direct kernel at e_j") {
  std::mt19937_64 gen(21);
  DirichletParams<Rational> a2({q(1), q(1)});
  DirichletParams<Rational> a3({q(1), q(1), q(2)});
  for (int trial = 0; trial < 3; ++trial) {
    auto y2 = rational_simplex_point(2, gen);
    auto y3 = rational_simplex_point(3, gen);
    CHECK(project_to_coordinate(a2, 0, y2, 1) == q(1));
    for (int n = 0; n <= 5; ++n) {
      std::vector<Rational> e1 = {q(1), q(0)};
      CHECK(q_kernel(a2, n, y2, e1).value == project_to_coordinate(a2, n, y2, 1));
      for (int j = 1; j <= 3; ++j) {
        std::vector<Rational> ej = {q(0), q(0), q(0)};
        ej[j - 1] = q(1);
        CHECK(q_kernel(a3, n, y3, ej).value == project_to_coordinate(a3, n, y3, j));
      }
    }
  }
}

TEST_CASE("aggregation of variables") {
  std::mt19937_64 gen(5);
  DirichletParams<Rational> alpha({q(1), q(1), q(2)});
  auto x = rational_simplex_point(3, gen);
  auto y = rational_simplex_point(3, gen);

  SUBCASE("trivial grouping leaves the kernel unchanged") {
    for (int n = 0; n <= 4; ++n)
      CHECK(aggregate(alpha, {{1}, {2}, {3}}, n, x, y).value ==
            q_kernel(alpha, n, x, y).value);
  }

  SUBCASE("grouping everything gives the one-point simplex kernel") {
    std::vector<Rational> one = {q(1)};
    CHECK(aggregate(alpha, {{1, 2, 3}}, 0, one, one).value == q(1));
    for (int n = 1; n <= 5; ++n)
      CHECK(aggregate(alpha, {{1, 2, 3}}, n, one, one).value == q(0));
  }

  SUBCASE("blocks {1,2},{3}: conditional moments and the zeta R R product form") {
    std::vector<std::vector<int>> blocks = {{1, 2}, {3}};
    std::vector<Rational> xg = {x[0] + x[1], x[2]};
    std::vector<Rational> yg = {y[0] + y[1], y[2]};
    Rational ap = alpha.alpha[0] + alpha.alpha[1];
    Rational bp = alpha.alpha[2];
    for (int n = 0; n <= 4; ++n) {
      Rational grouped = aggregate(alpha, blocks, n, xg, yg).value;
      // exact conditional-moment evaluation of E[Q_n(X, y) | AX = xg]
      auto p = q_kernel_poly_second(alpha, n, y);
      CHECK(conditional_block_moment(alpha, blocks, xg, p) == grouped);
      CHECK(grouped == zeta(ap, bp, n) * univariate_r(ap, bp, n, xg[0]) *
                           univariate_r(ap, bp, n, yg[0]));
    }
  }

  SUBCASE("invalid groupings are rejected") {
    std::vector<Rational> one = {q(1)};
    CHECK_THROWS_AS(aggregate(alpha, {{1, 2}, {2, 3}}, 1, one, one),
                    std::invalid_argument);
    CHECK_THROWS_AS(aggregate(alpha, {{1, 2}, std::vector<int>{}}, 1, one, one),
                    std::invalid_argument);
    CHECK_THROWS_AS(aggregate(alpha, {{1, 2}}, 1, one, one), std::invalid_argument);
  }
}
