#pragma once

#include <cmath>
#include <vector>

namespace simplexkern {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double eps = 1e-15;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < eps) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

// Same rule mapped to [a,b].
inline QuadratureRule gauss_legendre_on(double a, double b, int n) {
  QuadratureRule rule = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (b - a) * rule.nodes[i] + 0.5 * (a + b);
    rule.weights[i] *= 0.5 * (b - a);
  }
  return rule;
}

template <class Fn>
double integrate(const QuadratureRule& rule, Fn&& f) {
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

}  // namespace simplexkern
