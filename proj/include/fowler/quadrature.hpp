#pragma once

#include <span>
#include <vector>

namespace fowler {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Cached n-point rule; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

/// \int_a^b f with the given rule on a single panel.
template <class F>
double integrate_panel(F&& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
  return half * sum;
}

/// Composite rule with `panels` equal panels on [a, b].
template <class F>
double integrate_composite(F&& f, double a, double b, int panels, const GaussRule& rule) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) sum += integrate_panel(f, a + p * h, a + (p + 1) * h, rule);
  return sum;
}

/// Lagrange basis weights at x for the given nodes.
void lagrange_weights(std::span<const double> nodes, double x, std::span<double> out);

/// Fornberg finite-difference weights for the `order`-th derivative at z.
std::vector<double> fornberg_weights(double z, std::span<const double> nodes, int order);

}  // namespace fowler
