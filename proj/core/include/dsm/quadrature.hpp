#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace dsm {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (n >= 1), nodes ascending.
GaussRule gauss_legendre(int n);

/// Composite integral of fn over [lo, hi], split at every breakpoint that lies
/// strictly inside the interval, with `rule` applied on each piece.
template <typename Fn>
double integrate(Fn&& fn, double lo, double hi, const GaussRule& rule,
                 std::span<const double> breakpoints = {}) {
  double cuts[16];
  std::size_t count = 0;
  cuts[count++] = lo;
  for (double b : breakpoints) {
    if (b > lo && b < hi && count < 15) cuts[count++] = b;
  }
  cuts[count++] = hi;
  std::sort(cuts + 1, cuts + count - 1);

  double total = 0.0;
  for (std::size_t p = 0; p + 1 < count; ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    if (half <= 0.0) continue;
    double piece = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      piece += rule.weights[k] * fn(mid + half * rule.nodes[k]);
    }
    total += half * piece;
  }
  return total;
}

}  // namespace dsm
