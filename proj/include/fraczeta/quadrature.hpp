#ifndef FRACZETA_QUADRATURE_HPP
#define FRACZETA_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace fraczeta {

/// Nodes and weights of a fixed quadrature rule on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Composite 16-point Gauss–Legendre on [a, b] with `panels` equal panels.
inline QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  QuadratureRule rule;
  rule.nodes.reserve(panels * 16);
  rule.weights.reserve(panels * 16);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    const double half = 0.5 * h;
    // boost stores the nonnegative half of a symmetric rule (16 is even: no 0 node)
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      rule.nodes.push_back(mid - half * abscissa[i]);
      rule.weights.push_back(half * weight[i]);
      rule.nodes.push_back(mid + half * abscissa[i]);
      rule.weights.push_back(half * weight[i]);
    }
  }
  return rule;
}

/// Panel count so that each panel is at most `max_width` wide.
inline std::size_t panels_for(double a, double b, double max_width) {
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / max_width));
  return n == 0 ? 1 : n;
}

}  // namespace fraczeta

#endif  // FRACZETA_QUADRATURE_HPP
