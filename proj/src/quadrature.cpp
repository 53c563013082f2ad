#include <cmath>

#include "gradfem/fem.hpp"

namespace gradfem {

const TriangleRule& triangle_rule() {
  // Symmetric 6-point rule (orbits of (a, a, 1-2a)), degree 4.
  static const TriangleRule rule = [] {
    constexpr double a1 = 0.44594849091596488632;
    constexpr double w1 = 0.22338158967801146570;
    constexpr double a2 = 0.09157621350977074346;
    constexpr double w2 = 0.10995174365532186764;
    TriangleRule r;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const double b = 1.0 - 2.0 * a;
      r.points.push_back({b, a, a});
      r.points.push_back({a, b, a});
      r.points.push_back({a, a, b});
      for (int k = 0; k < 3; ++k) r.weights.push_back(0.5 * w);
    }
    return r;
  }();
  return rule;
}

const SegmentRule& segment_rule() {
  static const SegmentRule rule = [] {
    const double h = 0.5 * std::sqrt(0.6);
    return SegmentRule{{0.5 - h, 0.5, 0.5 + h}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
  }();
  return rule;
}

}  // namespace gradfem
