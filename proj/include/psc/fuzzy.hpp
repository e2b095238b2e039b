#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "psc/config.hpp"
#include "psc/ranking.hpp"
#include "psc/warehouse.hpp"

namespace psc {

// Trapezoidal membership around a family's observed range: 1 inside
// [min, max], falling linearly to 0 over a shoulder of width
// delta_frac * (max - min) on each side. A collapsed range keeps a hair of
// tolerance so exact matches still score 1.
inline double membership(double value, const FamilyRange& r, double delta_frac) {
  if (value >= r.min && value <= r.max) return 1.0;
  double delta = delta_frac * (r.max - r.min);
  if (delta <= 0) delta = 1e-6 * std::max(1.0, std::abs(r.mean));
  double overshoot = value > r.max ? value - r.max : r.min - value;
  double t = overshoot / delta;
  return t >= 1.0 ? 0.0 : 1.0 - t;
}

// Small/medium/large memberships over a global feature range: triangles
// peaked at the range ends and midpoint, each a half range wide. Diagnostic
// view of where a value sits; the cascade itself gates on membership().
inline std::array<double, 3> linguistic_partition(double value, double global_min,
                                                  double global_max) {
  if (!(global_min < global_max)) throw DegenerateRange();
  double half = (global_max - global_min) / 2.0;
  auto triangle = [&](double peak) {
    return std::clamp(1.0 - std::abs(value - peak) / half, 0.0, 1.0);
  };
  return {triangle(global_min), triangle(global_min + half), triangle(global_max)};
}

// Families whose top-ranked ranges all accept the input at threshold theta.
// Returns a sorted candidate list; empty means no family fits. An optional
// candidate list restricts the screen to those families.
inline std::vector<std::string> phase1_fuzzy(
    const FeatureVector18& f, const KnowledgeTable& kb,
    const FeatureRanking& ranking, const CascadeConfig& config,
    const std::vector<std::string>* candidates = nullptr) {
  int top = std::clamp(config.top_r, 1, FeatureVector18::size);
  auto accepts = [&](const std::array<FamilyRange, FeatureVector18::size>& ranges) {
    for (int i = 0; i < top; ++i) {
      int j = ranking.order[static_cast<std::size_t>(i)];
      if (membership(f[j], ranges[static_cast<std::size_t>(j)], config.delta_frac) <
          config.theta) {
        return false;
      }
    }
    return true;
  };

  std::vector<std::string> survivors;
  if (candidates) {
    for (const auto& family : *candidates) {
      auto it = kb.ranges.find(family);
      if (it != kb.ranges.end() && accepts(it->second)) survivors.push_back(family);
    }
  } else {
    for (const auto& [family, ranges] : kb.ranges) {
      if (accepts(ranges)) survivors.push_back(family);
    }
  }
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

}  // namespace psc
