#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "psc/errors.hpp"
#include "psc/warehouse.hpp"

namespace psc {

// Features ordered by how well they separate families, best first. score is
// indexed by feature and nonincreasing along order.
struct FeatureRanking {
  std::array<int, FeatureVector18::size> order{};
  std::array<double, FeatureVector18::size> score{};

  // Position order with zero scores; the fallback when the warehouse is too
  // small for rank_features.
  static FeatureRanking identity() {
    FeatureRanking r;
    std::iota(r.order.begin(), r.order.end(), 0);
    return r;
  }

  bool operator==(const FeatureRanking&) const = default;
};

// Fisher-style separation score per feature: variance of the family means
// over the mean within-family variance. Needs at least two families with at
// least two rows each so both variances are defined.
inline FeatureRanking rank_features(const Warehouse& w) {
  std::map<std::string, std::vector<const FeatureVector18*>> by_family;
  for (const auto& row : w.rows()) by_family[row.family].push_back(&row.features);
  if (by_family.size() < 2) {
    throw InsufficientData("feature ranking needs at least two families");
  }
  for (const auto& [family, rows] : by_family) {
    if (rows.size() < 2) {
      throw InsufficientData("feature ranking needs at least two rows in family '" +
                             family + "'");
    }
  }

  FeatureRanking ranking;
  double n_families = static_cast<double>(by_family.size());
  for (int j = 0; j < FeatureVector18::size; ++j) {
    std::vector<double> family_means;
    double within_sum = 0;
    for (const auto& [family, rows] : by_family) {
      double n = static_cast<double>(rows.size());
      double sum = 0;
      for (const auto* f : rows) sum += (*f)[j];
      double mean = sum / n;
      family_means.push_back(mean);
      double ss = 0;
      for (const auto* f : rows) {
        double dx = (*f)[j] - mean;
        ss += dx * dx;
      }
      within_sum += ss / (n - 1.0);
    }
    double grand = 0;
    for (double m : family_means) grand += m;
    grand /= n_families;
    double between = 0;
    for (double m : family_means) between += (m - grand) * (m - grand);
    between /= n_families - 1.0;
    double within = within_sum / n_families;
    ranking.score[static_cast<std::size_t>(j)] = between / (within + 1e-9);
  }

  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
    return ranking.score[static_cast<std::size_t>(a)] >
           ranking.score[static_cast<std::size_t>(b)];
  });
  return ranking;
}

}  // namespace psc
