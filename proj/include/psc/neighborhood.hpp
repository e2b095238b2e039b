#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "psc/config.hpp"
#include "psc/warehouse.hpp"

namespace psc {

// Majority vote over the k nearest warehouse rows in standardized feature
// space. Neighbour order breaks distance ties by row index; vote ties go to
// the family with the smaller mean neighbour distance, then the
// lexicographically smaller name. Fully deterministic for a fixed warehouse.
inline std::string phase3_neighborhood(const FeatureVector18& f, const Warehouse& w,
                                       const KnowledgeTable& kb,
                                       const std::vector<std::string>* candidates,
                                       const CascadeConfig& config) {
  std::set<std::string> allowed;
  if (candidates) allowed.insert(candidates->begin(), candidates->end());

  auto zq = standardize(f, kb);
  struct Neighbour {
    double dist2;
    std::size_t row;
  };
  std::vector<Neighbour> pool;
  pool.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& row = w.rows()[i];
    if (candidates && !allowed.count(row.family)) continue;
    auto zr = standardize(row.features, kb);
    double d2 = 0;
    for (std::size_t j = 0; j < zq.size(); ++j) {
      double dx = zq[j] - zr[j];
      d2 += dx * dx;
    }
    pool.push_back({d2, i});
  }
  if (pool.empty()) throw EmptyWarehouse();

  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(config.k_neighbors, 1)),
                                        pool.size());
  auto closer = [](const Neighbour& a, const Neighbour& b) {
    return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.row < b.row;
  };
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                    closer);

  std::map<std::string, std::pair<std::size_t, double>> votes;  // count, distance sum
  for (std::size_t i = 0; i < k; ++i) {
    const auto& family = w.rows()[pool[i].row].family;
    auto& v = votes[family];
    v.first++;
    v.second += std::sqrt(pool[i].dist2);
  }

  std::string best;
  std::size_t best_count = 0;
  double best_mean = 0;
  for (const auto& [family, v] : votes) {
    double mean = v.second / static_cast<double>(v.first);
    bool wins = v.first > best_count ||
                (v.first == best_count && mean < best_mean);
    if (best.empty() || wins) {
      best = family;
      best_count = v.first;
      best_mean = mean;
    }
  }
  return best;
}

}  // namespace psc
