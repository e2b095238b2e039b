#include "psc/neighborhood.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "oracles.hpp"
#include "psc/rng.hpp"
#include "psc/synthetic.hpp"

using namespace psc;

namespace {

FeatureVector18 row_at(double base, double spread, Rng& rng) {
  FeatureVector18 f;
  for (auto& v : f.values) v = base + rng.next_uniform(-spread, spread);
  return f;
}

}  // namespace

TEST(Neighborhood, ExactMatchWinsWithKOne) {
  Warehouse w;
  Rng rng(73);
  for (int n = 0; n < 10; ++n) w.append("near", row_at(0.0, 0.3, rng));
  for (int n = 0; n < 10; ++n) w.append("far", row_at(10.0, 0.3, rng));
  auto kb = build_knowledge(w);
  CascadeConfig config;
  config.k_neighbors = 1;
  const auto& probe = w.rows()[3].features;
  EXPECT_EQ(phase3_neighborhood(probe, w, kb, nullptr, config), "near");
}

TEST(Neighborhood, MajorityOutvotesTheClosestSingle) {
  // Two b-rows bracket the query closely, three a-rows sit a little wider:
  // with k = 5 the a majority wins even though a b-row is nearest.
  Warehouse w;
  auto at = [](double v) {
    FeatureVector18 f;
    f.values.fill(v);
    return f;
  };
  w.append("b", at(0.9));
  w.append("b", at(1.2));
  w.append("a", at(1.5));
  w.append("a", at(1.6));
  w.append("a", at(1.7));
  w.append("far", at(40.0));
  w.append("far", at(-40.0));
  auto kb = build_knowledge(w);
  CascadeConfig config;
  config.k_neighbors = 5;
  EXPECT_EQ(phase3_neighborhood(at(1.0), w, kb, nullptr, config), "a");
  config.k_neighbors = 1;
  EXPECT_EQ(phase3_neighborhood(at(1.0), w, kb, nullptr, config), "b");
}

TEST(Neighborhood, VoteTieFallsToSmallerMeanDistance) {
  Warehouse w;
  auto at = [](double v) {
    FeatureVector18 f;
    f.values.fill(v);
    return f;
  };
  // k = 4 splits two on two; the b pair hugs the query.
  w.append("a", at(-3.0));
  w.append("a", at(3.0));
  w.append("b", at(-1.0));
  w.append("b", at(1.0));
  w.append("pad", at(90.0));
  auto kb = build_knowledge(w);
  CascadeConfig config;
  config.k_neighbors = 4;
  EXPECT_EQ(phase3_neighborhood(at(0.0), w, kb, nullptr, config), "b");
}

TEST(Neighborhood, FullTieFallsToLexicographicName) {
  Warehouse w;
  auto at = [](double v) {
    FeatureVector18 f;
    f.values.fill(v);
    return f;
  };
  // Values symmetric around zero keep the two unit distances bit-identical
  // after standardisation, forcing a genuine tie.
  w.append("zeta", at(-1.0));
  w.append("beta", at(1.0));
  w.append("pad", at(2.0));
  w.append("pad", at(-2.0));
  auto kb = build_knowledge(w);
  CascadeConfig config;
  config.k_neighbors = 2;
  EXPECT_EQ(phase3_neighborhood(at(0.0), w, kb, nullptr, config), "beta");
}

TEST(Neighborhood, CandidateRestrictionAndEmptiness) {
  Warehouse w;
  Rng rng(79);
  for (int n = 0; n < 8; ++n) w.append("near", row_at(0.0, 0.3, rng));
  for (int n = 0; n < 8; ++n) w.append("far", row_at(10.0, 0.3, rng));
  auto kb = build_knowledge(w);
  CascadeConfig config;

  const auto& probe = w.rows()[0].features;
  std::vector<std::string> only_far{"far"};
  EXPECT_EQ(phase3_neighborhood(probe, w, kb, &only_far, config), "far");

  std::vector<std::string> unknown{"no-such"};
  EXPECT_THROW(phase3_neighborhood(probe, w, kb, &unknown, config), EmptyWarehouse);

  Warehouse empty;
  EXPECT_THROW(phase3_neighborhood(probe, empty, kb, nullptr, config), EmptyWarehouse);
}

TEST(Neighborhood, KLargerThanWarehouseIsClamped) {
  Warehouse w;
  Rng rng(83);
  for (int n = 0; n < 3; ++n) w.append("tiny", row_at(0.0, 0.5, rng));
  auto kb = build_knowledge(w);
  CascadeConfig config;
  config.k_neighbors = 50;
  EXPECT_EQ(phase3_neighborhood(row_at(0.0, 0.5, rng), w, kb, nullptr, config), "tiny");
}

TEST(Neighborhood, MatchesBruteForceOracle) {
  SyntheticSpec spec;
  spec.families = 4;
  spec.per_family = 50;
  spec.test_draws = 100;
  spec.seed = 87;
  auto corpus = make_synthetic_corpus(spec);
  const auto& w = corpus.warehouse;
  auto kb = build_knowledge(w);

  std::vector<std::array<double, 18>> standardized;
  std::vector<std::string> families;
  for (const auto& row : w.rows()) {
    standardized.push_back(standardize(row.features, kb));
    families.push_back(row.family);
  }

  CascadeConfig config;
  std::vector<std::string> restricted{"fam00", "fam02"};
  for (const auto& [family, seq] : corpus.tests) {
    auto f = feature_vector(seq);
    auto zq = standardize(f, kb);
    EXPECT_EQ(phase3_neighborhood(f, w, kb, nullptr, config),
              oracle::brute_force_vote(standardized, families, zq,
                                       config.k_neighbors, nullptr));
    EXPECT_EQ(phase3_neighborhood(f, w, kb, &restricted, config),
              oracle::brute_force_vote(standardized, families, zq,
                                       config.k_neighbors, &restricted));
  }
}
