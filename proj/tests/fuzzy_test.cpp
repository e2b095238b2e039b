#include "psc/fuzzy.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "psc/ranking.hpp"
#include "psc/synthetic.hpp"

using namespace psc;

namespace {

FamilyRange make_range(double min, double max, double mean) {
  return {"fam", 0, min, max, mean};
}

}  // namespace

TEST(Membership, FlatTopInsideTheRange) {
  auto r = make_range(2.0, 6.0, 4.0);
  EXPECT_DOUBLE_EQ(membership(2.0, r, 0.1), 1.0);
  EXPECT_DOUBLE_EQ(membership(4.0, r, 0.1), 1.0);
  EXPECT_DOUBLE_EQ(membership(6.0, r, 0.1), 1.0);
}

TEST(Membership, LinearShoulders) {
  auto r = make_range(2.0, 6.0, 4.0);
  double delta = 0.1 * 4.0;
  EXPECT_NEAR(membership(6.0 + delta, r, 0.1), 0.0, 1e-12);
  EXPECT_NEAR(membership(6.0 + delta / 2, r, 0.1), 0.5, 1e-12);
  EXPECT_NEAR(membership(2.0 - delta / 2, r, 0.1), 0.5, 1e-12);
  EXPECT_NEAR(membership(2.0 - delta, r, 0.1), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(membership(100.0, r, 0.1), 0.0);
  EXPECT_NEAR(membership(6.0 + delta / 4, r, 0.1), 0.75, 1e-12);
}

TEST(Membership, CollapsedRangeStillAcceptsExactValue) {
  auto r = make_range(5.0, 5.0, 5.0);
  EXPECT_DOUBLE_EQ(membership(5.0, r, 0.1), 1.0);
  // The hairline shoulder keeps the decline continuous.
  double delta = 1e-6 * 5.0;
  EXPECT_NEAR(membership(5.0 + delta, r, 0.1), 0.0, 1e-9);
  EXPECT_NEAR(membership(5.0 + delta / 2, r, 0.1), 0.5, 1e-6);
  EXPECT_DOUBLE_EQ(membership(5.1, r, 0.1), 0.0);
}

TEST(Membership, StaysWithinUnitInterval) {
  auto r = make_range(-3.0, 7.0, 1.0);
  for (double v = -20.0; v <= 20.0; v += 0.173) {
    double mu = membership(v, r, 0.1);
    EXPECT_GE(mu, 0.0);
    EXPECT_LE(mu, 1.0);
  }
}

TEST(LinguisticPartition, PeaksAndCrossovers) {
  auto at_min = linguistic_partition(0.0, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(at_min[0], 1.0);
  EXPECT_DOUBLE_EQ(at_min[1], 0.0);
  EXPECT_DOUBLE_EQ(at_min[2], 0.0);

  auto at_mid = linguistic_partition(4.0, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(at_mid[0], 0.0);
  EXPECT_DOUBLE_EQ(at_mid[1], 1.0);
  EXPECT_DOUBLE_EQ(at_mid[2], 0.0);

  auto at_three_quarters = linguistic_partition(6.0, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(at_three_quarters[0], 0.0);
  EXPECT_DOUBLE_EQ(at_three_quarters[1], 0.5);
  EXPECT_DOUBLE_EQ(at_three_quarters[2], 0.5);

  auto at_max = linguistic_partition(8.0, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(at_max[2], 1.0);
}

TEST(LinguisticPartition, RejectsDegenerateRange) {
  EXPECT_THROW(linguistic_partition(1.0, 2.0, 2.0), DegenerateRange);
  EXPECT_THROW(linguistic_partition(1.0, 3.0, 2.0), DegenerateRange);
}

TEST(Phase1, TrainingRowsSurviveTheirOwnFamily) {
  SyntheticSpec spec;
  spec.families = 4;
  spec.per_family = 25;
  spec.test_draws = 0;
  spec.seed = 21;
  auto w = make_synthetic_corpus(spec).warehouse;
  auto kb = build_knowledge(w);
  auto ranking = rank_features(w);
  CascadeConfig config;
  for (const auto& row : w.rows()) {
    auto candidates = phase1_fuzzy(row.features, kb, ranking, config);
    EXPECT_TRUE(std::find(candidates.begin(), candidates.end(), row.family) !=
                candidates.end())
        << row.family;
  }
}

TEST(Phase1, WellSeparatedFamiliesResolveToSingletons) {
  SyntheticSpec spec;
  spec.families = 5;
  spec.per_family = 120;
  spec.test_draws = 200;
  spec.seed = 27;
  auto corpus = make_synthetic_corpus(spec);
  auto kb = build_knowledge(corpus.warehouse);
  auto ranking = rank_features(corpus.warehouse);
  CascadeConfig config;

  int singleton_hits = 0;
  for (const auto& [family, seq] : corpus.tests) {
    auto candidates = phase1_fuzzy(feature_vector(seq), kb, ranking, config);
    if (candidates.size() == 1 && candidates.front() == family) singleton_hits++;
  }
  // The generator keeps family profiles disjoint, so most draws should pin
  // down exactly one family at this phase.
  EXPECT_GE(singleton_hits, 180);
}

TEST(Phase1, OutlierSurvivesNowhere) {
  SyntheticSpec spec;
  spec.families = 3;
  spec.per_family = 30;
  spec.test_draws = 0;
  spec.seed = 33;
  auto w = make_synthetic_corpus(spec).warehouse;
  auto kb = build_knowledge(w);
  auto ranking = rank_features(w);
  CascadeConfig config;

  FeatureVector18 far_out;
  far_out.values.fill(1e6);
  EXPECT_TRUE(phase1_fuzzy(far_out, kb, ranking, config).empty());
}

TEST(Phase1, CandidateRestrictionFilters) {
  SyntheticSpec spec;
  spec.families = 3;
  spec.per_family = 20;
  spec.test_draws = 0;
  spec.seed = 39;
  auto w = make_synthetic_corpus(spec).warehouse;
  auto kb = build_knowledge(w);
  auto ranking = rank_features(w);
  CascadeConfig config;

  const auto& row = w.rows().front();
  std::vector<std::string> only_own{row.family};
  auto candidates = phase1_fuzzy(row.features, kb, ranking, config, &only_own);
  EXPECT_EQ(candidates, only_own);

  std::vector<std::string> none{"no-such-family"};
  EXPECT_TRUE(phase1_fuzzy(row.features, kb, ranking, config, &none).empty());
}

TEST(Phase1, ThetaGatesTheShoulder) {
  Warehouse w;
  FeatureVector18 low, high;
  low.values.fill(0.0);
  high.values.fill(1.0);
  w.append("unit", low);
  w.append("unit", high);
  FeatureVector18 other;
  other.values.fill(50.0);
  w.append("far", other);
  w.append("far", other);
  auto kb = build_knowledge(w);
  auto ranking = FeatureRanking::identity();

  // 1.03 sits 30% of the way down the 0.1-wide shoulder above [0, 1], so
  // every feature scores 0.7 against "unit" and 0 against "far".
  FeatureVector18 nudged;
  nudged.values.fill(1.03);
  CascadeConfig config;
  config.theta = 0.5;
  EXPECT_EQ(phase1_fuzzy(nudged, kb, ranking, config),
            (std::vector<std::string>{"unit"}));
  config.theta = 0.75;
  EXPECT_TRUE(phase1_fuzzy(nudged, kb, ranking, config).empty());
}
