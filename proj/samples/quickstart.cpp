// Minimal end-to-end tour: extract features from one sequence, build a tiny
// warehouse, and classify a fresh query through the cascade.

#include <cstdio>

#include "psc/psc.hpp"

int main() {
  auto seq = psc::parse_sequence("MARETFAR");
  auto f = psc::feature_vector(seq);
  std::printf("features of %s:\n", seq.residues().c_str());
  for (int j = 0; j < psc::FeatureVector18::size; ++j) {
    std::printf("  %-22s %s\n", psc::FeatureVector18::names[j],
                psc::format_double(f[j]).c_str());
  }

  // Two families, a handful of rows each, drawn from the synthetic generator.
  psc::SyntheticSpec spec;
  spec.families = 2;
  spec.per_family = 25;
  spec.test_draws = 1;
  auto corpus = psc::make_synthetic_corpus(spec);

  auto kb = psc::build_knowledge(corpus.warehouse);
  auto classifier = psc::CascadeClassifier::make(corpus.warehouse, kb, psc::CascadeConfig{});

  const auto& [truth, query] = corpus.tests.front();
  auto result = classifier.classify(query);
  std::printf("query from %s classified as %s (resolved by %.*s)\n", truth.c_str(),
              result.family.c_str(), static_cast<int>(to_string(result.resolved_by).size()),
              to_string(result.resolved_by).data());
  return 0;
}
