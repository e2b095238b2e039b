#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "psc/amino_acids.hpp"
#include "psc/rng.hpp"
#include "psc/sequence.hpp"
#include "psc/warehouse.hpp"

namespace psc {

struct SyntheticSpec {
  int families = 5;
  int per_family = 500;   // training rows per family
  int test_draws = 500;   // held-out labelled queries
  std::uint64_t seed = 1;
  int min_length = 100;
  int max_length = 400;
};

struct SyntheticCorpus {
  Warehouse warehouse;  // in-memory training rows
  std::vector<std::pair<std::string, ProteinSequence>> tests;  // (family, query)
};

inline std::string synthetic_family_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "fam%02d", i);
  return buf;
}

namespace detail {

// Each family favours its own four-letter block of a seeded alphabet
// shuffle, so the default five families tile the alphabet disjointly and
// stay well separated in feature space.
inline std::vector<std::array<double, kResidueCount>> family_profiles(
    const SyntheticSpec& spec) {
  constexpr double kPreferredWeight = 12.0;
  constexpr int kPreferredLetters = 4;

  std::vector<std::array<double, kResidueCount>> profiles;
  Rng shuffle_rng = Rng::derive(spec.seed, "profiles");
  std::vector<int> letters;
  for (int i = 0; i < spec.families; ++i) {
    std::array<double, kResidueCount> weights;
    weights.fill(1.0);
    for (int p = 0; p < kPreferredLetters; ++p) {
      if (letters.empty()) {
        letters.resize(kResidueCount);
        for (int l = 0; l < kResidueCount; ++l) letters[static_cast<std::size_t>(l)] = l;
        shuffle_rng.shuffle(letters);
      }
      weights[static_cast<std::size_t>(letters.back())] = kPreferredWeight;
      letters.pop_back();
    }
    profiles.push_back(weights);
  }
  return profiles;
}

inline ProteinSequence draw_sequence(const std::array<double, kResidueCount>& weights,
                                     const SyntheticSpec& spec, Rng& rng) {
  double total = 0;
  for (double w : weights) total += w;
  long length = rng.next_int(spec.min_length, spec.max_length);
  std::string residues;
  residues.reserve(static_cast<std::size_t>(length));
  for (long i = 0; i < length; ++i) {
    double r = rng.next_double() * total;
    int letter = 0;
    for (; letter + 1 < kResidueCount; ++letter) {
      r -= weights[static_cast<std::size_t>(letter)];
      if (r < 0) break;
    }
    residues.push_back(kResidueLetters[static_cast<std::size_t>(letter)]);
  }
  return ProteinSequence::parse(residues);
}

}  // namespace detail

// Deterministic labelled corpus: warehouse rows plus held-out test queries,
// all reproducible from the SyntheticSpec values alone.
inline SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.families < 1 || spec.per_family < 1 || spec.min_length < 2 ||
      spec.max_length < spec.min_length) {
    throw InsufficientData("bad synthetic corpus sizes");
  }
  auto profiles = detail::family_profiles(spec);

  SyntheticCorpus corpus;
  for (int i = 0; i < spec.families; ++i) {
    auto name = synthetic_family_name(i);
    Rng rng = Rng::derive(spec.seed, "train:" + name);
    for (int n = 0; n < spec.per_family; ++n) {
      auto seq = detail::draw_sequence(profiles[static_cast<std::size_t>(i)], spec, rng);
      corpus.warehouse.append(name, feature_vector(seq));
    }
  }

  Rng test_rng = Rng::derive(spec.seed, "test");
  for (int n = 0; n < spec.test_draws; ++n) {
    int i = static_cast<int>(test_rng.next_below(static_cast<std::uint64_t>(spec.families)));
    corpus.tests.emplace_back(
        synthetic_family_name(i),
        detail::draw_sequence(profiles[static_cast<std::size_t>(i)], spec, test_rng));
  }
  return corpus;
}

}  // namespace psc
