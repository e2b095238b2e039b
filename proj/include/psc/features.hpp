#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "psc/amino_acids.hpp"
#include "psc/errors.hpp"
#include "psc/sequence.hpp"

namespace psc {

// Whole-sequence physicochemical summary: averages over residues plus the
// hydropathy class mix and the class-transition mix of adjacent pairs.
struct GlobalFeatures {
  double avg_weight = 0;
  double avg_isoelectric = 0;
  std::array<double, 3> composition{};   // hydrophobic, hydrophilic, neutral
  std::array<double, 9> distribution{};  // row-major class pairs, phobic-phobic first
};

using NGramCounts = std::map<std::string, int>;

// Occurrence statistics over the distinct 2-grams of one sequence. Counts are
// normalised as x = c / (len - 1); mean and stddev are taken over the distinct
// patterns only (stddev with n - 1, zero for a single pattern).
struct NGramStats {
  NGramCounts counts;
  double mean = 0;
  double stddev = 0;
  int n_distinct = 0;
};

struct FeatureVector18 {
  static constexpr int size = 18;
  std::array<double, size> values{};

  static constexpr std::array<const char*, size> names{
      "avg_mw",
      "avg_pi",
      "comp_phobic",
      "comp_philic",
      "comp_neutral",
      "dist_phobic_phobic",
      "dist_phobic_philic",
      "dist_phobic_neutral",
      "dist_philic_phobic",
      "dist_philic_philic",
      "dist_philic_neutral",
      "dist_neutral_phobic",
      "dist_neutral_philic",
      "dist_neutral_neutral",
      "aa2_mean",
      "aa2_std",
      "ex2_mean",
      "ex2_std",
  };

  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  bool operator==(const FeatureVector18&) const = default;
};

// Dense 2-gram pattern space: 400 residue-pair slots followed by 36
// exchange-group-pair slots, each holding the normalised occurrence x.
struct PatternVector436 {
  static constexpr int aa_slots = kResidueCount * kResidueCount;
  static constexpr int ex_slots = kExchangeGroupCount * kExchangeGroupCount;
  static constexpr int size = aa_slots + ex_slots;

  std::array<double, size> values{};

  static int aa_slot(char a, char b) {
    int ia = residue_index(a), ib = residue_index(b);
    if (ia < 0) throw UnknownResidue(a);
    if (ib < 0) throw UnknownResidue(b);
    return ia * kResidueCount + ib;
  }

  static int ex_slot(ExchangeGroup a, ExchangeGroup b) {
    return aa_slots + static_cast<int>(a) * kExchangeGroupCount + static_cast<int>(b);
  }

  bool operator==(const PatternVector436&) const = default;
};

static_assert(PatternVector436::size == 436);

inline double total_molecular_weight(const ProteinSequence& seq) {
  double total = 0;
  for (char c : seq.residues()) total += residue_properties(c).weight;
  return total;
}

inline double average_molecular_weight(const ProteinSequence& seq) {
  return total_molecular_weight(seq) / static_cast<double>(seq.size());
}

inline double total_isoelectric_point(const ProteinSequence& seq) {
  double total = 0;
  for (char c : seq.residues()) total += residue_properties(c).isoelectric;
  return total;
}

inline double average_isoelectric_point(const ProteinSequence& seq) {
  return total_isoelectric_point(seq) / static_cast<double>(seq.size());
}

inline std::array<std::size_t, 3> hydropathy_counts(const ProteinSequence& seq) {
  std::array<std::size_t, 3> counts{};
  for (char c : seq.residues()) {
    counts[static_cast<std::size_t>(residue_properties(c).hydropathy)]++;
  }
  return counts;
}

inline std::array<double, 3> hydropathy_composition(const ProteinSequence& seq) {
  auto counts = hydropathy_counts(seq);
  std::array<double, 3> fractions{};
  for (std::size_t i = 0; i < 3; ++i) {
    fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(seq.size());
  }
  return fractions;
}

// Adjacent-pair class transitions, e.g. slot 0 counts phobic followed by
// phobic. A length-1 sequence has no pairs and an all-zero table.
inline std::array<std::size_t, 9> hydropathy_pair_counts(const ProteinSequence& seq) {
  std::array<std::size_t, 9> counts{};
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    auto a = residue_properties(seq[i]).hydropathy;
    auto b = residue_properties(seq[i + 1]).hydropathy;
    counts[static_cast<std::size_t>(a) * 3 + static_cast<std::size_t>(b)]++;
  }
  return counts;
}

inline std::array<double, 9> hydropathy_distribution(const ProteinSequence& seq) {
  std::array<double, 9> fractions{};
  if (seq.size() < 2) return fractions;
  auto counts = hydropathy_pair_counts(seq);
  double pairs = static_cast<double>(seq.size() - 1);
  for (std::size_t i = 0; i < 9; ++i) {
    fractions[i] = static_cast<double>(counts[i]) / pairs;
  }
  return fractions;
}

inline GlobalFeatures global_features(const ProteinSequence& seq) {
  GlobalFeatures g;
  g.avg_weight = average_molecular_weight(seq);
  g.avg_isoelectric = average_isoelectric_point(seq);
  g.composition = hydropathy_composition(seq);
  g.distribution = hydropathy_distribution(seq);
  return g;
}

inline NGramCounts two_gram_counts(const ProteinSequence& seq) {
  if (seq.size() < 2) throw SequenceTooShort(seq.size());
  NGramCounts counts;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    counts[seq.residues().substr(i, 2)]++;
  }
  return counts;
}

inline NGramCounts exchange_two_gram_counts(const ProteinSequence& seq) {
  if (seq.size() < 2) throw SequenceTooShort(seq.size());
  NGramCounts counts;
  auto groups = seq.exchange_groups();
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    std::string key;
    key += to_string(groups[i]);
    key += to_string(groups[i + 1]);
    counts[key]++;
  }
  return counts;
}

inline NGramStats ngram_stats(const NGramCounts& counts, std::size_t seq_len) {
  if (seq_len < 2 || counts.empty()) throw SequenceTooShort(seq_len);
  NGramStats stats;
  stats.counts = counts;
  stats.n_distinct = static_cast<int>(counts.size());
  double pairs = static_cast<double>(seq_len - 1);
  double sum = 0;
  for (const auto& [pattern, c] : counts) sum += static_cast<double>(c) / pairs;
  stats.mean = sum / static_cast<double>(stats.n_distinct);
  if (stats.n_distinct > 1) {
    double ss = 0;
    for (const auto& [pattern, c] : counts) {
      double dx = static_cast<double>(c) / pairs - stats.mean;
      ss += dx * dx;
    }
    stats.stddev = std::sqrt(ss / static_cast<double>(stats.n_distinct - 1));
  }
  return stats;
}

inline FeatureVector18 feature_vector(const ProteinSequence& seq) {
  if (seq.size() < 2) throw SequenceTooShort(seq.size());
  FeatureVector18 f;
  auto g = global_features(seq);
  f.values[0] = g.avg_weight;
  f.values[1] = g.avg_isoelectric;
  for (std::size_t i = 0; i < 3; ++i) f.values[2 + i] = g.composition[i];
  for (std::size_t i = 0; i < 9; ++i) f.values[5 + i] = g.distribution[i];
  auto aa = ngram_stats(two_gram_counts(seq), seq.size());
  auto ex = ngram_stats(exchange_two_gram_counts(seq), seq.size());
  f.values[14] = aa.mean;
  f.values[15] = aa.stddev;
  f.values[16] = ex.mean;
  f.values[17] = ex.stddev;
  return f;
}

inline PatternVector436 pattern_vector(const ProteinSequence& seq) {
  PatternVector436 p;
  double pairs = static_cast<double>(seq.size() - 1);
  for (const auto& [pattern, c] : two_gram_counts(seq)) {
    p.values[static_cast<std::size_t>(PatternVector436::aa_slot(pattern[0], pattern[1]))] =
        static_cast<double>(c) / pairs;
  }
  auto groups = seq.exchange_groups();
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    int slot = PatternVector436::ex_slot(groups[i], groups[i + 1]);
    p.values[static_cast<std::size_t>(slot)] += 1.0;
  }
  for (int s = PatternVector436::aa_slots; s < PatternVector436::size; ++s) {
    p.values[static_cast<std::size_t>(s)] /= pairs;
  }
  return p;
}

// Display name for a distribution slot, e.g. "Hydrophobic-Hydrophilic".
inline std::string hydropathy_pair_name(std::size_t slot) {
  std::string name{to_string(static_cast<Hydropathy>(slot / 3))};
  name += '-';
  name += to_string(static_cast<Hydropathy>(slot % 3));
  return name;
}

}  // namespace psc
