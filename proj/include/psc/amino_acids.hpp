#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "psc/errors.hpp"

namespace psc {

enum class Hydropathy : std::uint8_t { hydrophobic = 0, hydrophilic = 1, neutral = 2 };

// Six-letter reduced alphabet of substitutable residues:
// e1 {H,R,K}, e2 {D,E,N,Q}, e3 {C}, e4 {S,T,P,A,G}, e5 {M,I,L,V}, e6 {F,Y,W}.
enum class ExchangeGroup : std::uint8_t { e1 = 0, e2, e3, e4, e5, e6 };

inline constexpr int kResidueCount = 20;
inline constexpr int kExchangeGroupCount = 6;

struct AminoAcid {
  char letter;
  const char* name;
  double weight;       // average molecular weight, Da
  double isoelectric;  // pI, pH units
  Hydropathy hydropathy;
  ExchangeGroup group;
};

inline constexpr std::array<AminoAcid, kResidueCount> kAminoAcids{{
    {'A', "Alanine", 89.10, 6.00, Hydropathy::hydrophobic, ExchangeGroup::e4},
    {'R', "Arginine", 174.20, 10.76, Hydropathy::hydrophilic, ExchangeGroup::e1},
    {'N', "Asparagine", 132.12, 5.41, Hydropathy::hydrophilic, ExchangeGroup::e2},
    {'D', "Aspartic Acid", 133.11, 2.77, Hydropathy::hydrophilic, ExchangeGroup::e2},
    {'C', "Cysteine", 121.16, 5.07, Hydropathy::hydrophobic, ExchangeGroup::e3},
    {'E', "Glutamic Acid", 147.13, 3.22, Hydropathy::hydrophilic, ExchangeGroup::e2},
    {'Q', "Glutamine", 146.15, 5.65, Hydropathy::neutral, ExchangeGroup::e2},
    {'G', "Glycine", 75.07, 5.97, Hydropathy::neutral, ExchangeGroup::e4},
    {'H', "Histidine", 155.16, 7.59, Hydropathy::neutral, ExchangeGroup::e1},
    {'I', "Isoleucine", 131.18, 6.02, Hydropathy::hydrophobic, ExchangeGroup::e5},
    {'L', "Leucine", 131.18, 5.98, Hydropathy::hydrophobic, ExchangeGroup::e5},
    {'K', "Lysine", 146.19, 9.74, Hydropathy::hydrophilic, ExchangeGroup::e1},
    {'M', "Methionine", 149.21, 5.74, Hydropathy::hydrophobic, ExchangeGroup::e5},
    {'F', "Phenylalanine", 165.19, 5.48, Hydropathy::hydrophobic, ExchangeGroup::e6},
    {'P', "Proline", 115.13, 6.30, Hydropathy::hydrophilic, ExchangeGroup::e4},
    {'S', "Serine", 105.09, 5.68, Hydropathy::neutral, ExchangeGroup::e4},
    {'T', "Threonine", 119.12, 5.60, Hydropathy::neutral, ExchangeGroup::e4},
    {'W', "Tryptophan", 204.23, 5.89, Hydropathy::hydrophobic, ExchangeGroup::e6},
    {'Y', "Tyrosine", 181.19, 5.66, Hydropathy::hydrophobic, ExchangeGroup::e6},
    {'V', "Valine", 117.15, 5.96, Hydropathy::hydrophobic, ExchangeGroup::e5},
}};

// Alphabetical letter order; fixes the slot layout of the 2-gram pattern space.
inline constexpr std::string_view kResidueLetters = "ACDEFGHIKLMNPQRSTVWY";

namespace detail {

constexpr std::array<std::int8_t, 256> make_index(std::string_view order) {
  std::array<std::int8_t, 256> table{};
  for (auto& slot : table) slot = -1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    table[static_cast<unsigned char>(order[i])] = static_cast<std::int8_t>(i);
  }
  return table;
}

constexpr std::array<char, kResidueCount> table_letters() {
  std::array<char, kResidueCount> letters{};
  for (int i = 0; i < kResidueCount; ++i) letters[i] = kAminoAcids[i].letter;
  return letters;
}

inline constexpr auto kTableIndex =
    make_index(std::string_view(table_letters().data(), kResidueCount));
inline constexpr auto kLetterIndex = make_index(kResidueLetters);

}  // namespace detail

constexpr bool is_residue(char c) {
  return detail::kTableIndex[static_cast<unsigned char>(c)] >= 0;
}

// Position of a residue letter in alphabetical order, -1 for non-residues.
constexpr int residue_index(char c) {
  return detail::kLetterIndex[static_cast<unsigned char>(c)];
}

inline const AminoAcid& residue_properties(char c) {
  int idx = detail::kTableIndex[static_cast<unsigned char>(c)];
  if (idx < 0) throw UnknownResidue(c);
  return kAminoAcids[static_cast<std::size_t>(idx)];
}

constexpr ExchangeGroup exchange_group(char c) {
  int idx = detail::kTableIndex[static_cast<unsigned char>(c)];
  if (idx < 0) throw UnknownResidue(c);
  return kAminoAcids[static_cast<std::size_t>(idx)].group;
}

constexpr std::string_view to_string(Hydropathy h) {
  switch (h) {
    case Hydropathy::hydrophobic: return "Hydrophobic";
    case Hydropathy::hydrophilic: return "Hydrophilic";
    default: return "Neutral";
  }
}

constexpr std::string_view to_string(ExchangeGroup g) {
  constexpr std::array<std::string_view, kExchangeGroupCount> names{
      "e1", "e2", "e3", "e4", "e5", "e6"};
  return names[static_cast<std::size_t>(g)];
}

}  // namespace psc
