#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace psc {

// Which model screens first. The fuzzy screen is cheap and usually decisive,
// so it is the default front end; the reversed ordering exists for
// comparison runs.
enum class Ordering { fuzzy_first, neural_first };

constexpr std::string_view to_string(Ordering o) {
  return o == Ordering::fuzzy_first ? "fuzzy-first" : "neural-first";
}

inline std::optional<Ordering> parse_ordering(std::string_view s) {
  if (s == "fuzzy-first") return Ordering::fuzzy_first;
  if (s == "neural-first") return Ordering::neural_first;
  return std::nullopt;
}

struct CascadeConfig {
  int top_r = 8;              // ranked features consulted by the fuzzy screen
  double theta = 0.5;         // fuzzy acceptance threshold
  double delta_frac = 0.1;    // shoulder width as a fraction of the range span
  int hidden_units = 32;
  double learning_rate = 0.1;
  int epochs = 200;
  double margin_gamma = 0.2;  // top-two probability margin to accept outright
  int k_neighbors = 5;
  Ordering order = Ordering::fuzzy_first;
  std::uint64_t seed = 0;
};

}  // namespace psc
