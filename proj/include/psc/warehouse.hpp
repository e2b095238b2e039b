#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "psc/errors.hpp"
#include "psc/features.hpp"
#include "psc/text.hpp"

namespace psc {

struct WarehouseRow {
  std::string family;
  FeatureVector18 features;

  bool operator==(const WarehouseRow&) const = default;
};

// Flat store of labelled feature rows, one TSV line per classified sequence.
// Sequences themselves are not retained; the 18 features are what every later
// stage consumes.
class Warehouse {
 public:
  Warehouse() = default;

  void append(std::string family, const FeatureVector18& features) {
    if (family.empty()) throw FormatError("family label must be non-empty");
    if (family.find_first_of("\t\r\n") != std::string::npos) {
      throw FormatError("family label must not contain tabs or line breaks");
    }
    rows_.push_back({std::move(family), features});
  }

  const std::vector<WarehouseRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  std::vector<std::string> families() const {
    std::set<std::string> names;
    for (const auto& row : rows_) names.insert(row.family);
    return {names.begin(), names.end()};
  }

  const std::string& path() const { return path_; }
  void set_path(std::string path) { path_ = std::move(path); }

  void save_as(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write warehouse file '" + path + "'");
    out << header_line() << '\n';
    for (const auto& row : rows_) {
      out << row.family;
      for (double v : row.features.values) out << '\t' << format_double(v);
      out << '\n';
    }
    if (!out) throw StorageError("write to warehouse file '" + path + "' failed");
  }

  void save() const {
    if (path_.empty()) throw StorageError("warehouse has no storage path");
    save_as(path_);
  }

  static Warehouse load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot open warehouse file '" + path + "'");
    Warehouse w;
    w.path_ = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (lineno == 1) {
        if (line != header_line()) {
          throw StorageError("warehouse file '" + path + "' has an unexpected header");
        }
        continue;
      }
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      if (fields.size() != 1 + static_cast<std::size_t>(FeatureVector18::size)) {
        throw StorageError("warehouse file '" + path + "' line " +
                           std::to_string(lineno) + " has " +
                           std::to_string(fields.size()) + " fields");
      }
      WarehouseRow row;
      row.family = std::string(fields[0]);
      for (int j = 0; j < FeatureVector18::size; ++j) {
        auto v = parse_double(fields[static_cast<std::size_t>(j) + 1]);
        if (!v) {
          throw StorageError("warehouse file '" + path + "' line " +
                             std::to_string(lineno) + ": bad number in field " +
                             std::to_string(j + 2));
        }
        row.features.values[static_cast<std::size_t>(j)] = *v;
      }
      if (row.family.empty()) {
        throw StorageError("warehouse file '" + path + "' line " +
                           std::to_string(lineno) + " has an empty family");
      }
      w.rows_.push_back(std::move(row));
    }
    return w;
  }

 private:
  static std::string header_line() {
    std::string h = "family";
    for (int j = 1; j <= FeatureVector18::size; ++j) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "f%02d", j);
      h += '\t';
      h += buf;
    }
    return h;
  }

  std::vector<WarehouseRow> rows_;
  std::string path_;
};

// Extract features and add the row; persists when the warehouse has a
// storage path.
inline void insert_row(Warehouse& w, const std::string& family,
                       const ProteinSequence& seq) {
  w.append(family, feature_vector(seq));
  if (!w.path().empty()) w.save();
}

struct FamilyRange {
  std::string family;
  int feature_index = 0;
  double min = 0;
  double max = 0;
  double mean = 0;

  bool operator==(const FamilyRange&) const = default;
};

// Per-family feature ranges plus global standardisation statistics, derived
// from a warehouse snapshot. row_count records the warehouse size the table
// was built from; a mismatch is the (only) staleness signal, so edits that
// keep the row count unchanged go undetected until a forced rebuild.
struct KnowledgeTable {
  std::map<std::string, std::array<FamilyRange, FeatureVector18::size>> ranges;
  std::array<double, FeatureVector18::size> global_mean{};
  std::array<double, FeatureVector18::size> global_std{};
  std::size_t row_count = 0;

  std::vector<std::string> families() const {
    std::vector<std::string> names;
    names.reserve(ranges.size());
    for (const auto& [family, r] : ranges) names.push_back(family);
    return names;
  }

  const FamilyRange& range(const std::string& family, int feature) const {
    auto it = ranges.find(family);
    if (it == ranges.end()) throw Error("unknown family '" + family + "'");
    return it->second[static_cast<std::size_t>(feature)];
  }

  bool operator==(const KnowledgeTable&) const = default;

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write knowledge file '" + path + "'");
    out << "countrow\t" << row_count << '\n';
    for (int j = 0; j < FeatureVector18::size; ++j) {
      out << "global\t" << j << '\t' << format_double(global_mean[static_cast<std::size_t>(j)])
          << '\t' << format_double(global_std[static_cast<std::size_t>(j)]) << '\n';
    }
    for (const auto& [family, per_feature] : ranges) {
      for (const auto& r : per_feature) {
        out << "range\t" << family << '\t' << r.feature_index << '\t'
            << format_double(r.min) << '\t' << format_double(r.max) << '\t'
            << format_double(r.mean) << '\n';
      }
    }
    if (!out) throw StorageError("write to knowledge file '" + path + "' failed");
  }

  static KnowledgeTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot open knowledge file '" + path + "'");
    KnowledgeTable kb;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) -> StorageError {
      return StorageError("knowledge file '" + path + "' line " +
                          std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      if (fields[0] == "countrow") {
        if (fields.size() != 2) throw fail("countrow record needs one value");
        auto v = parse_double(fields[1]);
        if (!v || *v < 0) throw fail("bad countrow value");
        kb.row_count = static_cast<std::size_t>(*v);
      } else if (fields[0] == "global") {
        if (fields.size() != 4) throw fail("global record needs three values");
        auto j = parse_double(fields[1]);
        auto mean = parse_double(fields[2]);
        auto std_ = parse_double(fields[3]);
        if (!j || !mean || !std_ || *j < 0 || *j >= FeatureVector18::size) {
          throw fail("bad global record");
        }
        kb.global_mean[static_cast<std::size_t>(*j)] = *mean;
        kb.global_std[static_cast<std::size_t>(*j)] = *std_;
      } else if (fields[0] == "range") {
        if (fields.size() != 6) throw fail("range record needs five values");
        auto j = parse_double(fields[2]);
        auto mn = parse_double(fields[3]);
        auto mx = parse_double(fields[4]);
        auto mean = parse_double(fields[5]);
        if (!j || !mn || !mx || !mean || *j < 0 || *j >= FeatureVector18::size) {
          throw fail("bad range record");
        }
        FamilyRange r;
        r.family = std::string(fields[1]);
        r.feature_index = static_cast<int>(*j);
        r.min = *mn;
        r.max = *mx;
        r.mean = *mean;
        if (r.family.empty()) throw fail("empty family name");
        kb.ranges[r.family][static_cast<std::size_t>(r.feature_index)] = r;
      } else {
        throw fail("unknown record type '" + std::string(fields[0]) + "'");
      }
    }
    for (const auto& [family, per_feature] : kb.ranges) {
      for (int j = 0; j < FeatureVector18::size; ++j) {
        if (per_feature[static_cast<std::size_t>(j)].family != family) {
          throw StorageError("knowledge file '" + path + "' is missing feature " +
                             std::to_string(j) + " for family '" + family + "'");
        }
      }
    }
    return kb;
  }
};

inline KnowledgeTable build_knowledge(const Warehouse& w) {
  if (w.empty()) throw EmptyWarehouse();
  KnowledgeTable kb;
  kb.row_count = w.size();

  for (const auto& row : w.rows()) {
    auto [it, fresh] = kb.ranges.try_emplace(row.family);
    auto& per_feature = it->second;
    for (int j = 0; j < FeatureVector18::size; ++j) {
      double v = row.features[j];
      auto& r = per_feature[static_cast<std::size_t>(j)];
      if (fresh) {
        r = {row.family, j, v, v, v};
      } else {
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
        r.mean += v;  // running sum until the divide below
      }
    }
  }
  std::map<std::string, std::size_t> family_sizes;
  for (const auto& row : w.rows()) family_sizes[row.family]++;
  for (auto& [family, per_feature] : kb.ranges) {
    double n = static_cast<double>(family_sizes[family]);
    for (auto& r : per_feature) r.mean /= n;
  }

  double n = static_cast<double>(w.size());
  for (int j = 0; j < FeatureVector18::size; ++j) {
    double sum = 0;
    for (const auto& row : w.rows()) sum += row.features[j];
    double mean = sum / n;
    kb.global_mean[static_cast<std::size_t>(j)] = mean;
    if (w.size() > 1) {
      double ss = 0;
      for (const auto& row : w.rows()) {
        double dx = row.features[j] - mean;
        ss += dx * dx;
      }
      kb.global_std[static_cast<std::size_t>(j)] = std::sqrt(ss / (n - 1.0));
    }
  }
  return kb;
}

// Reuse the cached table when its row count still matches the warehouse,
// rebuild otherwise. The bool reports whether a rebuild happened.
inline std::pair<KnowledgeTable, bool> ensure_knowledge(
    const Warehouse& w, const std::optional<KnowledgeTable>& cached) {
  if (cached && cached->row_count == w.size()) return {*cached, false};
  return {build_knowledge(w), true};
}

// z-scores against the global statistics; a constant feature maps to 0.
inline std::array<double, FeatureVector18::size> standardize(
    const FeatureVector18& f, const KnowledgeTable& kb) {
  std::array<double, FeatureVector18::size> z{};
  for (std::size_t j = 0; j < z.size(); ++j) {
    double sd = kb.global_std[j];
    z[j] = sd > 0 ? (f.values[j] - kb.global_mean[j]) / sd : 0.0;
  }
  return z;
}

}  // namespace psc
