#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "psc/cascade.hpp"
#include "psc/config.hpp"
#include "psc/text.hpp"

namespace psc {

struct OrderingReport {
  Ordering order = Ordering::fuzzy_first;
  std::size_t n = 0;
  std::array<std::size_t, 3> resolved_by{};  // indexed by phase - 1
  std::size_t correct = 0;
  double mean_ms = 0;
  double median_ms = 0;

  double accuracy() const {
    return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
  }
};

struct BenchReport {
  std::array<OrderingReport, 2> orderings;  // fuzzy-first, then neural-first

  // One header plus one row per ordering. Timing columns print as zero when
  // include_times is off, for run-to-run comparable output.
  std::string tsv(bool include_times = true) const {
    std::string out = "order\tn\tphase1\tphase2\tphase3\taccuracy\tmean_ms\tmedian_ms\n";
    for (const auto& r : orderings) {
      out += std::string(to_string(r.order)) + '\t' + std::to_string(r.n);
      for (auto count : r.resolved_by) out += '\t' + std::to_string(count);
      out += '\t' + format_fixed(r.accuracy(), 4);
      out += '\t' + format_fixed(include_times ? r.mean_ms : 0.0, 3);
      out += '\t' + format_fixed(include_times ? r.median_ms : 0.0, 3);
      out += '\n';
    }
    return out;
  }
};

namespace detail {

template <typename Query, typename Classify>
OrderingReport bench_ordering(const std::vector<std::pair<std::string, Query>>& corpus,
                              const CascadeClassifier& classifier, Classify&& classify) {
  OrderingReport report;
  report.order = classifier.config().order;
  report.n = corpus.size();
  std::vector<double> times;
  times.reserve(corpus.size());
  for (const auto& [family, query] : corpus) {
    CascadeResult r = classify(classifier, query);
    report.resolved_by[static_cast<std::size_t>(r.resolved_by) - 1]++;
    if (r.family == family) report.correct++;
    times.push_back(r.total_ms);
  }
  if (!times.empty()) {
    double sum = 0;
    for (double t : times) sum += t;
    report.mean_ms = sum / static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    std::size_t mid = times.size() / 2;
    report.median_ms = times.size() % 2 ? times[mid] : (times[mid - 1] + times[mid]) / 2.0;
  }
  return report;
}

template <typename Query, typename Classify>
BenchReport bench_corpus(const std::vector<std::pair<std::string, Query>>& corpus,
                         const Warehouse& w, const KnowledgeTable& kb,
                         const FeatureRanking& ranking, const CascadeConfig& base,
                         Classify&& classify) {
  BenchReport report;
  std::array<Ordering, 2> orders{Ordering::fuzzy_first, Ordering::neural_first};
  for (std::size_t i = 0; i < orders.size(); ++i) {
    CascadeConfig config = base;
    config.order = orders[i];
    CascadeClassifier classifier(w, kb, ranking, config);
    report.orderings[i] = bench_ordering(corpus, classifier, classify);
  }
  return report;
}

}  // namespace detail

// Run the labelled corpus through both phase orderings on one warehouse.
inline BenchReport bench(const std::vector<std::pair<std::string, ProteinSequence>>& corpus,
                         const Warehouse& w, const KnowledgeTable& kb,
                         const FeatureRanking& ranking, const CascadeConfig& base) {
  return detail::bench_corpus(corpus, w, kb, ranking, base,
                              [](const CascadeClassifier& c, const ProteinSequence& s) {
                                return c.classify(s);
                              });
}

// Same over pre-extracted feature rows.
inline BenchReport bench_features(
    const std::vector<std::pair<std::string, FeatureVector18>>& corpus, const Warehouse& w,
    const KnowledgeTable& kb, const FeatureRanking& ranking, const CascadeConfig& base) {
  return detail::bench_corpus(corpus, w, kb, ranking, base,
                              [](const CascadeClassifier& c, const FeatureVector18& f) {
                                return c.classify_features(f);
                              });
}

}  // namespace psc
