#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "psc/config.hpp"
#include "psc/fuzzy.hpp"
#include "psc/mlp.hpp"
#include "psc/neighborhood.hpp"
#include "psc/ranking.hpp"
#include "psc/sequence.hpp"
#include "psc/warehouse.hpp"

namespace psc {

// Phase identity names the model, in default execution order: the fuzzy
// range screen, the neural refiner, the nearest-neighbour vote. Under the
// reversed ordering the labels keep their model meaning; the trace shows the
// actual execution order.
enum class Phase { phase1 = 1, phase2 = 2, phase3 = 3 };

constexpr std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::phase1: return "phase1";
    case Phase::phase2: return "phase2";
    default: return "phase3";
  }
}

struct PhaseStep {
  Phase phase;
  std::vector<std::string> candidates;  // surviving set after the phase ran
  double ms = 0;
};

struct CascadeResult {
  std::string family;
  Phase resolved_by = Phase::phase1;
  std::vector<PhaseStep> trace;
  double total_ms = 0;
};

// Decision semantics only, no timing: equal when the same family was chosen
// the same way through the same candidate sets.
inline bool same_decision(const CascadeResult& a, const CascadeResult& b) {
  if (a.family != b.family || a.resolved_by != b.resolved_by) return false;
  if (a.trace.size() != b.trace.size()) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    if (a.trace[i].phase != b.trace[i].phase) return false;
    if (a.trace[i].candidates != b.trace[i].candidates) return false;
  }
  return true;
}

struct Phase2Outcome {
  bool accepted = false;
  std::string family;                 // set when accepted
  std::vector<std::string> reduced;   // set when not accepted; sorted
  std::vector<double> probabilities;  // aligned with the sorted candidate list
};

// Accept outright only on a clear winner: top probability leads the runner-up
// by at least margin_gamma. Otherwise keep every candidate scoring at least
// the uniform chance 1/n, which always retains the top one.
inline Phase2Outcome phase2_decide(const std::vector<double>& probabilities,
                                   const std::vector<std::string>& candidates,
                                   const CascadeConfig& config) {
  Phase2Outcome out;
  out.probabilities = probabilities;
  std::size_t top = 0;
  for (std::size_t k = 1; k < probabilities.size(); ++k) {
    if (probabilities[k] > probabilities[top]) top = k;
  }
  double runner_up = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (k != top) runner_up = std::max(runner_up, probabilities[k]);
  }
  if (probabilities[top] - runner_up >= config.margin_gamma) {
    out.accepted = true;
    out.family = candidates[top];
    return out;
  }
  double uniform = 1.0 / static_cast<double>(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (probabilities[k] >= uniform) out.reduced.push_back(candidates[k]);
  }
  return out;
}

namespace detail {

inline std::string candidate_key(const std::vector<std::string>& sorted_candidates,
                                 std::size_t row_count) {
  std::string key;
  for (const auto& c : sorted_candidates) {
    key += c;
    key += '\x1f';
  }
  key += '#';
  key += std::to_string(row_count);
  return key;
}

}  // namespace detail

// Refine a candidate set with a network trained on those families' rows.
// Trains from scratch on every call; the classifier below adds the cache.
inline Phase2Outcome phase2_neural(const FeatureVector18& f, const Warehouse& w,
                                   const KnowledgeTable& kb,
                                   std::vector<std::string> candidates,
                                   const CascadeConfig& config) {
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() < 2) {
    throw InsufficientCandidates("neural refinement needs at least two candidates");
  }
  std::map<std::string, int> label_of;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    label_of[candidates[k]] = static_cast<int>(k);
  }
  std::vector<LabeledSample> samples;
  for (const auto& row : w.rows()) {
    auto it = label_of.find(row.family);
    if (it == label_of.end()) continue;
    samples.push_back({standardize(row.features, kb), it->second});
  }
  std::uint64_t seed =
      Rng::derive(config.seed, detail::candidate_key(candidates, kb.row_count)).next_u64();
  auto model = train_mlp(samples, candidates, config, seed);
  return phase2_decide(model.predict(standardize(f, kb)), candidates, config);
}

// The three-phase classifier over one warehouse snapshot. Queries are
// const and thread-safe; trained refinement models are cached per candidate
// set for the life of the snapshot.
class CascadeClassifier {
 public:
  struct Stats {
    std::uint64_t phase1_calls = 0;
    std::uint64_t phase2_calls = 0;
    std::uint64_t phase2_trainings = 0;
    std::uint64_t phase3_calls = 0;
  };

  CascadeClassifier(Warehouse warehouse, KnowledgeTable kb, FeatureRanking ranking,
                    CascadeConfig config)
      : warehouse_(std::move(warehouse)),
        kb_(std::move(kb)),
        ranking_(ranking),
        config_(config),
        families_(kb_.families()) {
    if (warehouse_.empty()) throw EmptyWarehouse();
    if (kb_.row_count != warehouse_.size()) {
      throw Error("knowledge table is stale: countrow " +
                  std::to_string(kb_.row_count) + " vs " +
                  std::to_string(warehouse_.size()) + " rows");
    }
  }

  // Derives the ranking itself, falling back to position order when the
  // warehouse is too small to score features.
  static CascadeClassifier make(Warehouse warehouse, KnowledgeTable kb,
                                CascadeConfig config) {
    FeatureRanking ranking;
    try {
      ranking = rank_features(warehouse);
    } catch (const InsufficientData&) {
      ranking = FeatureRanking::identity();
    }
    return CascadeClassifier(std::move(warehouse), std::move(kb), ranking, config);
  }

  CascadeResult classify(const ProteinSequence& seq) const {
    auto start = Clock::now();
    auto f = feature_vector(seq);
    return finish_classify(f, start);
  }

  // Classification of an already-extracted feature row.
  CascadeResult classify_features(const FeatureVector18& f) const {
    return finish_classify(f, Clock::now());
  }

  Stats stats() const {
    return {phase1_calls_.load(), phase2_calls_.load(), phase2_trainings_.load(),
            phase3_calls_.load()};
  }

  void reset_stats() const {
    phase1_calls_ = 0;
    phase2_calls_ = 0;
    phase2_trainings_ = 0;
    phase3_calls_ = 0;
  }

  const Warehouse& warehouse() const { return warehouse_; }
  const KnowledgeTable& knowledge() const { return kb_; }
  const FeatureRanking& ranking() const { return ranking_; }
  const CascadeConfig& config() const { return config_; }

 private:
  using Clock = std::chrono::steady_clock;

  static double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  }

  CascadeResult finish_classify(const FeatureVector18& f, Clock::time_point start) const {
    CascadeResult result;
    if (config_.order == Ordering::fuzzy_first) {
      run_fuzzy_first(f, result);
    } else {
      run_neural_first(f, result);
    }
    result.total_ms = ms_since(start);
    return result;
  }

  void run_fuzzy_first(const FeatureVector18& f, CascadeResult& result) const {
    auto candidates = timed_phase1(f, nullptr, result);
    if (candidates.size() == 1) {
      result.family = candidates.front();
      result.resolved_by = Phase::phase1;
      return;
    }
    if (candidates.empty()) {
      // Nothing fits the ranges; fall through to a vote over every family.
      result.family = timed_phase3(f, nullptr, result);
      result.resolved_by = Phase::phase3;
      return;
    }
    auto outcome = timed_phase2(f, candidates, result);
    if (outcome.accepted) {
      result.family = outcome.family;
      result.resolved_by = Phase::phase2;
      return;
    }
    result.family = timed_phase3(f, &outcome.reduced, result);
    result.resolved_by = Phase::phase3;
  }

  // Same gating with the neural refiner in front: it sees every family, its
  // surviving set feeds the fuzzy screen, leftovers go to the vote.
  void run_neural_first(const FeatureVector18& f, CascadeResult& result) const {
    std::vector<std::string> pool = families_;
    if (families_.size() >= 2) {
      auto outcome = timed_phase2(f, families_, result);
      if (outcome.accepted) {
        result.family = outcome.family;
        result.resolved_by = Phase::phase2;
        return;
      }
      pool = outcome.reduced;
    }
    auto candidates = timed_phase1(f, &pool, result);
    if (candidates.size() == 1) {
      result.family = candidates.front();
      result.resolved_by = Phase::phase1;
      return;
    }
    if (candidates.empty()) {
      result.family = timed_phase3(f, nullptr, result);
      result.resolved_by = Phase::phase3;
      return;
    }
    result.family = timed_phase3(f, &candidates, result);
    result.resolved_by = Phase::phase3;
  }

  std::vector<std::string> timed_phase1(const FeatureVector18& f,
                                        const std::vector<std::string>* candidates,
                                        CascadeResult& result) const {
    auto t0 = Clock::now();
    phase1_calls_++;
    auto survivors = phase1_fuzzy(f, kb_, ranking_, config_, candidates);
    result.trace.push_back({Phase::phase1, survivors, ms_since(t0)});
    return survivors;
  }

  Phase2Outcome timed_phase2(const FeatureVector18& f,
                             const std::vector<std::string>& candidates,
                             CascadeResult& result) const {
    auto t0 = Clock::now();
    phase2_calls_++;
    auto model = cached_model(candidates);
    auto outcome = phase2_decide(model->predict(standardize(f, kb_)), candidates, config_);
    auto survivors = outcome.accepted ? std::vector<std::string>{outcome.family}
                                      : outcome.reduced;
    result.trace.push_back({Phase::phase2, std::move(survivors), ms_since(t0)});
    return outcome;
  }

  std::string timed_phase3(const FeatureVector18& f,
                           const std::vector<std::string>* candidates,
                           CascadeResult& result) const {
    auto t0 = Clock::now();
    phase3_calls_++;
    auto family = phase3_neighborhood(f, warehouse_, kb_, candidates, config_);
    result.trace.push_back({Phase::phase3, {family}, ms_since(t0)});
    return family;
  }

  // candidates must be sorted (phase1 output and families() both are).
  std::shared_ptr<const MlpModel> cached_model(
      const std::vector<std::string>& candidates) const {
    auto key = detail::candidate_key(candidates, kb_.row_count);
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      auto it = model_cache_.find(key);
      if (it != model_cache_.end()) return it->second;
    }
    std::map<std::string, int> label_of;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      label_of[candidates[k]] = static_cast<int>(k);
    }
    std::vector<LabeledSample> samples;
    for (const auto& row : warehouse_.rows()) {
      auto it = label_of.find(row.family);
      if (it == label_of.end()) continue;
      samples.push_back({standardize(row.features, kb_), it->second});
    }
    phase2_trainings_++;
    auto model = std::make_shared<const MlpModel>(
        train_mlp(samples, candidates, config_, Rng::derive(config_.seed, key).next_u64()));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto [it, inserted] = model_cache_.try_emplace(key, model);
    return it->second;
  }

  Warehouse warehouse_;
  KnowledgeTable kb_;
  FeatureRanking ranking_;
  CascadeConfig config_;
  std::vector<std::string> families_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, std::shared_ptr<const MlpModel>> model_cache_;
  mutable std::atomic<std::uint64_t> phase1_calls_{0};
  mutable std::atomic<std::uint64_t> phase2_calls_{0};
  mutable std::atomic<std::uint64_t> phase2_trainings_{0};
  mutable std::atomic<std::uint64_t> phase3_calls_{0};
};

}  // namespace psc
