// Command line front end: classify sequences against a warehouse, maintain
// the warehouse and its derived knowledge table, inspect features, and run
// ordering benchmarks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psc/psc.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 4;
constexpr int kExitInput = 2;
constexpr int kExitData = 3;

struct InputOpts {
  std::string seq;
  std::string fasta;
};

// One inline sequence under the id "input", or every record of a FASTA file.
std::vector<psc::FastaRecord> load_records(const InputOpts& in) {
  if (!in.seq.empty()) {
    return {{"input", psc::parse_sequence(in.seq)}};
  }
  return psc::load_fasta_file(in.fasta);
}

bool exactly_one_input(const InputOpts& in, const char* command) {
  if (in.seq.empty() == in.fasta.empty()) {
    std::cerr << "psc " << command << ": provide exactly one of --seq or --fasta\n";
    return false;
  }
  return true;
}

void add_input_options(CLI::App* cmd, InputOpts& in) {
  auto* seq = cmd->add_option("--seq", in.seq, "Sequence given inline");
  auto* fasta = cmd->add_option("--fasta", in.fasta, "FASTA file of sequences");
  seq->excludes(fasta);
}

struct TuningOpts {
  psc::CascadeConfig config;
  std::string order = "fuzzy-first";
};

void add_tuning_options(CLI::App* cmd, TuningOpts& t) {
  cmd->add_option("--order", t.order, "Phase ordering: fuzzy-first or neural-first")
      ->capture_default_str();
  cmd->add_option("--top-r", t.config.top_r, "Ranked features used by the range screen")
      ->capture_default_str();
  cmd->add_option("--theta", t.config.theta, "Fuzzy acceptance threshold")
      ->capture_default_str();
  cmd->add_option("--delta-frac", t.config.delta_frac,
                  "Shoulder width as a fraction of each range span")
      ->capture_default_str();
  cmd->add_option("--hidden-units", t.config.hidden_units, "Refiner hidden layer width")
      ->capture_default_str();
  cmd->add_option("--learning-rate", t.config.learning_rate, "Refiner learning rate")
      ->capture_default_str();
  cmd->add_option("--epochs", t.config.epochs, "Refiner training epochs")
      ->capture_default_str();
  cmd->add_option("--margin", t.config.margin_gamma,
                  "Probability margin for outright acceptance")
      ->capture_default_str();
  cmd->add_option("--k", t.config.k_neighbors, "Neighbours consulted by the vote")
      ->capture_default_str();
}

// Applies the textual --order value; false means a usage error was reported.
bool resolve_order(TuningOpts& t, const char* command) {
  auto parsed = psc::parse_ordering(t.order);
  if (!parsed) {
    std::cerr << "psc " << command << ": unknown ordering '" << t.order
              << "' (use fuzzy-first or neural-first)\n";
    return false;
  }
  t.config.order = *parsed;
  return true;
}

json result_json(const std::string& id, const psc::CascadeResult& r, bool with_times) {
  json trace = json::array();
  for (const auto& step : r.trace) {
    trace.push_back({{"phase", std::string(psc::to_string(step.phase))},
                     {"candidates", step.candidates},
                     {"ms", with_times ? step.ms : 0.0}});
  }
  return {{"id", id},
          {"family", r.family},
          {"resolved_by", std::string(psc::to_string(r.resolved_by))},
          {"total_ms", with_times ? r.total_ms : 0.0},
          {"trace", std::move(trace)}};
}

// ---- classify ----

struct ClassifyOpts {
  std::string warehouse;
  std::string kb;
  InputOpts input;
  TuningOpts tuning;
  bool as_json = false;
  bool force_rebuild = false;
  bool no_times = false;
};

int run_classify(ClassifyOpts& o) {
  if (!exactly_one_input(o.input, "classify")) return kExitUsage;
  if (!resolve_order(o.tuning, "classify")) return kExitUsage;

  auto warehouse = psc::Warehouse::load(o.warehouse);
  std::optional<psc::KnowledgeTable> cached;
  if (!o.force_rebuild && std::filesystem::exists(o.kb)) {
    cached = psc::KnowledgeTable::load(o.kb);
  }
  auto [kb, rebuilt] = psc::ensure_knowledge(warehouse, cached);
  std::cerr << "knowledge table: " << (rebuilt ? "rebuilt" : "cache hit")
            << " (countrow " << kb.row_count << ")\n";

  auto records = load_records(o.input);
  auto classifier =
      psc::CascadeClassifier::make(std::move(warehouse), std::move(kb), o.tuning.config);

  json out = json::array();
  for (const auto& record : records) {
    auto result = classifier.classify(record.sequence);
    if (o.as_json) {
      out.push_back(result_json(record.id, result, !o.no_times));
    } else {
      std::cout << record.id << '\t' << result.family << '\t'
                << psc::to_string(result.resolved_by) << '\t'
                << psc::format_fixed(o.no_times ? 0.0 : result.total_ms, 3) << '\n';
    }
  }
  if (o.as_json) std::cout << out.dump(2) << '\n';
  return 0;
}

// ---- insert ----

struct InsertOpts {
  std::string warehouse;
  std::string family;
  InputOpts input;
};

int run_insert(InsertOpts& o) {
  if (!exactly_one_input(o.input, "insert")) return kExitUsage;
  if (o.family.empty()) {
    std::cerr << "psc insert: --family must not be empty\n";
    return kExitUsage;
  }
  psc::Warehouse warehouse;
  if (std::filesystem::exists(o.warehouse)) {
    warehouse = psc::Warehouse::load(o.warehouse);
  } else {
    warehouse.set_path(o.warehouse);
  }
  for (const auto& record : load_records(o.input)) {
    psc::insert_row(warehouse, o.family, record.sequence);
  }
  std::cout << warehouse.size() << '\n';
  return 0;
}

// ---- build-kb ----

struct BuildKbOpts {
  std::string warehouse;
  std::string out;
};

int run_build_kb(const BuildKbOpts& o) {
  auto warehouse = psc::Warehouse::load(o.warehouse);
  auto kb = psc::build_knowledge(warehouse);
  kb.save(o.out);
  std::cout << "families\t" << kb.families().size() << '\n';
  std::cout << "rows\t" << kb.row_count << '\n';
  return 0;
}

// ---- features ----

struct FeaturesOpts {
  InputOpts input;
  bool pattern = false;
};

std::string pattern_slot_name(int slot) {
  if (slot < psc::PatternVector436::aa_slots) {
    return {psc::kResidueLetters[slot / psc::kResidueCount],
            psc::kResidueLetters[slot % psc::kResidueCount]};
  }
  int ex = slot - psc::PatternVector436::aa_slots;
  return "e" + std::to_string(ex / psc::kExchangeGroupCount + 1) + "e" +
         std::to_string(ex % psc::kExchangeGroupCount + 1);
}

void print_percent_row(const char* block, const std::string& label, std::size_t count,
                       std::size_t total) {
  double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) /
                                       static_cast<double>(total);
  std::cout << block << '\t' << label << '\t' << count << '\t'
            << psc::format_fixed(pct, 2) << "%\n";
}

void print_record_features(const psc::FastaRecord& record, bool with_pattern) {
  const auto& seq = record.sequence;
  std::cout << "id\t" << record.id << '\n';
  std::cout << "length\t" << seq.size() << '\n';
  std::cout << "total_mw\t" << psc::format_double(psc::total_molecular_weight(seq))
            << '\n';
  std::cout << "total_pi\t" << psc::format_double(psc::total_isoelectric_point(seq))
            << '\n';

  bool has_pairs = seq.size() >= 2;
  if (has_pairs) {
    auto f = psc::feature_vector(seq);
    for (int j = 0; j < psc::FeatureVector18::size; ++j) {
      std::cout << "feature\t" << psc::FeatureVector18::names[j] << '\t'
                << psc::format_double(f[j]) << '\n';
    }
  } else {
    std::cout << "note\tpair statistics need at least two residues\n";
    std::cout << "feature\tavg_mw\t"
              << psc::format_double(psc::average_molecular_weight(seq)) << '\n';
    std::cout << "feature\tavg_pi\t"
              << psc::format_double(psc::average_isoelectric_point(seq)) << '\n';
  }

  auto hydro = psc::hydropathy_counts(seq);
  const char* hydro_names[3] = {"Hydrophobic", "Hydrophilic", "Neutral"};
  for (std::size_t c = 0; c < 3; ++c) {
    print_percent_row("composition", hydro_names[c], hydro[c], seq.size());
  }
  auto pairs = psc::hydropathy_pair_counts(seq);
  std::size_t pair_total = seq.size() - 1;
  for (std::size_t s = 0; s < 9; ++s) {
    print_percent_row("distribution", psc::hydropathy_pair_name(s), pairs[s], pair_total);
  }
  std::cout << "exchange\t" << seq.exchange_rendering() << '\n';

  if (has_pairs) {
    for (const auto& [gram, count] : psc::two_gram_counts(seq)) {
      std::cout << "aa2\t" << gram << '\t' << count << '\n';
    }
    for (const auto& [gram, count] : psc::exchange_two_gram_counts(seq)) {
      std::cout << "ex2\t" << gram << '\t' << count << '\n';
    }
    if (with_pattern) {
      auto p = psc::pattern_vector(seq);
      for (int s = 0; s < psc::PatternVector436::size; ++s) {
        if (p.values[static_cast<std::size_t>(s)] == 0.0) continue;
        std::cout << "pattern\t" << pattern_slot_name(s) << '\t'
                  << psc::format_double(p.values[static_cast<std::size_t>(s)]) << '\n';
      }
    }
  }
}

int run_features(FeaturesOpts& o) {
  if (!exactly_one_input(o.input, "features")) return kExitUsage;
  auto records = load_records(o.input);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) std::cout << '\n';
    print_record_features(records[i], o.pattern);
  }
  return 0;
}

// ---- bench ----

struct BenchOpts {
  bool synthetic = false;
  std::string warehouse;
  int families = 5;
  int per_family = 500;
  int n = 500;
  std::uint64_t seed = 1;
  TuningOpts tuning;
  bool as_json = false;
  bool no_times = false;
  std::string out;
};

json bench_json(const psc::BenchReport& report, bool with_times) {
  json orderings = json::array();
  for (const auto& r : report.orderings) {
    orderings.push_back({{"order", std::string(psc::to_string(r.order))},
                         {"n", r.n},
                         {"phase1", r.resolved_by[0]},
                         {"phase2", r.resolved_by[1]},
                         {"phase3", r.resolved_by[2]},
                         {"accuracy", r.accuracy()},
                         {"mean_ms", with_times ? r.mean_ms : 0.0},
                         {"median_ms", with_times ? r.median_ms : 0.0}});
  }
  return {{"orderings", std::move(orderings)}};
}

int run_bench(BenchOpts& o) {
  if (o.synthetic == !o.warehouse.empty()) {
    std::cerr << "psc bench: provide exactly one of --synthetic or --warehouse\n";
    return kExitUsage;
  }
  if (o.families < 1 || o.per_family < 1 || o.n < 1) {
    std::cerr << "psc bench: --families, --per-family and --n must be positive\n";
    return kExitUsage;
  }
  if (!resolve_order(o.tuning, "bench")) return kExitUsage;
  o.tuning.config.seed = o.seed;

  psc::BenchReport report;
  if (o.synthetic) {
    psc::SyntheticSpec spec;
    spec.families = o.families;
    spec.per_family = o.per_family;
    spec.test_draws = o.n;
    spec.seed = o.seed;
    auto corpus = psc::make_synthetic_corpus(spec);
    auto kb = psc::build_knowledge(corpus.warehouse);
    auto ranking = psc::rank_features(corpus.warehouse);
    report = psc::bench(corpus.tests, corpus.warehouse, kb, ranking, o.tuning.config);
  } else {
    auto warehouse = psc::Warehouse::load(o.warehouse);
    auto kb = psc::build_knowledge(warehouse);
    psc::FeatureRanking ranking;
    try {
      ranking = psc::rank_features(warehouse);
    } catch (const psc::InsufficientData&) {
      ranking = psc::FeatureRanking::identity();
    }
    auto rng = psc::Rng::derive(o.seed, "bench:queries");
    std::vector<std::pair<std::string, psc::FeatureVector18>> queries;
    queries.reserve(static_cast<std::size_t>(o.n));
    for (int i = 0; i < o.n; ++i) {
      const auto& row = warehouse.rows()[rng.next_below(warehouse.size())];
      queries.emplace_back(row.family, row.features);
    }
    report = psc::bench_features(queries, warehouse, kb, ranking, o.tuning.config);
  }

  std::string rendered = o.as_json ? bench_json(report, !o.no_times).dump(2) + "\n"
                                   : report.tsv(!o.no_times);
  if (o.out.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw psc::StorageError("cannot write report file '" + o.out + "'");
    file << rendered;
  }
  return 0;
}

int dispatch(const CLI::App& app, ClassifyOpts& classify, InsertOpts& insert,
             BuildKbOpts& build_kb, FeaturesOpts& features, BenchOpts& bench) {
  if (app.got_subcommand("classify")) return run_classify(classify);
  if (app.got_subcommand("insert")) return run_insert(insert);
  if (app.got_subcommand("build-kb")) return run_build_kb(build_kb);
  if (app.got_subcommand("features")) return run_features(features);
  return run_bench(bench);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-phase protein family classifier"};
  app.require_subcommand(1);

  ClassifyOpts classify;
  auto* classify_cmd =
      app.add_subcommand("classify", "Classify sequences against a warehouse");
  classify_cmd->add_option("--warehouse", classify.warehouse, "Warehouse TSV file")
      ->required();
  classify_cmd->add_option("--kb", classify.kb, "Knowledge table file")->required();
  add_input_options(classify_cmd, classify.input);
  add_tuning_options(classify_cmd, classify.tuning);
  classify_cmd->add_option("--seed", classify.tuning.config.seed,
                           "Seed for refiner training")
      ->capture_default_str();
  classify_cmd->add_flag("--json", classify.as_json, "Emit JSON instead of TSV");
  classify_cmd->add_flag("--force-rebuild", classify.force_rebuild,
                         "Ignore the stored knowledge table");
  classify_cmd->add_flag("--no-times", classify.no_times,
                         "Render timing fields as zero");

  InsertOpts insert;
  auto* insert_cmd =
      app.add_subcommand("insert", "Add labelled sequences to a warehouse");
  insert_cmd->add_option("--warehouse", insert.warehouse, "Warehouse TSV file")
      ->required();
  insert_cmd->add_option("--family", insert.family, "Family label for the rows")
      ->required();
  add_input_options(insert_cmd, insert.input);

  BuildKbOpts build_kb;
  auto* build_kb_cmd =
      app.add_subcommand("build-kb", "Derive and store the knowledge table");
  build_kb_cmd->add_option("--warehouse", build_kb.warehouse, "Warehouse TSV file")
      ->required();
  build_kb_cmd->add_option("--out", build_kb.out, "Knowledge table output file")
      ->required();

  FeaturesOpts features;
  auto* features_cmd =
      app.add_subcommand("features", "Report the extracted features of sequences");
  add_input_options(features_cmd, features.input);
  features_cmd->add_flag("--pattern", features.pattern,
                         "Also list the nonzero 436-slot pattern entries");

  BenchOpts bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Compare phase orderings on a corpus");
  bench_cmd->add_flag("--synthetic", bench.synthetic, "Generate a synthetic corpus");
  bench_cmd->add_option("--warehouse", bench.warehouse,
                        "Bench over rows drawn from this warehouse");
  bench_cmd->add_option("--families", bench.families, "Synthetic family count")
      ->capture_default_str();
  bench_cmd->add_option("--per-family", bench.per_family,
                        "Synthetic rows per family")
      ->capture_default_str();
  bench_cmd->add_option("--n", bench.n, "Number of queries")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Corpus and training seed")
      ->capture_default_str();
  add_tuning_options(bench_cmd, bench.tuning);
  bench_cmd->add_flag("--json", bench.as_json, "Emit JSON instead of TSV");
  bench_cmd->add_flag("--no-times", bench.no_times, "Render timing fields as zero");
  bench_cmd->add_option("--out", bench.out, "Write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return dispatch(app, classify, insert, build_kb, features, bench);
  } catch (const psc::EmptyWarehouse& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const psc::InsufficientData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const psc::InsufficientCandidates& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const psc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
