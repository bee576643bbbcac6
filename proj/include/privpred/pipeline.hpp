#ifndef PRIVPRED_PIPELINE_HPP
#define PRIVPRED_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "privpred/annotate.hpp"
#include "privpred/corpus.hpp"
#include "privpred/eval.hpp"
#include "privpred/taglab.hpp"
#include "privpred/wordnet.hpp"

namespace privpred {

struct RunConfig {
  // inputs
  std::map<std::string, std::filesystem::path> features;  // layer -> feature table
  std::optional<std::filesystem::path> user_tags;
  std::optional<std::filesystem::path> deep_tags;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> wordnet_dir;
  std::optional<std::filesystem::path> images;
  std::size_t category_count = kDefaultCategoryCount;

  // protocol
  std::uint64_t seed = 0;
  std::size_t k = 10;
  std::size_t max_tokens = 4;
  GridSpec grid = GridSpec::defaults();
  int outer_folds = 6;
  int cv_folds = 5;
  double tol = 1e-3;

  // representation
  std::string representation = "tags";  // "tags" or a dense layer name
  TagSource tag_source = TagSource::Combined;
  TagEncoding encoding = TagEncoding::Binary;
  std::size_t min_df = 1;
  bool standardize = false;
  std::optional<wordnet::Relation> enrichment;
  int enrichment_depth = 1;
  std::vector<std::string> wordnet_parts{"noun"};
  bool compare_enrichment = false;

  // tag analytics
  PrivacyLabel analysis_class = PrivacyLabel::Private;
  std::size_t top_n = 100;
  std::size_t graph_threshold = 2;
  TagSet focus;

  std::filesystem::path out = ".";

  void validate() const;
  // Canonical form used for the metadata hash; the output directory is excluded.
  nlohmann::ordered_json to_json() const;
  std::string metadata_line() const;
};

// Reads a JSON run configuration; relative paths resolve against the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
void apply_run_config(RunConfig& cfg, const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct Corpus {
  Dataset data;
  std::unordered_set<std::string> user_tagged;  // ids present in the user tag table
};

// Loads everything the configuration names: feature layers, normalized user tags,
// deep tags (file or top-k annotation of fc8), labels, and the prob layer when needed.
Corpus assemble_corpus(const RunConfig& cfg);

// Labelled records carrying the data the configured representation needs.
std::vector<std::size_t> experiment_rows(const Corpus& corpus, const RunConfig& cfg);

struct ProtocolResult {
  GridResult grid;
  EvalReport report;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct ExperimentOutcome {
  ProtocolResult primary;
  std::optional<ProtocolResult> enriched;
};

// Outer stratified split, grid search on Train, retrain with the winner, evaluate on Test.
template <Representation R>
ProtocolResult run_protocol(const R& rep, std::span<const PrivacyLabel> labels, std::span<const int> fold_of_row,
                            const RunConfig& cfg) {
  const TrainTestSplit split = holdout_split(fold_of_row, cfg.outer_folds);
  TrainConfig base;
  base.tol = cfg.tol;
  ProtocolResult out;
  out.grid = grid_search_cv(rep, labels, split.train, cfg.grid, cfg.cv_folds, cfg.seed, base);
  const auto [train_samples, test_samples] = rep.materialize(split.train, split.test);
  const std::vector<int> train_y = detail::signs_of(labels, split.train);
  const auto model =
      train(std::span<const typename R::Sample>(train_samples), std::span<const int>(train_y), out.grid.best);
  std::vector<PrivacyLabel> truth;
  for (const auto r : split.test) truth.push_back(labels[r]);
  out.report = evaluate(model, std::span<const typename R::Sample>(test_samples), std::span<const PrivacyLabel>(truth));
  out.train_size = split.train.size();
  out.test_size = split.test.size();
  return out;
}

std::optional<std::filesystem::path> resolve_wordnet_dir(const RunConfig& cfg);

// Subcommands. Each writes its files under cfg.out, every file starting with the
// metadata line.
void cmd_annotate(const RunConfig& cfg, std::ostream& log);
void cmd_featurize(const RunConfig& cfg, std::ostream& log);
ExperimentOutcome cmd_experiment(const RunConfig& cfg, std::ostream& log);
void cmd_tags_ig(const RunConfig& cfg, std::ostream& log);
void cmd_tags_cloud(const RunConfig& cfg, std::ostream& log);
void cmd_tags_graph(const RunConfig& cfg, std::ostream& log);
void cmd_wordnet_expand(const RunConfig& cfg, std::ostream& log);
// Returns the number of images skipped with a warning.
std::size_t cmd_gist(const RunConfig& cfg, std::ostream& log);

// Two-row comparison in the layout of the enrichment results table.
void write_comparison_csv(std::ostream& out, const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace privpred

#endif  // PRIVPRED_PIPELINE_HPP
