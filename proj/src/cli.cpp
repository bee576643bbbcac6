#include "privpred/cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "privpred/pipeline.hpp"

namespace privpred {
namespace {

namespace fs = std::filesystem;

// Flag values are kept as optionals so only flags that were given override the config.
struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  std::optional<std::string> fc8, features_layer, features_path, user_tags, deep_tags, labels, lexicon, stopwords,
      wordnet_dir, images;
  std::optional<std::size_t> k, max_tokens, category_count, min_df, top, threshold;
  std::optional<int> outer_folds, cv_folds, depth;
  std::optional<std::string> representation, tag_source, encoding, enrichment, klass;
  std::vector<std::string> focus;
  bool compare_enrichment = false;
  bool standardize = false;
};

void add_inputs(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--labels", o.labels, "CSV of id,label");
  cmd->add_option("--user-tags", o.user_tags, "user tag table (JSONL)");
  cmd->add_option("--deep-tags", o.deep_tags, "deep tag table (JSONL)");
  cmd->add_option("--fc8", o.fc8, "fc8 feature table (JSONL)");
  cmd->add_option("--lexicon", o.lexicon, "category names, one per line");
  cmd->add_option("--category-count", o.category_count, "expected lexicon size");
  cmd->add_option("--stopwords", o.stopwords, "stopword list");
  cmd->add_option("--k", o.k, "deep tags per image");
  cmd->add_option("--max-tokens", o.max_tokens, "longest user tag kept, in tokens");
}

void add_tag_source(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--tag-source", o.tag_source, "user | deep | combined");
}

void add_wordnet(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--wordnet-dir", o.wordnet_dir, "WordNet dict directory");
  cmd->add_option("--enrichment,--relation", o.enrichment, "off | synonym | hypernym | hyponym");
  cmd->add_option("--depth", o.depth, "expansion depth in hops");
}

RunConfig build_config(const Overrides& o) {
  RunConfig cfg = o.config ? load_run_config(*o.config) : RunConfig{};
  const auto path = [](const std::optional<std::string>& text) { return std::optional<fs::path>(fs::path(*text)); };
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out = *o.out;
  if (o.fc8) cfg.features["fc8"] = *o.fc8;
  if (o.features_path) cfg.features[o.features_layer.value_or("fc8")] = *o.features_path;
  if (o.user_tags) cfg.user_tags = path(o.user_tags);
  if (o.deep_tags) cfg.deep_tags = path(o.deep_tags);
  if (o.labels) cfg.labels = path(o.labels);
  if (o.lexicon) cfg.lexicon = path(o.lexicon);
  if (o.stopwords) cfg.stopwords = path(o.stopwords);
  if (o.wordnet_dir) cfg.wordnet_dir = path(o.wordnet_dir);
  if (o.images) cfg.images = path(o.images);
  if (o.k) cfg.k = *o.k;
  if (o.max_tokens) cfg.max_tokens = *o.max_tokens;
  if (o.category_count) cfg.category_count = *o.category_count;
  if (o.min_df) cfg.min_df = *o.min_df;
  if (o.top) cfg.top_n = *o.top;
  if (o.threshold) cfg.graph_threshold = *o.threshold;
  if (o.outer_folds) cfg.outer_folds = *o.outer_folds;
  if (o.cv_folds) cfg.cv_folds = *o.cv_folds;
  if (o.depth) cfg.enrichment_depth = *o.depth;
  if (o.representation) cfg.representation = to_lower(*o.representation);
  if (o.tag_source) cfg.tag_source = parse_tag_source(*o.tag_source);
  if (o.encoding) {
    const auto enc = to_lower(*o.encoding);
    if (enc != "binary" && enc != "count") throw InputError("encoding must be binary or count");
    cfg.encoding = enc == "count" ? TagEncoding::Count : TagEncoding::Binary;
  }
  if (o.enrichment) {
    const auto text = to_lower(*o.enrichment);
    cfg.enrichment = text == "off" ? std::nullopt : std::optional(wordnet::parse_relation(text));
  }
  if (o.klass) cfg.analysis_class = parse_label(*o.klass);
  if (!o.focus.empty()) cfg.focus = TagSet(o.focus.begin(), o.focus.end());
  if (o.compare_enrichment) cfg.compare_enrichment = true;
  if (o.standardize) cfg.standardize = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Image privacy prediction from deep features and tags", "privpred"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "seed for every random choice");
  app.add_option("--out", o.out, "output directory");

  std::function<void(const RunConfig&)> action;

  auto* annotate = app.add_subcommand("annotate", "top-k deep tags and cleaned user tags");
  add_inputs(annotate, o);
  annotate->callback([&] { action = [&](const RunConfig& cfg) { cmd_annotate(cfg, err); }; });

  auto* featurize = app.add_subcommand("featurize", "tag vocabulary and bag-of-tags vectors");
  add_inputs(featurize, o);
  add_tag_source(featurize, o);
  featurize->add_option("--encoding", o.encoding, "binary | count");
  featurize->add_option("--min-df", o.min_df, "minimum training document frequency");
  featurize->add_option("--outer-folds", o.outer_folds, "outer stratified folds");
  featurize->callback([&] { action = [&](const RunConfig& cfg) { cmd_featurize(cfg, err); }; });

  auto* experiment = app.add_subcommand("experiment", "split, grid search, retrain and test");
  add_inputs(experiment, o);
  add_tag_source(experiment, o);
  add_wordnet(experiment, o);
  experiment->add_option("--representation", o.representation, "tags or a feature layer name");
  experiment->add_option("--features", o.features_path, "feature table for --layer");
  experiment->add_option("--layer", o.features_layer, "layer name of --features");
  experiment->add_option("--encoding", o.encoding, "binary | count");
  experiment->add_option("--min-df", o.min_df, "minimum training document frequency");
  experiment->add_option("--outer-folds", o.outer_folds, "outer stratified folds");
  experiment->add_option("--cv-folds", o.cv_folds, "cross-validation folds on Train");
  experiment->add_flag("--standardize", o.standardize, "z-score dense features");
  experiment->add_flag("--compare-enrichment", o.compare_enrichment, "also run with enriched tags");
  experiment->callback([&] { action = [&](const RunConfig& cfg) { cmd_experiment(cfg, err); }; });

  auto* tags = app.add_subcommand("tags", "tag analytics");
  tags->require_subcommand(1);
  const auto tag_command = [&](const char* name, const char* about, auto fn) {
    auto* cmd = tags->add_subcommand(name, about);
    add_inputs(cmd, o);
    add_tag_source(cmd, o);
    cmd->callback([&action, &err, fn] { action = [&err, fn](const RunConfig& cfg) { fn(cfg, err); }; });
    return cmd;
  };
  auto* ig = tag_command("ig", "information gain ranking", &cmd_tags_ig);
  ig->add_option("--outer-folds", o.outer_folds, "outer stratified folds");
  ig->add_option("--cv-folds", o.cv_folds, "folds averaged over");
  auto* cloud = tag_command("cloud", "most frequent tags of one class", &cmd_tags_cloud);
  cloud->add_option("--class", o.klass, "public | private");
  cloud->add_option("--top", o.top, "rows to keep");
  auto* graph = tag_command("graph", "tag co-occurrence graph of one class", &cmd_tags_graph);
  graph->add_option("--class", o.klass, "public | private");
  graph->add_option("--threshold", o.threshold, "smallest edge weight kept");
  graph->add_option("--focus", o.focus, "restrict to edges touching these tags");

  auto* wordnet_cmd = app.add_subcommand("wordnet", "WordNet tools");
  wordnet_cmd->require_subcommand(1);
  auto* expand = wordnet_cmd->add_subcommand("expand", "expand a tag table with related lemmas");
  expand->add_option("--tags", o.user_tags, "tag table (JSONL)");
  expand->add_option("--stopwords", o.stopwords, "stopword list");
  add_wordnet(expand, o);
  expand->callback([&] { action = [&](const RunConfig& cfg) { cmd_wordnet_expand(cfg, err); }; });

  std::size_t gist_warnings = 0;
  auto* gist = app.add_subcommand("gist", "GIST descriptors of a directory of PGM images");
  gist->add_option("--images", o.images, "directory of .pgm files");
  gist->callback([&] { action = [&](const RunConfig& cfg) { gist_warnings = cmd_gist(cfg, err); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const RunConfig cfg = build_config(o);
    action(cfg);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const ComputeError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (gist_warnings > 0) err << "warnings: " << gist_warnings << '\n';
  return 0;
}

}  // namespace privpred
