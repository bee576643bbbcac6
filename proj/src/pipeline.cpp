#include "privpred/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "privpred/gist.hpp"

namespace privpred {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

fs::path resolve(const fs::path& base, const std::string& text) {
  const fs::path p(text);
  return p.is_absolute() || base.empty() ? p : base / p;
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw InputError("cannot create output directory '" + cfg.out.string() + "'");
  std::ofstream out(cfg.out / name, std::ios::binary);
  if (!out) throw InputError("cannot write '" + (cfg.out / name).string() + "'");
  out << cfg.metadata_line() << '\n';
  return out;
}

const fs::path& require(const std::optional<fs::path>& path, const char* what) {
  if (!path) throw InputError(std::string("missing required input: ") + what);
  if (!fs::exists(*path)) throw InputError(std::string(what) + " not found: " + path->string());
  return *path;
}

AnnotationConfig annotation_config(const RunConfig& cfg) {
  AnnotationConfig a;
  a.k = cfg.k;
  a.max_tokens = cfg.max_tokens;
  if (cfg.stopwords) a.stopwords = load_stopwords(require(cfg.stopwords, "stopword file"));
  a.validate();
  return a;
}

std::string relation_title(wordnet::Relation relation) {
  switch (relation) {
    case wordnet::Relation::Synonym:
      return "Synonym";
    case wordnet::Relation::Hypernym:
      return "Hypernym";
    case wordnet::Relation::Hyponym:
      return "Hyponym";
  }
  return "Hypernym";
}

std::string source_title(TagSource source) {
  switch (source) {
    case TagSource::User:
      return "User Tags";
    case TagSource::Deep:
      return "Deep Tags";
    case TagSource::Combined:
      break;
  }
  return "Deep + User Tags";
}

bool is_tag_representation(const RunConfig& cfg) { return cfg.representation == "tags"; }

struct RowData {
  std::vector<std::size_t> rows;
  std::vector<PrivacyLabel> labels;
  std::vector<int> outer_fold;
};

RowData select_rows(const Corpus& corpus, const RunConfig& cfg) {
  RowData rd;
  rd.rows = experiment_rows(corpus, cfg);
  std::vector<LabelEntry> entries;
  for (const auto r : rd.rows) {
    rd.labels.push_back(*corpus.data[r].label);
    entries.push_back({corpus.data[r].id, *corpus.data[r].label});
  }
  const FoldAssignment folds =
      stratified_folds(entries, cfg.outer_folds, derive_seed(cfg.seed, SeedPurpose::OuterSplit));
  for (const auto r : rd.rows) rd.outer_fold.push_back(folds.fold_of.at(corpus.data[r].id));
  return rd;
}

std::vector<TagSet> expand_all(const std::vector<TagSet>& sets, const wordnet::Lexicon& lexicon,
                               const wordnet::ExpansionSpec& spec, const AnnotationConfig& cleaning) {
  std::vector<TagSet> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(wordnet::expand_tagset(s, lexicon, spec, cleaning));
  return out;
}

void log_protocol(std::ostream& log, const std::string& name, const ProtocolResult& result) {
  const auto& best = result.grid.best;
  log << name << ": train=" << result.train_size << " test=" << result.test_size
      << " chosen kernel=" << to_string(best.kernel.kind);
  if (best.kernel.kind == KernelKind::Rbf)
    log << " gamma=" << (best.kernel.gamma ? format_double(*best.kernel.gamma) : std::string("auto"));
  log << " C=" << format_double(best.c) << " accuracy=" << format_double(result.report.accuracy) << '\n';
}

void write_protocol_files(const RunConfig& cfg, const std::string& suffix, const std::string& title,
                          const ProtocolResult& result) {
  {
    auto out = open_output(cfg, "report" + suffix + ".txt");
    const auto& best = result.grid.best;
    out << "features " << title << '\n';
    out << "train " << result.train_size << '\n';
    out << "test " << result.test_size << '\n';
    out << "kernel " << to_string(best.kernel.kind) << '\n';
    if (best.kernel.kind == KernelKind::Rbf)
      out << "gamma " << (best.kernel.gamma ? format_double(*best.kernel.gamma) : std::string("auto")) << '\n';
    out << "c " << format_double(best.c) << '\n';
    write_report(out, result.report);
  }
  {
    auto out = open_output(cfg, "pr_curve" + suffix + ".csv");
    write_pr_curve_csv(out, result.report.pr_curve);
  }
  {
    auto out = open_output(cfg, "cv_table" + suffix + ".csv");
    write_cv_table_csv(out, result.grid.table);
  }
}

std::vector<TaggedRecord> tagged_records(const Corpus& corpus, const RunConfig& cfg,
                                         std::span<const std::size_t> rows) {
  std::vector<TaggedRecord> out;
  for (const auto r : rows) {
    const auto& rec = corpus.data[r];
    TagSet tags;
    switch (cfg.tag_source) {
      case TagSource::User:
        tags = rec.user_tags;
        break;
      case TagSource::Deep:
        tags = rec.deep_tags;
        break;
      case TagSource::Combined:
        tags = combine_tagsets(rec.user_tags, rec.deep_tags);
        break;
    }
    out.push_back({std::move(tags), *rec.label});
  }
  return out;
}

RunConfig tag_config(RunConfig cfg) {
  cfg.representation = "tags";
  return cfg;
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  if (outer_folds < 2 || cv_folds < 2) throw InputError("config: fold counts must be at least 2");
  if (k < 1) throw InputError("config: k must be at least 1");
  if (enrichment_depth < 1) throw InputError("config: enrichment depth must be at least 1");
  if (!(tol > 0.0)) throw InputError("config: tol must be positive");
  if (!is_tag_representation(*this) && !is_known_layer(representation))
    throw InputError("config: unknown representation '" + representation + "'");
  grid.validate();
  for (const auto& [layer, path] : features)
    if (!is_known_layer(layer)) throw InputError("config: unknown feature layer '" + layer + "'");
}

ordered_json RunConfig::to_json() const {
  ordered_json doc;
  ordered_json feature_paths = ordered_json::object();
  for (const auto& [layer, path] : features) feature_paths[layer] = path.generic_string();
  doc["features"] = feature_paths;
  const auto opt = [](const std::optional<fs::path>& p) { return p ? ordered_json(p->generic_string()) : ordered_json(); };
  doc["user_tags"] = opt(user_tags);
  doc["deep_tags"] = opt(deep_tags);
  doc["labels"] = opt(labels);
  doc["lexicon"] = opt(lexicon);
  doc["stopwords"] = opt(stopwords);
  doc["wordnet_dir"] = opt(wordnet_dir);
  doc["images"] = opt(images);
  doc["category_count"] = category_count;
  doc["seed"] = seed;
  doc["k"] = k;
  doc["max_tokens"] = max_tokens;
  ordered_json cs = ordered_json::array();
  for (const double c : grid.c_values) cs.push_back(c);
  ordered_json kernels = ordered_json::array();
  for (const auto& kernel : grid.kernels) {
    ordered_json kj;
    kj["kind"] = std::string(to_string(kernel.kind));
    kj["gamma"] = kernel.gamma ? ordered_json(*kernel.gamma) : ordered_json();
    kernels.push_back(kj);
  }
  doc["grid"] = {{"c", cs}, {"kernels", kernels}};
  doc["outer_folds"] = outer_folds;
  doc["cv_folds"] = cv_folds;
  doc["tol"] = tol;
  doc["representation"] = representation;
  doc["tag_source"] = std::string(to_string(tag_source));
  doc["encoding"] = encoding == TagEncoding::Count ? "count" : "binary";
  doc["min_df"] = min_df;
  doc["standardize"] = standardize;
  doc["enrichment"] = enrichment ? std::string(wordnet::to_string(*enrichment)) : std::string("off");
  doc["enrichment_depth"] = enrichment_depth;
  doc["wordnet_parts"] = wordnet_parts;
  doc["compare_enrichment"] = compare_enrichment;
  doc["class"] = std::string(to_string(analysis_class));
  doc["top"] = top_n;
  doc["threshold"] = graph_threshold;
  doc["focus"] = std::vector<std::string>(focus.begin(), focus.end());
  return doc;
}

std::string RunConfig::metadata_line() const {
  return "# privpred " + std::string(kVersion) + " seed=" + std::to_string(seed) +
         " config=" + hex64(fnv1a64(to_json().dump()));
}

void apply_run_config(RunConfig& cfg, const json& doc, const fs::path& base) {
  if (!doc.is_object()) throw InputError("config: top level must be an object");
  if (const auto it = doc.find("features"); it != doc.end()) {
    if (!it->is_object()) throw InputError("config: 'features' must map layer names to paths");
    for (const auto& [layer, path] : it->items()) cfg.features[layer] = resolve(base, path.get<std::string>());
  }
  for (const auto& [key, slot] : {std::pair{"user_tags", &cfg.user_tags}, std::pair{"deep_tags", &cfg.deep_tags},
                                  std::pair{"labels", &cfg.labels}, std::pair{"lexicon", &cfg.lexicon},
                                  std::pair{"stopwords", &cfg.stopwords}, std::pair{"wordnet_dir", &cfg.wordnet_dir},
                                  std::pair{"images", &cfg.images}}) {
    const auto text = get_or<std::string>(doc, key, "");
    if (!text.empty()) *slot = resolve(base, text);
  }
  cfg.category_count = get_or<std::size_t>(doc, "category_count", cfg.category_count);
  cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.k = get_or<std::size_t>(doc, "k", cfg.k);
  cfg.max_tokens = get_or<std::size_t>(doc, "max_tokens", cfg.max_tokens);
  cfg.outer_folds = get_or<int>(doc, "outer_folds", cfg.outer_folds);
  cfg.cv_folds = get_or<int>(doc, "cv_folds", cfg.cv_folds);
  cfg.tol = get_or<double>(doc, "tol", cfg.tol);
  if (const auto it = doc.find("grid"); it != doc.end()) {
    cfg.grid.c_values = get_or<std::vector<double>>(*it, "c", cfg.grid.c_values);
    if (it->contains("kernels")) {
      const auto names = get_or<std::vector<std::string>>(*it, "kernels", {});
      const auto gammas = get_or<std::vector<double>>(*it, "gamma", {});
      cfg.grid.kernels.clear();
      for (const auto& name : names) {
        const KernelKind kind = parse_kernel_kind(name);
        if (kind == KernelKind::Rbf && !gammas.empty()) {
          for (const double g : gammas) cfg.grid.kernels.push_back(KernelSpec::rbf(g));
        } else {
          cfg.grid.kernels.push_back(kind == KernelKind::Rbf ? KernelSpec::rbf() : KernelSpec::linear());
        }
      }
    }
  }
  cfg.representation = get_or<std::string>(doc, "representation", cfg.representation);
  if (doc.contains("tag_source")) cfg.tag_source = parse_tag_source(doc["tag_source"].get<std::string>());
  if (doc.contains("encoding")) {
    const auto enc = to_lower(doc["encoding"].get<std::string>());
    if (enc != "binary" && enc != "count") throw InputError("config: encoding must be binary or count");
    cfg.encoding = enc == "count" ? TagEncoding::Count : TagEncoding::Binary;
  }
  cfg.min_df = get_or<std::size_t>(doc, "min_df", cfg.min_df);
  cfg.standardize = get_or<bool>(doc, "standardize", cfg.standardize);
  if (doc.contains("enrichment")) {
    const auto text = to_lower(doc["enrichment"].get<std::string>());
    cfg.enrichment = text == "off" ? std::nullopt : std::optional(wordnet::parse_relation(text));
  }
  cfg.enrichment_depth = get_or<int>(doc, "enrichment_depth", cfg.enrichment_depth);
  cfg.wordnet_parts = get_or<std::vector<std::string>>(doc, "wordnet_parts", cfg.wordnet_parts);
  cfg.compare_enrichment = get_or<bool>(doc, "compare_enrichment", cfg.compare_enrichment);
  if (doc.contains("class")) cfg.analysis_class = parse_label(doc["class"].get<std::string>());
  cfg.top_n = get_or<std::size_t>(doc, "top", cfg.top_n);
  cfg.graph_threshold = get_or<std::size_t>(doc, "threshold", cfg.graph_threshold);
  if (doc.contains("focus")) {
    const auto focus = get_or<std::vector<std::string>>(doc, "focus", {});
    cfg.focus = TagSet(focus.begin(), focus.end());
  }
  const auto out = get_or<std::string>(doc, "out", "");
  if (!out.empty()) cfg.out = resolve(base, out);
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config '" + path.string() + "': " + e.what());
  }
  RunConfig cfg;
  apply_run_config(cfg, doc, path.parent_path());
  return cfg;
}

std::optional<fs::path> resolve_wordnet_dir(const RunConfig& cfg) {
  if (cfg.wordnet_dir) return cfg.wordnet_dir;
  if (const char* dir = std::getenv("PRIVPRED_WORDNET_DIR"); dir && *dir) return fs::path(dir);
  if (const char* home = std::getenv("WNHOME"); home && *home) return fs::path(home) / "dict";
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Corpus assemble_corpus(const RunConfig& cfg) {
  Corpus corpus;
  for (const auto& [layer, path] : cfg.features) {
    if (!fs::exists(path)) throw InputError("feature table for layer " + layer + " not found: " + path.string());
    corpus.data.merge_features(load_feature_table(path, layer));
  }
  const AnnotationConfig annotation = annotation_config(cfg);
  if (cfg.user_tags) {
    for (const auto& entry : load_tag_table(require(cfg.user_tags, "user tag table"))) {
      corpus.data.upsert(entry.id);
      corpus.data.set_user_tags(entry.id, normalize_user_tags(std::span<const std::string>(entry.tags), annotation));
      corpus.user_tagged.insert(entry.id);
    }
  }
  if (cfg.deep_tags) {
    for (const auto& entry : load_tag_table(require(cfg.deep_tags, "deep tag table"))) {
      TagSet tags;
      for (const auto& tag : entry.tags)
        if (!trim(tag).empty()) tags.insert(to_lower(trim(tag)));
      corpus.data.upsert(entry.id);
      corpus.data.set_deep_tags(entry.id, std::move(tags));
    }
  } else if (cfg.features.contains("fc8") && cfg.lexicon) {
    const CategoryLexicon lexicon = load_lexicon(require(cfg.lexicon, "lexicon"), cfg.category_count);
    annotate_deep_tags(corpus.data, lexicon, annotation);
  }
  if (cfg.representation == "prob" && !cfg.features.contains("prob")) derive_prob_layer(corpus.data);
  if (cfg.labels) attach_labels(corpus.data, load_labels(require(cfg.labels, "label file")));
  return corpus;
}

std::vector<std::size_t> experiment_rows(const Corpus& corpus, const RunConfig& cfg) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < corpus.data.size(); ++i) {
    const auto& rec = corpus.data[i];
    if (!rec.label) continue;
    bool usable;
    if (!is_tag_representation(cfg)) {
      usable = rec.features.contains(cfg.representation);
    } else {
      const bool user = corpus.user_tagged.contains(rec.id);
      const bool deep = !rec.deep_tags.empty();
      usable = cfg.tag_source == TagSource::User ? user : cfg.tag_source == TagSource::Deep ? deep : (user && deep);
    }
    if (usable) rows.push_back(i);
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<std::pair<std::string, EvalReport>>& rows) {
  out << "features,accuracy,f1_measure,precision,recall\n";
  for (const auto& [name, r] : rows)
    out << csv_field(name) << ',' << format_double(r.accuracy) << ',' << format_double(r.weighted_f1) << ','
        << format_double(r.weighted_precision) << ',' << format_double(r.weighted_recall) << '\n';
}

// ---------------------------------------------------------------------------

void cmd_annotate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const std::optional<fs::path> fc8 =
      cfg.features.contains("fc8") ? std::optional(cfg.features.at("fc8")) : std::nullopt;
  const fs::path fc8_path = require(fc8, "fc8 feature table");
  const CategoryLexicon lexicon = load_lexicon(require(cfg.lexicon, "lexicon"), cfg.category_count);
  const AnnotationConfig annotation = annotation_config(cfg);
  Dataset data = load_feature_table(fc8_path, "fc8");
  derive_prob_layer(data);
  annotate_deep_tags(data, lexicon, annotation);

  std::vector<std::pair<std::string, TagSet>> deep_rows;
  for (const auto& rec : data.records()) deep_rows.emplace_back(rec.id, rec.deep_tags);
  {
    auto out = open_output(cfg, "deep_tags.jsonl");
    write_tag_table(out, deep_rows);
  }
  {
    auto out = open_output(cfg, "prob.jsonl");
    write_feature_table(out, data, "prob");
  }
  if (cfg.user_tags) {
    std::vector<std::pair<std::string, TagSet>> user_rows;
    for (const auto& entry : load_tag_table(require(cfg.user_tags, "user tag table")))
      user_rows.emplace_back(entry.id, normalize_user_tags(std::span<const std::string>(entry.tags), annotation));
    auto out = open_output(cfg, "user_tags.jsonl");
    write_tag_table(out, user_rows);
  }
  log << "annotate: " << data.size() << " images, k=" << annotation.k << '\n';
}

void cmd_featurize(const RunConfig& raw_cfg, std::ostream& log) {
  const RunConfig cfg = tag_config(raw_cfg);
  cfg.validate();
  Corpus corpus = assemble_corpus(cfg);
  const RowData rd = select_rows(corpus, cfg);
  if (rd.rows.empty()) throw InputError("featurize: no labelled records with tags");

  std::vector<TagSet> user, deep;
  for (const auto r : rd.rows) {
    user.push_back(corpus.data[r].user_tags);
    deep.push_back(corpus.data[r].deep_tags);
  }
  const TagRepresentation rep(std::move(user), std::move(deep), cfg.tag_source, cfg.encoding, cfg.min_df);
  const TrainTestSplit split = holdout_split(rd.outer_fold, cfg.outer_folds);
  const TagVocabulary vocab = rep.vocabulary(split.train);
  {
    auto out = open_output(cfg, "vocab.csv");
    vocab.write_csv(out);
  }
  {
    auto out = open_output(cfg, "bag_of_tags.jsonl");
    for (std::size_t i = 0; i < rd.rows.size(); ++i) {
      const SparseVector v = rep.vectorize_row(i, vocab);
      ordered_json doc;
      doc["id"] = corpus.data[rd.rows[i]].id;
      doc["split"] = rd.outer_fold[i] == cfg.outer_folds - 1 ? "test" : "train";
      doc["dimension"] = v.size();
      std::vector<Eigen::Index> indices;
      std::vector<double> values;
      for (SparseVector::InnerIterator it(v); it; ++it) {
        indices.push_back(it.index());
        values.push_back(it.value());
      }
      doc["indices"] = indices;
      doc["values"] = values;
      out << doc.dump() << '\n';
    }
  }
  log << "featurize: vocabulary of " << vocab.size() << " tags from " << split.train.size() << " training images\n";
}

ExperimentOutcome cmd_experiment(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  Corpus corpus = assemble_corpus(cfg);
  const RowData rd = select_rows(corpus, cfg);
  if (rd.rows.empty()) throw InputError("experiment: no labelled records carry representation " + cfg.representation);
  ExperimentOutcome outcome;

  if (!is_tag_representation(cfg)) {
    std::vector<Eigen::VectorXd> rows;
    for (const auto r : rd.rows) rows.push_back(corpus.data[r].features.at(cfg.representation));
    const DenseRepresentation rep(std::move(rows), cfg.standardize);
    outcome.primary = run_protocol(rep, rd.labels, rd.outer_fold, cfg);
    log_protocol(log, cfg.representation, outcome.primary);
    write_protocol_files(cfg, "", cfg.representation, outcome.primary);
    return outcome;
  }

  std::vector<TagSet> user, deep;
  for (const auto r : rd.rows) {
    user.push_back(corpus.data[r].user_tags);
    deep.push_back(corpus.data[r].deep_tags);
  }
  const bool needs_wordnet = cfg.enrichment.has_value() || cfg.compare_enrichment;
  std::optional<wordnet::Lexicon> lexicon;
  if (needs_wordnet) {
    const auto dir = resolve_wordnet_dir(cfg);
    if (!dir) throw InputError("WordNet directory not configured (wordnet_dir or PRIVPRED_WORDNET_DIR)");
    lexicon = wordnet::load_directory(*dir, cfg.wordnet_parts);
  }
  const wordnet::ExpansionSpec spec{cfg.enrichment.value_or(wordnet::Relation::Hypernym), cfg.enrichment_depth};
  const AnnotationConfig cleaning = annotation_config(cfg);
  const std::string base_title = source_title(cfg.tag_source);
  const std::string enriched_title = base_title + " + " + relation_title(spec.relation);

  if (cfg.enrichment && !cfg.compare_enrichment) {
    const TagRepresentation rep(expand_all(user, *lexicon, spec, cleaning), expand_all(deep, *lexicon, spec, cleaning),
                                cfg.tag_source, cfg.encoding, cfg.min_df);
    outcome.primary = run_protocol(rep, rd.labels, rd.outer_fold, cfg);
    log_protocol(log, enriched_title, outcome.primary);
    write_protocol_files(cfg, "", enriched_title, outcome.primary);
    return outcome;
  }

  const TagRepresentation plain(user, deep, cfg.tag_source, cfg.encoding, cfg.min_df);
  outcome.primary = run_protocol(plain, rd.labels, rd.outer_fold, cfg);
  log_protocol(log, base_title, outcome.primary);
  write_protocol_files(cfg, "", base_title, outcome.primary);
  if (cfg.compare_enrichment) {
    const TagRepresentation enriched(expand_all(user, *lexicon, spec, cleaning),
                                     expand_all(deep, *lexicon, spec, cleaning), cfg.tag_source, cfg.encoding,
                                     cfg.min_df);
    outcome.enriched = run_protocol(enriched, rd.labels, rd.outer_fold, cfg);
    log_protocol(log, enriched_title, *outcome.enriched);
    write_protocol_files(cfg, "_enriched", enriched_title, *outcome.enriched);
    auto out = open_output(cfg, "enrichment_comparison.csv");
    write_comparison_csv(out, {{base_title, outcome.primary.report}, {enriched_title, outcome.enriched->report}});
  }
  return outcome;
}

void cmd_tags_ig(const RunConfig& raw_cfg, std::ostream& log) {
  const RunConfig cfg = tag_config(raw_cfg);
  cfg.validate();
  const Corpus corpus = assemble_corpus(cfg);
  const RowData rd = select_rows(corpus, cfg);
  if (rd.rows.empty()) throw InputError("tags ig: no labelled tagged records");
  const TrainTestSplit split = holdout_split(rd.outer_fold, cfg.outer_folds);
  std::vector<std::size_t> train_rows;
  for (const auto i : split.train) train_rows.push_back(rd.rows[i]);
  const auto records = tagged_records(corpus, cfg, train_rows);
  const auto stats = information_gain_cv(records, cfg.cv_folds, derive_seed(cfg.seed, SeedPurpose::Analysis));

  // A tag's source is where it occurs more often across Train (ties go to user).
  std::map<std::string, std::pair<std::size_t, std::size_t>> occurrences;
  for (const auto r : train_rows) {
    for (const auto& tag : corpus.data[r].user_tags) ++occurrences[tag].first;
    for (const auto& tag : corpus.data[r].deep_tags) ++occurrences[tag].second;
  }
  std::map<std::string, std::string> source_of;
  for (const auto& [tag, counts] : occurrences) source_of[tag] = counts.second > counts.first ? "deep" : "user";
  auto out = open_output(cfg, "ig.csv");
  write_ig_csv(out, stats, source_of);
  log << "tags ig: " << stats.size() << " tags ranked over " << train_rows.size() << " training images\n";
}

void cmd_tags_cloud(const RunConfig& raw_cfg, std::ostream& log) {
  const RunConfig cfg = tag_config(raw_cfg);
  cfg.validate();
  const Corpus corpus = assemble_corpus(cfg);
  const auto rows = experiment_rows(corpus, cfg);
  if (rows.empty()) throw InputError("tags cloud: no labelled tagged records");
  const auto records = tagged_records(corpus, cfg, rows);
  const auto cloud = frequency_cloud(records, cfg.analysis_class, cfg.top_n);
  auto out = open_output(cfg, "cloud_" + std::string(to_string(cfg.analysis_class)) + ".csv");
  write_cloud_csv(out, cloud, cfg.analysis_class);
  log << "tags cloud: " << cloud.size() << " tags for class " << to_string(cfg.analysis_class) << '\n';
}

void cmd_tags_graph(const RunConfig& raw_cfg, std::ostream& log) {
  const RunConfig cfg = tag_config(raw_cfg);
  cfg.validate();
  const Corpus corpus = assemble_corpus(cfg);
  const auto rows = experiment_rows(corpus, cfg);
  if (rows.empty()) throw InputError("tags graph: no labelled tagged records");
  const auto records = tagged_records(corpus, cfg, rows);
  CooccurrenceGraph graph = cooccurrence_graph(records, cfg.analysis_class, cfg.graph_threshold);
  if (!cfg.focus.empty()) graph = ego_subgraph(graph, cfg.focus);
  const std::string stem = "graph_" + std::string(to_string(cfg.analysis_class));
  {
    auto out = open_output(cfg, stem + ".txt");
    write_adjacency(out, graph);
  }
  {
    auto out = open_output(cfg, stem + ".dot");
    write_dot(out, graph);
  }
  log << "tags graph: " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
}

void cmd_wordnet_expand(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto dir = resolve_wordnet_dir(cfg);
  if (!dir) throw InputError("WordNet directory not configured (wordnet_dir or PRIVPRED_WORDNET_DIR)");
  const auto table = load_tag_table(require(cfg.user_tags, "tag table"));
  const wordnet::Lexicon lexicon = wordnet::load_directory(*dir, cfg.wordnet_parts);
  const AnnotationConfig cleaning = annotation_config(cfg);
  const wordnet::ExpansionSpec spec{cfg.enrichment.value_or(wordnet::Relation::Hypernym), cfg.enrichment_depth};
  std::vector<std::pair<std::string, TagSet>> rows;
  std::size_t added = 0;
  for (const auto& entry : table) {
    const TagSet base = normalize_user_tags(std::span<const std::string>(entry.tags), cleaning);
    TagSet expanded = wordnet::expand_tagset(base, lexicon, spec, cleaning);
    added += expanded.size() - base.size();
    rows.emplace_back(entry.id, std::move(expanded));
  }
  auto out = open_output(cfg, "expanded_tags.jsonl");
  write_tag_table(out, rows);
  log << "wordnet expand: " << wordnet::to_string(spec.relation) << " depth " << spec.depth << " added " << added
      << " tags over " << rows.size() << " images\n";
}

std::size_t cmd_gist(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const fs::path& dir = require(cfg.images, "image directory");
  if (!fs::is_directory(dir)) throw InputError("image path is not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && to_lower(entry.path().extension().string()) == ".pgm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no PGM images in " + dir.string());

  const gist::GistConfig gist_cfg;
  Dataset data;
  std::size_t skipped = 0;
  for (const auto& file : files) {
    try {
      const Eigen::VectorXd descriptor = gist::gist_descriptor(gist::read_pgm(file), gist_cfg);
      const std::string id = file.stem().string();
      data.add(id);
      data.set_feature(id, "gist", descriptor);
    } catch (const InputError& e) {
      ++skipped;
      log << "warning: skipping " << file.filename().string() << ": " << e.what() << '\n';
    }
  }
  if (data.empty()) throw InputError("no readable PGM images in " + dir.string());
  auto out = open_output(cfg, "gist.jsonl");
  write_feature_table(out, data, "gist");
  log << "gist: " << data.size() << " descriptors written, " << skipped << " skipped\n";
  return skipped;
}

}  // namespace privpred
