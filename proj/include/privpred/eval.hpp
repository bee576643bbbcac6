#ifndef PRIVPRED_EVAL_HPP
#define PRIVPRED_EVAL_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <concepts>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privpred/common.hpp"
#include "privpred/corpus.hpp"
#include "privpred/featurize.hpp"
#include "privpred/svm.hpp"

namespace privpred {

// ---------------------------------------------------------------------------
// Stratified folds

struct FoldAssignment {
  std::map<std::string, int> fold_of;
  int k = 0;
  std::uint64_t seed = 0;
};

// Per-class seeded shuffle followed by one round-robin pass that continues across
// classes (public first), so every fold keeps the class ratio to within one record
// and fold sizes differ by at most one. Positions refer to `labels`.
std::vector<int> stratified_fold_indices(std::span<const PrivacyLabel> labels, int k, std::uint64_t seed);

// Id-keyed variant. Ids are sorted first, so the result depends only on the
// (id, label) set and the seed, not on file order.
FoldAssignment stratified_folds(std::span<const LabelEntry> labels, int k, std::uint64_t seed);

struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// The last fold is held out: under the round-robin layout it is always one of the
// smallest folds (4,700 records and k = 6 give 3,917 / 783).
TrainTestSplit holdout_split(std::span<const int> fold_of_row, int k);

// ---------------------------------------------------------------------------
// Metrics

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct PrPoint {
  double threshold;
  double precision;
  double recall;
};

// Rows are truth, columns prediction, both ordered (public, private).
using Confusion = std::array<std::array<std::size_t, 2>, 2>;

struct EvalReport {
  Confusion confusion{};
  std::size_t total = 0;
  double accuracy = 0.0;
  ClassMetrics public_class;
  ClassMetrics private_class;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  std::vector<PrPoint> pr_curve;  // private class
};

EvalReport report_from_confusion(const Confusion& confusion);

// Predictions follow the sign rule (private iff score > 0). The PR curve is
// filled when the truth contains at least one private record.
EvalReport evaluate(std::span<const double> scores, std::span<const PrivacyLabel> truth);

template <typename Sample>
EvalReport evaluate(const SvmModel<Sample>& model, std::span<const Sample> samples,
                    std::span<const PrivacyLabel> truth) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (const auto& x : samples) scores.push_back(model.decision_value(x));
  return evaluate(std::span<const double>(scores), truth);
}

// Threshold sweep over distinct scores, highest first; a record is predicted
// private at threshold t when its score >= t.
std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const PrivacyLabel> truth);

void write_report(std::ostream& out, const EvalReport& report);
void write_pr_curve_csv(std::ostream& out, const std::vector<PrPoint>& curve);

// ---------------------------------------------------------------------------
// Representations: turn row indices into SVM samples, fitting any learned
// transform (vocabulary, scaling) on the fit rows only.

template <typename R>
concept Representation = requires(const R& rep, std::span<const std::size_t> rows) {
  typename R::Sample;
  { rep.rows() } -> std::convertible_to<std::size_t>;
  {
    rep.materialize(rows, rows)
  } -> std::same_as<std::pair<std::vector<typename R::Sample>, std::vector<typename R::Sample>>>;
};

class DenseRepresentation {
 public:
  using Sample = Eigen::VectorXd;

  DenseRepresentation(std::vector<Eigen::VectorXd> rows, bool standardize = false);

  std::size_t rows() const { return rows_.size(); }
  std::pair<std::vector<Sample>, std::vector<Sample>> materialize(std::span<const std::size_t> fit_rows,
                                                                  std::span<const std::size_t> apply_rows) const;

 private:
  std::vector<Eigen::VectorXd> rows_;
  bool standardize_;
};

enum class TagSource { User, Deep, Combined };
std::string_view to_string(TagSource source);
TagSource parse_tag_source(std::string_view text);

class TagRepresentation {
 public:
  using Sample = SparseVector;

  TagRepresentation(std::vector<TagSet> user, std::vector<TagSet> deep, TagSource source,
                    TagEncoding encoding = TagEncoding::Binary, std::size_t min_df = 1);

  std::size_t rows() const { return user_.size(); }
  TagSet tags(std::size_t row) const;
  TagVocabulary vocabulary(std::span<const std::size_t> fit_rows) const;
  Sample vectorize_row(std::size_t row, const TagVocabulary& vocab) const;
  std::pair<std::vector<Sample>, std::vector<Sample>> materialize(std::span<const std::size_t> fit_rows,
                                                                  std::span<const std::size_t> apply_rows) const;

 private:
  std::vector<TagSet> user_;
  std::vector<TagSet> deep_;
  TagSource source_;
  TagEncoding encoding_;
  std::size_t min_df_;
};

// ---------------------------------------------------------------------------
// Grid search

struct GridSpec {
  std::vector<double> c_values;
  std::vector<KernelSpec> kernels;

  static GridSpec defaults();
  void validate() const;
};

struct CvRow {
  double c = 0.0;
  KernelSpec kernel;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  bool failed = false;
  std::string error;
};

struct GridResult {
  TrainConfig best;
  std::vector<CvRow> table;  // grid order: kernels outer, C inner
};

void write_cv_table_csv(std::ostream& out, const std::vector<CvRow>& table);

namespace detail {
double mean_of(std::span<const double> values);
double sample_std(std::span<const double> values);
// Highest mean accuracy; ties go to smaller C, then linear before rbf, then grid order.
std::size_t pick_best(const std::vector<CvRow>& table);
std::vector<int> signs_of(std::span<const PrivacyLabel> labels, std::span<const std::size_t> rows);
}  // namespace detail

// k-fold stratified cross-validation over `train_rows` for every grid point.
// Learned transforms are fitted inside each fold's training part. `base`
// provides solver settings (tol, seed, ...); C and kernel come from the grid.
template <Representation R>
GridResult grid_search_cv(const R& rep, std::span<const PrivacyLabel> labels, std::span<const std::size_t> train_rows,
                          const GridSpec& grid, int cv_k, std::uint64_t seed, const TrainConfig& base = {}) {
  grid.validate();
  if (labels.size() != rep.rows()) throw InputError("grid_search_cv: label count does not match representation");
  std::vector<PrivacyLabel> train_labels;
  for (const auto row : train_rows) train_labels.push_back(labels[row]);
  const std::vector<int> folds =
      stratified_fold_indices(train_labels, cv_k, derive_seed(seed, SeedPurpose::CrossValidation));

  std::vector<CvRow> table;
  for (const auto& kernel : grid.kernels)
    for (const double c : grid.c_values) {
      CvRow row;
      row.c = c;
      row.kernel = kernel;
      table.push_back(std::move(row));
    }
  std::vector<std::vector<double>> accuracies(table.size());

  for (int f = 0; f < cv_k; ++f) {
    std::vector<std::size_t> fit_rows, held_rows;
    for (std::size_t i = 0; i < train_rows.size(); ++i)
      (folds[i] == f ? held_rows : fit_rows).push_back(train_rows[i]);
    const auto [fit_samples, held_samples] = rep.materialize(fit_rows, held_rows);
    const std::vector<int> fit_y = detail::signs_of(labels, fit_rows);

    for (std::size_t g = 0; g < table.size(); ++g) {
      if (table[g].failed) continue;
      TrainConfig cfg = base;
      cfg.c = table[g].c;
      cfg.kernel = table[g].kernel;
      cfg.seed = derive_seed(seed, SeedPurpose::Solver);
      try {
        const auto model = train(std::span<const typename R::Sample>(fit_samples), std::span<const int>(fit_y), cfg);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < held_rows.size(); ++i)
          if (model.predict(held_samples[i]) == labels[held_rows[i]]) ++correct;
        accuracies[g].push_back(static_cast<double>(correct) / static_cast<double>(held_rows.size()));
      } catch (const std::exception& e) {
        table[g].failed = true;
        table[g].error = e.what();
      }
    }
  }
  for (std::size_t g = 0; g < table.size(); ++g) {
    if (table[g].failed) continue;
    table[g].mean_accuracy = detail::mean_of(accuracies[g]);
    table[g].std_accuracy = detail::sample_std(accuracies[g]);
  }
  GridResult result;
  const std::size_t best = detail::pick_best(table);
  result.best = base;
  result.best.c = table[best].c;
  result.best.kernel = table[best].kernel;
  result.best.seed = derive_seed(seed, SeedPurpose::Solver);
  result.table = std::move(table);
  return result;
}

}  // namespace privpred

#endif  // PRIVPRED_EVAL_HPP
