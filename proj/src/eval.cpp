#include "privpred/eval.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace privpred {

std::vector<int> stratified_fold_indices(std::span<const PrivacyLabel> labels, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("stratified folds: k must be at least 2");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i] == PrivacyLabel::Private ? 1 : 0].push_back(i);
  for (const auto& members : by_class)
    if (members.size() < static_cast<std::size_t>(k))
      throw InputError("stratified folds: a class has fewer than k=" + std::to_string(k) + " members");

  Rng rng(seed);
  std::vector<int> fold_of(labels.size(), -1);
  std::size_t cursor = 0;
  for (auto& members : by_class) {
    shuffle(members, rng);
    for (const auto i : members) fold_of[i] = static_cast<int>(cursor++ % static_cast<std::size_t>(k));
  }
  return fold_of;
}

FoldAssignment stratified_folds(std::span<const LabelEntry> labels, int k, std::uint64_t seed) {
  std::vector<LabelEntry> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), [](const LabelEntry& a, const LabelEntry& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].id == sorted[i - 1].id) throw InputError("stratified folds: duplicate id '" + sorted[i].id + "'");
  std::vector<PrivacyLabel> classes;
  classes.reserve(sorted.size());
  for (const auto& entry : sorted) classes.push_back(entry.label);
  const auto folds = stratified_fold_indices(classes, k, seed);

  FoldAssignment out{.fold_of = {}, .k = k, .seed = seed};
  for (std::size_t i = 0; i < sorted.size(); ++i) out.fold_of.emplace(sorted[i].id, folds[i]);
  return out;
}

TrainTestSplit holdout_split(std::span<const int> fold_of_row, int k) {
  TrainTestSplit split;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i)
    (fold_of_row[i] == k - 1 ? split.test : split.train).push_back(i);
  return split;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::size_t tp, std::size_t predicted, std::size_t support) {
  ClassMetrics m;
  m.precision = ratio(tp, predicted);
  m.recall = ratio(tp, support);
  m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.support = support;
  return m;
}

}  // namespace

EvalReport report_from_confusion(const Confusion& confusion) {
  EvalReport r;
  r.confusion = confusion;
  const std::size_t tp_pub = confusion[0][0], pub_as_priv = confusion[0][1];
  const std::size_t priv_as_pub = confusion[1][0], tp_priv = confusion[1][1];
  r.total = tp_pub + pub_as_priv + priv_as_pub + tp_priv;
  if (r.total == 0) throw InputError("evaluate: empty test set");
  r.accuracy = ratio(tp_pub + tp_priv, r.total);
  r.public_class = class_metrics(tp_pub, tp_pub + priv_as_pub, tp_pub + pub_as_priv);
  r.private_class = class_metrics(tp_priv, tp_priv + pub_as_priv, tp_priv + priv_as_pub);

  const double n = static_cast<double>(r.total);
  const double w_pub = static_cast<double>(r.public_class.support);
  const double w_priv = static_cast<double>(r.private_class.support);
  r.weighted_precision = (w_pub * r.public_class.precision + w_priv * r.private_class.precision) / n;
  r.weighted_f1 = (w_pub * r.public_class.f1 + w_priv * r.private_class.f1) / n;
  // support_c * (tp_c / support_c) summed over classes is the trace.
  r.weighted_recall = ratio(tp_pub + tp_priv, r.total);
  return r;
}

EvalReport evaluate(std::span<const double> scores, std::span<const PrivacyLabel> truth) {
  if (scores.size() != truth.size()) throw InputError("evaluate: score / truth count mismatch");
  if (truth.empty()) throw InputError("evaluate: empty test set");
  Confusion confusion{};
  bool any_private = false;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int row = truth[i] == PrivacyLabel::Private ? 1 : 0;
    const int col = from_sign(scores[i]) == PrivacyLabel::Private ? 1 : 0;
    ++confusion[row][col];
    any_private = any_private || row == 1;
  }
  EvalReport report = report_from_confusion(confusion);
  if (any_private) report.pr_curve = pr_curve(scores, truth);
  return report;
}

std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const PrivacyLabel> truth) {
  if (scores.size() != truth.size()) throw InputError("pr_curve: score / truth count mismatch");
  const auto positives =
      static_cast<std::size_t>(std::count(truth.begin(), truth.end(), PrivacyLabel::Private));
  if (positives == 0) throw InputError("pr_curve: no private records in truth");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<PrPoint> curve;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i)
      (truth[order[i]] == PrivacyLabel::Private ? tp : fp) += 1;
    curve.push_back({threshold, ratio(tp, tp + fp), ratio(tp, positives)});
  }
  return curve;
}

void write_report(std::ostream& out, const EvalReport& r) {
  out << "evaluated " << r.total << '\n';
  out << "confusion public " << r.confusion[0][0] << ' ' << r.confusion[0][1] << '\n';
  out << "confusion private " << r.confusion[1][0] << ' ' << r.confusion[1][1] << '\n';
  out << "accuracy " << format_double(r.accuracy) << '\n';
  for (const auto& [name, m] : {std::pair{"public", &r.public_class}, std::pair{"private", &r.private_class}}) {
    out << name << " precision " << format_double(m->precision) << " recall " << format_double(m->recall) << " f1 "
        << format_double(m->f1) << " support " << m->support << '\n';
  }
  out << "weighted precision " << format_double(r.weighted_precision) << " recall "
      << format_double(r.weighted_recall) << " f1 " << format_double(r.weighted_f1) << '\n';
  out << "pr_points " << r.pr_curve.size() << '\n';
}

void write_pr_curve_csv(std::ostream& out, const std::vector<PrPoint>& curve) {
  out << "threshold,precision,recall\n";
  for (const auto& p : curve)
    out << format_double(p.threshold) << ',' << format_double(p.precision) << ',' << format_double(p.recall) << '\n';
}

// ---------------------------------------------------------------------------

DenseRepresentation::DenseRepresentation(std::vector<Eigen::VectorXd> rows, bool standardize)
    : rows_(std::move(rows)), standardize_(standardize) {}

std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> DenseRepresentation::materialize(
    std::span<const std::size_t> fit_rows, std::span<const std::size_t> apply_rows) const {
  std::vector<Sample> fit, apply;
  fit.reserve(fit_rows.size());
  apply.reserve(apply_rows.size());
  if (!standardize_) {
    for (const auto r : fit_rows) fit.push_back(rows_[r]);
    for (const auto r : apply_rows) apply.push_back(rows_[r]);
    return {std::move(fit), std::move(apply)};
  }
  if (fit_rows.empty()) throw InputError("standardize: no rows to fit");
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(fit_rows.size()), rows_[fit_rows.front()].size());
  for (std::size_t i = 0; i < fit_rows.size(); ++i)
    stacked.row(static_cast<Eigen::Index>(i)) = rows_[fit_rows[i]].transpose();
  const Standardizer scaler = Standardizer::fit(stacked);
  for (const auto r : fit_rows) fit.push_back(scaler.transform(rows_[r]));
  for (const auto r : apply_rows) apply.push_back(scaler.transform(rows_[r]));
  return {std::move(fit), std::move(apply)};
}

std::string_view to_string(TagSource source) {
  switch (source) {
    case TagSource::User:
      return "user";
    case TagSource::Deep:
      return "deep";
    case TagSource::Combined:
      return "combined";
  }
  return "combined";
}

TagSource parse_tag_source(std::string_view text) {
  const std::string lowered = to_lower(trim(text));
  if (lowered == "user") return TagSource::User;
  if (lowered == "deep") return TagSource::Deep;
  if (lowered == "combined" || lowered == "user+deep") return TagSource::Combined;
  throw InputError("unknown tag source '" + std::string(text) + "'");
}

TagRepresentation::TagRepresentation(std::vector<TagSet> user, std::vector<TagSet> deep, TagSource source,
                                     TagEncoding encoding, std::size_t min_df)
    : user_(std::move(user)), deep_(std::move(deep)), source_(source), encoding_(encoding), min_df_(min_df) {
  if (user_.size() != deep_.size()) throw InputError("TagRepresentation: user / deep row count mismatch");
}

TagSet TagRepresentation::tags(std::size_t row) const {
  switch (source_) {
    case TagSource::User:
      return user_[row];
    case TagSource::Deep:
      return deep_[row];
    case TagSource::Combined:
      break;
  }
  return combine_tagsets(user_[row], deep_[row]);
}

TagVocabulary TagRepresentation::vocabulary(std::span<const std::size_t> fit_rows) const {
  std::vector<TagSet> fit;
  fit.reserve(fit_rows.size());
  for (const auto r : fit_rows) fit.push_back(tags(r));
  return build_vocabulary(fit, min_df_);
}

SparseVector TagRepresentation::vectorize_row(std::size_t row, const TagVocabulary& vocab) const {
  if (source_ == TagSource::Combined) return vectorize(user_[row], deep_[row], vocab, encoding_);
  return vectorize(tags(row), vocab);
}

std::pair<std::vector<SparseVector>, std::vector<SparseVector>> TagRepresentation::materialize(
    std::span<const std::size_t> fit_rows, std::span<const std::size_t> apply_rows) const {
  const TagVocabulary vocab = vocabulary(fit_rows);
  if (vocab.size() == 0) throw InputError("tag representation: training vocabulary is empty");
  std::vector<Sample> fit, apply;
  for (const auto r : fit_rows) fit.push_back(vectorize_row(r, vocab));
  for (const auto r : apply_rows) apply.push_back(vectorize_row(r, vocab));
  return {std::move(fit), std::move(apply)};
}

// ---------------------------------------------------------------------------

GridSpec GridSpec::defaults() {
  return {{0.1, 0.5, 1.0, 5.0, 10.0, 50.0}, {KernelSpec::linear(), KernelSpec::rbf()}};
}

void GridSpec::validate() const {
  if (c_values.empty() || kernels.empty()) throw InputError("grid: C values and kernels must be nonempty");
  for (const double c : c_values)
    if (!(c > 0.0)) throw InputError("grid: C values must be positive");
  for (const auto& k : kernels) k.validate();
}

void write_cv_table_csv(std::ostream& out, const std::vector<CvRow>& table) {
  out << "c,kernel,gamma,mean_accuracy,std_accuracy\n";
  for (const auto& row : table) {
    out << format_double(row.c) << ',' << to_string(row.kernel.kind) << ',';
    if (row.kernel.kind == KernelKind::Rbf)
      out << (row.kernel.gamma ? format_double(*row.kernel.gamma) : std::string("auto"));
    out << ',';
    if (row.failed)
      out << "failed,failed\n";
    else
      out << format_double(row.mean_accuracy) << ',' << format_double(row.std_accuracy) << '\n';
  }
}

namespace detail {

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = mean_of(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::size_t pick_best(const std::vector<CvRow>& table) {
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < table.size(); ++g) {
    if (table[g].failed) continue;
    if (!best) {
      best = g;
      continue;
    }
    const CvRow& a = table[g];
    const CvRow& b = table[*best];
    const auto key = [](const CvRow& r) {
      return std::tuple(-r.mean_accuracy, r.c, r.kernel.kind == KernelKind::Rbf ? 1 : 0);
    };
    if (key(a) < key(b)) best = g;
  }
  if (!best) {
    std::string reason = table.empty() ? "empty grid" : table.front().error;
    throw ComputeError("grid search: every grid point failed (" + reason + ")");
  }
  return *best;
}

std::vector<int> signs_of(std::span<const PrivacyLabel> labels, std::span<const std::size_t> rows) {
  std::vector<int> y;
  y.reserve(rows.size());
  for (const auto r : rows) y.push_back(to_sign(labels[r]));
  return y;
}

}  // namespace detail
}  // namespace privpred
