#include "doctest.h"

#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "privpred/eval.hpp"

using namespace privpred;

namespace {

std::vector<PrivacyLabel> make_labels(std::size_t n_public, std::size_t n_private) {
  std::vector<PrivacyLabel> labels(n_public, PrivacyLabel::Public);
  labels.insert(labels.end(), n_private, PrivacyLabel::Private);
  return labels;
}

}  // namespace

TEST_CASE("8 records, k = 2: three public and one private per fold") {
  const auto labels = make_labels(6, 2);
  const auto folds = stratified_fold_indices(labels, 2, 5);
  for (int f = 0; f < 2; ++f) {
    int pub = 0, priv = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (folds[i] == f) (labels[i] == PrivacyLabel::Public ? pub : priv) += 1;
    CHECK(pub == 3);
    CHECK(priv == 1);
  }
  CHECK(stratified_fold_indices(labels, 2, 5) == folds);
}

TEST_CASE("4,700 records give 3,917 / 783 with k = 6") {
  std::vector<LabelEntry> entries;
  for (int i = 0; i < 4700; ++i)
    entries.push_back({"img" + std::to_string(i), i < 3525 ? PrivacyLabel::Public : PrivacyLabel::Private});
  const FoldAssignment a = stratified_folds(entries, 6, 1);
  std::vector<int> fold_of_row;
  for (const auto& e : entries) fold_of_row.push_back(a.fold_of.at(e.id));
  const TrainTestSplit split = holdout_split(fold_of_row, 6);
  CHECK(split.train.size() == 3917);
  CHECK(split.test.size() == 783);
  std::size_t test_private = 0;
  for (const auto r : split.test) test_private += entries[r].label == PrivacyLabel::Private;
  const std::size_t test_public = split.test.size() - test_private;
  CHECK(std::abs(static_cast<long>(test_public) - 3 * static_cast<long>(test_private)) <= 3);

  // file order does not matter
  std::vector<LabelEntry> reversed(entries.rbegin(), entries.rend());
  CHECK(stratified_folds(reversed, 6, 1).fold_of == a.fold_of);
}

TEST_CASE("fold layout properties") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t pub = 10 + rng() % 90, priv = 10 + rng() % 40;
    const int k = 2 + static_cast<int>(rng() % 9);
    const auto labels = make_labels(pub, priv);
    const auto folds = stratified_fold_indices(labels, k, t);
    std::vector<std::size_t> size(k), priv_count(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      ++size[folds[i]];
      priv_count[folds[i]] += labels[i] == PrivacyLabel::Private;
    }
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
    CHECK(*std::max_element(priv_count.begin(), priv_count.end()) -
              *std::min_element(priv_count.begin(), priv_count.end()) <=
          1);
    CHECK(size[k - 1] == *std::min_element(size.begin(), size.end()));
  }
  CHECK_THROWS_AS(stratified_fold_indices(make_labels(5, 1), 2, 0), InputError);
}

TEST_CASE("confusion arithmetic") {
  const EvalReport r = report_from_confusion(Confusion{{{50, 10}, {5, 35}}});
  CHECK(r.accuracy == doctest::Approx(0.85));
  CHECK(r.private_class.precision == doctest::Approx(35.0 / 45.0));
  CHECK(r.private_class.recall == doctest::Approx(0.875));
  CHECK(r.weighted_recall == r.accuracy);
  CHECK(r.weighted_recall == 0.85);
  CHECK_THROWS_AS(report_from_confusion(Confusion{}), InputError);
}

TEST_CASE("perfect predictions") {
  const std::vector<double> scores{1, 2, -1, -3};
  const auto truth = std::vector<PrivacyLabel>{PrivacyLabel::Private, PrivacyLabel::Private, PrivacyLabel::Public,
                                               PrivacyLabel::Public};
  const EvalReport r = evaluate(std::span<const double>(scores), std::span<const PrivacyLabel>(truth));
  CHECK(r.accuracy == 1.0);
  CHECK(r.public_class.f1 == 1.0);
  CHECK(r.private_class.f1 == 1.0);
  CHECK(r.weighted_f1 == 1.0);
  CHECK(r.pr_curve.back().recall == 1.0);
}

TEST_CASE("metrics agree with a recount") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<double> scores;
    std::vector<PrivacyLabel> truth;
    std::vector<int> t01, p01;
    for (std::size_t i = 0; i < n; ++i) {
      const bool priv = rng() % 3 == 0;
      const double s = static_cast<double>(static_cast<int>(rng() % 7) - 3);
      truth.push_back(priv ? PrivacyLabel::Private : PrivacyLabel::Public);
      scores.push_back(s);
      t01.push_back(priv);
      p01.push_back(s > 0);
    }
    const EvalReport r = evaluate(std::span<const double>(scores), std::span<const PrivacyLabel>(truth));
    const oracle::Recount o = oracle::recount(t01, p01);
    CHECK(r.weighted_recall == r.accuracy);
    CHECK(std::abs(r.accuracy - o.accuracy) <= 1e-12);
    CHECK(std::abs(r.public_class.precision - o.precision[0]) <= 1e-12);
    CHECK(std::abs(r.private_class.precision - o.precision[1]) <= 1e-12);
    CHECK(std::abs(r.public_class.recall - o.recall[0]) <= 1e-12);
    CHECK(std::abs(r.private_class.recall - o.recall[1]) <= 1e-12);
    CHECK(std::abs(r.private_class.f1 - o.f1[1]) <= 1e-12);
    CHECK(std::abs(r.weighted_precision - o.weighted_precision) <= 1e-12);
    CHECK(std::abs(r.weighted_f1 - o.weighted_f1) <= 1e-12);
  }
}

TEST_CASE("precision-recall points") {
  const std::vector<double> scores{0.9, 0.8, 0.7};
  const std::vector<PrivacyLabel> truth{PrivacyLabel::Private, PrivacyLabel::Public, PrivacyLabel::Private};
  const auto curve = pr_curve(std::span<const double>(scores), std::span<const PrivacyLabel>(truth));
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].threshold == 0.9);
  CHECK(curve[0].precision == 1.0);
  CHECK(curve[0].recall == 0.5);
  CHECK(curve[1].precision == 0.5);
  CHECK(curve[1].recall == 0.5);
  CHECK(curve[2].precision == doctest::Approx(2.0 / 3.0));
  CHECK(curve[2].recall == 1.0);

  const std::vector<double> one{0.3};
  const std::vector<PrivacyLabel> pos{PrivacyLabel::Private};
  const auto single = pr_curve(std::span<const double>(one), std::span<const PrivacyLabel>(pos));
  REQUIRE(single.size() == 1);
  CHECK(single[0].precision == 1.0);
  CHECK(single[0].recall == 1.0);

  const std::vector<PrivacyLabel> neg{PrivacyLabel::Public};
  CHECK_THROWS_AS(pr_curve(std::span<const double>(one), std::span<const PrivacyLabel>(neg)), InputError);

  const std::vector<double> ranked{5, 4, 1, 0};
  const std::vector<PrivacyLabel> sorted{PrivacyLabel::Private, PrivacyLabel::Private, PrivacyLabel::Public,
                                         PrivacyLabel::Public};
  const auto perfect = pr_curve(std::span<const double>(ranked), std::span<const PrivacyLabel>(sorted));
  CHECK(std::any_of(perfect.begin(), perfect.end(), [](const PrPoint& p) { return p.precision == 1.0 && p.recall == 1.0; }));
}

TEST_CASE("grid search on separable blobs") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<Eigen::VectorXd> rows;
  std::vector<PrivacyLabel> labels;
  for (int i = 0; i < 80; ++i) {
    const bool priv = i % 4 == 0;
    Eigen::VectorXd x(2);
    x << (priv ? 3.0 : -3.0) + noise(rng), noise(rng);
    rows.push_back(x);
    labels.push_back(priv ? PrivacyLabel::Private : PrivacyLabel::Public);
  }
  // margin check without the solver: the first coordinate alone separates
  for (std::size_t i = 0; i < rows.size(); ++i) REQUIRE((rows[i][0] > 0) == (labels[i] == PrivacyLabel::Private));

  const DenseRepresentation rep(rows);
  std::vector<std::size_t> all(rows.size());
  std::iota(all.begin(), all.end(), 0);
  const GridResult full = grid_search_cv(rep, std::span<const PrivacyLabel>(labels), all, GridSpec::defaults(), 5, 3);
  CHECK(full.table.size() == 12);
  bool linear_perfect = false;
  for (const auto& row : full.table) linear_perfect |= row.kernel.kind == KernelKind::Linear && row.mean_accuracy == 1.0;
  CHECK(linear_perfect);
  CHECK(full.best.kernel.kind == KernelKind::Linear);
  CHECK(full.best.c == 0.1);

  GridSpec one;
  one.c_values = {5.0};
  one.kernels = {KernelSpec::rbf()};
  const GridResult single = grid_search_cv(rep, std::span<const PrivacyLabel>(labels), all, one, 5, 3);
  CHECK(single.table.size() == 1);
  CHECK(single.best.c == 5.0);
  CHECK(single.best.kernel.kind == KernelKind::Rbf);

  std::ostringstream csv;
  write_cv_table_csv(csv, single.table);
  CHECK(csv.str().rfind("c,kernel,gamma,mean_accuracy,std_accuracy\n5,rbf,auto,", 0) == 0);
}

TEST_CASE("best grid point tie-breaks") {
  std::vector<CvRow> table(3);
  table[0].c = 5;
  table[0].kernel = KernelSpec::linear();
  table[0].mean_accuracy = 0.8;
  table[1].c = 1;
  table[1].kernel = KernelSpec::rbf();
  table[1].mean_accuracy = 0.8;
  table[2].c = 1;
  table[2].kernel = KernelSpec::linear();
  table[2].mean_accuracy = 0.8;
  CHECK(detail::pick_best(table) == 2);
  table[0].mean_accuracy = 0.9;
  CHECK(detail::pick_best(table) == 0);
  const std::vector<double> acc{0.8, 0.9, 1.0};
  CHECK(detail::sample_std(acc) == doctest::Approx(0.1));
}

TEST_CASE("tag representation fits the vocabulary on the fit rows only") {
  const std::vector<TagSet> user{{"a"}, {"b"}, {"z"}};
  const std::vector<TagSet> deep{{"c"}, {"c"}, {"y"}};
  const TagRepresentation rep(user, deep, TagSource::Combined);
  const std::vector<std::size_t> fit{0, 1}, apply{2};
  const auto [train, test] = rep.materialize(fit, apply);
  CHECK(train[0].size() == 3);
  CHECK(test[0].nonZeros() == 0);
  const TagRepresentation user_only(user, deep, TagSource::User);
  CHECK(user_only.vocabulary(fit).size() == 2);
  CHECK(parse_tag_source("Deep") == TagSource::Deep);
  CHECK_THROWS_AS(parse_tag_source("both"), InputError);
}
