#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "privpred/annotate.hpp"

using namespace privpred;

TEST_CASE("softmax of (1, 2, 3) matches direct evaluation") {
  Eigen::VectorXd z(3);
  z << 1, 2, 3;
  const Eigen::VectorXd p = softmax(z);
  const auto ref = oracle::softmax_direct({1, 2, 3});
  for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - static_cast<double>(ref[i])) <= 1e-7);
  // frozen from the long double oracle
  CHECK(std::abs(p[0] - 0.09003057) <= 1e-7);
  CHECK(std::abs(p[1] - 0.24472847) <= 1e-7);
  CHECK(std::abs(p[2] - 0.66524096) <= 1e-7);
}

TEST_CASE("softmax edge cases") {
  const Eigen::VectorXd u = softmax(Eigen::VectorXd::Zero(4));
  for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25));
  Eigen::VectorXd big(2);
  big << 1000, 1000;
  const Eigen::VectorXd h = softmax(big);
  CHECK(h[0] == 0.5);
  CHECK(h[1] == 0.5);
  CHECK_THROWS_AS(softmax(Eigen::VectorXd()), InputError);
  Eigen::VectorXd inf(2);
  inf << 1, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(softmax(inf), InputError);
}

TEST_CASE("softmax properties on random logits") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd z(1 + t % 30);
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    const Eigen::VectorXd p = softmax(z);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-9);
    const Eigen::VectorXd q = softmax((z.array() + 17.25).matrix());
    CHECK((p - q).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::Index a, b;
    z.maxCoeff(&a);
    p.maxCoeff(&b);
    CHECK(a == b);
  }
}

TEST_CASE("top-k deep tags") {
  const CategoryLexicon lex({"A", "B", "C"});
  AnnotationConfig cfg;
  cfg.k = 1;
  Eigen::VectorXd p(3);
  p << 0.1, 0.7, 0.2;
  CHECK(top_k_tags(p, lex, cfg) == TagSet{"b"});

  cfg.k = 2;
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  CHECK(top_k_tags(uniform, lex, cfg) == TagSet{"a", "b"});

  cfg.k = 4;
  CHECK_THROWS_AS(top_k_tags(uniform, lex, cfg), InputError);

  const CategoryLexicon swim({"tench", "Maillot", "tank suit", "bikini", "sandal", "wig", "lipstick"});
  Eigen::VectorXd s(7);
  s << 0.01, 0.3, 0.25, 0.2, 0.1, 0.09, 0.05;
  cfg.k = 5;
  const TagSet tags = top_k_tags(s, swim, cfg);
  CHECK(tags.size() == 5);
  CHECK(tags.count("maillot") == 1);
  CHECK(tags.count("tank suit") == 1);
}

TEST_CASE("user tag cleaning") {
  AnnotationConfig cfg;
  cfg.stopwords = {"the"};
  const std::vector<std::string> raw{"Birthday", "party", "2009", "http://a.b/c"};
  CHECK(normalize_user_tags(std::span<const std::string>(raw), cfg) == TagSet{"birthday", "party"});
  const std::vector<std::string> long_tag{"a very long five token tag"};
  CHECK(normalize_user_tags(std::span<const std::string>(long_tag), cfg).empty());
  const std::vector<std::string> stop{"the"};
  CHECK(normalize_user_tags(std::span<const std::string>(stop), cfg).empty());
  const std::vector<std::string> misc{"  New   York ", "www.flickr.com", "12-25", "!!!", "four token tag ok"};
  CHECK(normalize_user_tags(std::span<const std::string>(misc), cfg) == TagSet{"four token tag ok", "new york"});
}

TEST_CASE("deep tag annotation writes k tags per image") {
  Dataset data;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<std::string> names;
  for (int i = 0; i < 20; ++i) names.push_back("cat" + std::to_string(i));
  const CategoryLexicon lex(names);
  for (int r = 0; r < 5; ++r) {
    const std::string id = "img" + std::to_string(r);
    data.add(id);
    Eigen::VectorXd z(20);
    for (int i = 0; i < 20; ++i) z[i] = normal(rng);
    data.set_feature(id, "fc8", z);
  }
  AnnotationConfig cfg;
  annotate_deep_tags(data, lex, cfg);
  derive_prob_layer(data);
  for (const auto& rec : data.records()) {
    CHECK(rec.deep_tags.size() == 10);
    CHECK(rec.features.at("prob").sum() == doctest::Approx(1.0));
  }
}
