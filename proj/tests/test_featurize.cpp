#include "doctest.h"

#include <sstream>

#include "privpred/featurize.hpp"

using namespace privpred;

TEST_CASE("vocabulary enumeration and document-frequency threshold") {
  const std::vector<TagSet> train{{"a", "b"}, {"b", "c"}};
  const TagVocabulary v1 = build_vocabulary(train, 1);
  CHECK(v1.index() == std::map<std::string, Eigen::Index>{{"a", 0}, {"b", 1}, {"c", 2}});
  const TagVocabulary v2 = build_vocabulary(train, 2);
  CHECK(v2.index() == std::map<std::string, Eigen::Index>{{"b", 0}});
  CHECK_THROWS_AS(build_vocabulary(std::vector<TagSet>{}, 1), InputError);
}

TEST_CASE("binary vectorization") {
  const TagVocabulary vocab = build_vocabulary(std::vector<TagSet>{{"a", "b"}, {"b", "c"}}, 1);
  const SparseVector x = vectorize(TagSet{"a", "c"}, vocab);
  CHECK(x.size() == 3);
  CHECK(x.nonZeros() == 2);
  CHECK(x.coeff(0) == 1.0);
  CHECK(x.coeff(2) == 1.0);
  CHECK(vectorize(TagSet{}, vocab).nonZeros() == 0);
  CHECK(vectorize(TagSet{}, vocab).size() == 3);
  CHECK(vectorize(TagSet{"z"}, vocab).nonZeros() == 0);
}

TEST_CASE("combined sources") {
  CHECK(combine_tagsets({"girl"}, {"maillot", "tank suit"}) == TagSet{"girl", "maillot", "tank suit"});
  CHECK(combine_tagsets({"a"}, {"a"}) == TagSet{"a"});
  const TagVocabulary vocab = build_vocabulary(std::vector<TagSet>{{"a", "b"}}, 1);
  const SparseVector bin = vectorize(TagSet{"a"}, TagSet{"a", "b"}, vocab, TagEncoding::Binary);
  const SparseVector cnt = vectorize(TagSet{"a"}, TagSet{"a", "b"}, vocab, TagEncoding::Count);
  CHECK(bin.coeff(0) == 1.0);
  CHECK(cnt.coeff(0) == 2.0);
  CHECK(cnt.coeff(1) == 1.0);
}

TEST_CASE("vocabulary csv quotes awkward tags") {
  const TagVocabulary vocab = build_vocabulary(std::vector<TagSet>{{"plain", "with,comma", "say \"hi\""}}, 1);
  std::ostringstream out;
  vocab.write_csv(out);
  CHECK(out.str() == "tag,index\nplain,0\n\"say \"\"hi\"\"\",1\n\"with,comma\",2\n");
}

TEST_CASE("standardizer uses training statistics") {
  Eigen::MatrixXd rows(3, 2);
  rows << 1, 5, 2, 5, 3, 5;
  const Standardizer s = Standardizer::fit(rows);
  Eigen::VectorXd x(2);
  x << 2, 7;
  const Eigen::VectorXd z = s.transform(x);
  CHECK(z[0] == doctest::Approx(0.0));
  CHECK(z[1] == doctest::Approx(2.0));  // constant column keeps unit scale
  x << 3, 5;
  CHECK(s.transform(x)[0] == doctest::Approx(std::sqrt(1.5)));
}
