#include "doctest.h"

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "privpred/taglab.hpp"

using namespace privpred;

namespace {

TaggedRecord rec(TagSet tags, bool priv) {
  return {std::move(tags), priv ? PrivacyLabel::Private : PrivacyLabel::Public};
}

double ig_of(const std::vector<TagStat>& stats, const std::string& tag) {
  for (const auto& s : stats)
    if (s.tag == tag) return s.ig;
  FAIL("tag missing: " << tag);
  return 0.0;
}

}  // namespace

TEST_CASE("information gain hand examples") {
  const std::vector<TaggedRecord> perfect{rec({"t"}, true), rec({"t"}, true), rec({}, false), rec({}, false)};
  CHECK(ig_of(information_gain(perfect), "t") == 1.0);

  const std::vector<TaggedRecord> constant{rec({"c"}, true), rec({"c"}, false), rec({"c"}, false)};
  CHECK(ig_of(information_gain(constant), "c") == 0.0);

  const std::vector<TaggedRecord> six{rec({"t"}, true), rec({"t"}, true), rec({}, true),
                                      rec({"t"}, false), rec({}, false), rec({}, false)};
  CHECK(std::abs(ig_of(information_gain(six), "t") - 0.0817) <= 1e-4);

  const std::vector<TaggedRecord> single{rec({"t"}, true), rec({}, true)};
  CHECK_THROWS_AS(information_gain(single), InputError);
}

TEST_CASE("information gain matches contingency counts") {
  std::mt19937_64 rng(9);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<TaggedRecord> records;
    std::vector<std::pair<std::set<std::string>, bool>> plain;
    for (std::size_t i = 0; i < n; ++i) {
      TagSet tags;
      for (const auto& v : vocab)
        if (rng() % 3 == 0) tags.insert(v);
      const bool priv = i == 0 ? true : i == 1 ? false : rng() % 2 == 0;
      plain.emplace_back(std::set<std::string>(tags.begin(), tags.end()), priv);
      records.push_back(rec(std::move(tags), priv));
    }
    for (const auto& s : information_gain(records)) CHECK(std::abs(s.ig - oracle::info_gain(plain, s.tag)) <= 1e-9);
  }
}

TEST_CASE("ranking order and cross-validated mean") {
  const std::vector<TaggedRecord> records{rec({"portrait", "x"}, true), rec({"portrait"}, true),
                                          rec({"x"}, false),            rec({"sky"}, false),
                                          rec({"portrait", "sky"}, true), rec({"sky", "x"}, false)};
  const auto stats = information_gain(records);
  for (std::size_t i = 1; i < stats.size(); ++i) CHECK(stats[i - 1].ig >= stats[i].ig);
  CHECK(stats.front().tag == "portrait");
  const auto cv = information_gain_cv(records, 3, 1);
  CHECK(cv.size() == stats.size());
  for (const auto& s : cv) {
    CHECK(s.ig >= 0.0);
    CHECK(s.ig <= 1.0);
  }
}

TEST_CASE("frequency cloud") {
  const std::vector<TaggedRecord> records{rec({"portrait", "me"}, true), rec({"portrait"}, true), rec({"cat"}, true),
                                          rec({"portrait", "sky"}, false)};
  const auto cloud = frequency_cloud(records, PrivacyLabel::Private, 100);
  REQUIRE(cloud.size() == 3);
  CHECK(cloud[0] == std::pair<std::string, std::size_t>{"portrait", 2});
  CHECK(frequency_cloud(records, PrivacyLabel::Private, 1).size() == 1);
  std::ostringstream out;
  write_cloud_csv(out, cloud, PrivacyLabel::Private);
  CHECK(out.str().rfind("tag,count,class\nportrait,2,private\n", 0) == 0);
}

TEST_CASE("co-occurrence graph and ego subgraph") {
  const std::vector<TaggedRecord> records{rec({"photo", "portrait"}, true), rec({"photo", "portrait"}, true),
                                          rec({"alone"}, true), rec({"girl", "beach"}, true),
                                          rec({"girl", "beach"}, true), rec({"photo", "portrait"}, false)};
  const auto graph = cooccurrence_graph(records, PrivacyLabel::Private, 2);
  CHECK(graph.edges.size() == 2);
  CHECK(graph.edges.at({"photo", "portrait"}) == 2);
  CHECK(graph.nodes.count("alone") == 0);
  CHECK(cooccurrence_graph(records, PrivacyLabel::Private, 3).edges.empty());
  CHECK_THROWS_AS(cooccurrence_graph(records, PrivacyLabel::Private, 0), InputError);

  const auto ego = ego_subgraph(graph, {"photo"});
  CHECK(ego.edges.size() == 1);
  CHECK(ego.edges.count({"photo", "portrait"}) == 1);
  CHECK(ego_subgraph(graph, {"absent"}).edges.empty());

  std::ostringstream dot;
  write_dot(dot, ego);
  CHECK(dot.str() == "graph {\n  \"photo\" -- \"portrait\" [weight=2];\n}\n");
}

TEST_CASE("ig csv") {
  const std::vector<TaggedRecord> records{rec({"t"}, true), rec({}, false)};
  std::ostringstream out;
  write_ig_csv(out, information_gain(records), {{"t", "deep"}});
  CHECK(out.str() == "rank,tag,ig_bits,source\n1,t,1,deep\n");
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
}
