#include "doctest.h"

#include <sstream>

#include "privpred/cli.hpp"
#include "privpred/corpus.hpp"
#include "privpred/gist.hpp"
#include "synthetic.hpp"

using namespace privpred;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path corpus_dir(const std::string& name, synthetic::CorpusSpec spec = {}) {
  const fs::path dir = synthetic::fresh_dir(name);
  synthetic::write_corpus(dir, spec);
  return dir;
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::istringstream in(synthetic::slurp(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("annotate writes k deep tags per image behind a metadata line") {
  const fs::path dir = corpus_dir("annotate");
  const fs::path out = dir / "out";
  const Run r = run({"--config", (dir / "config.json").string(), "--out", out.string(), "annotate"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto lines = lines_of(out / "deep_tags.jsonl");
  REQUIRE(lines.size() == 201);
  CHECK(lines[0].rfind("# privpred 0.1.0 seed=7 config=", 0) == 0);
  const TagTable table = load_tag_table(out / "deep_tags.jsonl");
  for (const auto& e : table) CHECK(e.tags.size() == 10);
  CHECK(fs::exists(out / "user_tags.jsonl"));
  CHECK(fs::exists(out / "prob.jsonl"));

  const Run one = run({"--config", (dir / "config.json").string(), "--out", (dir / "k1").string(), "annotate",
                       "--k", "1"});
  REQUIRE(one.code == 0);
  for (const auto& e : load_tag_table(dir / "k1" / "deep_tags.jsonl")) CHECK(e.tags.size() == 1);

  const Run missing = run({"--config", (dir / "config.json").string(), "--out", out.string(), "annotate",
                           "--lexicon", (dir / "nope.txt").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("lexicon") != std::string::npos);
}

TEST_CASE("usage and config errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--config", "/does/not/exist.json", "annotate"}).code == 2);
  const fs::path dir = synthetic::fresh_dir("badcfg");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(run({"--config", (dir / "bad.json").string(), "annotate"}).code == 2);
  std::ofstream(dir / "folds.json") << "{\"outer_folds\": 1}";
  CHECK(run({"--config", (dir / "folds.json").string(), "annotate"}).code == 2);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("experiment on a separable corpus is perfect and repeatable") {
  synthetic::CorpusSpec spec;
  spec.marker_private = 1.0;
  spec.marker_public = 0.0;
  const fs::path dir = corpus_dir("separable", spec);
  const std::vector<std::string> base{"--config", (dir / "config.json").string()};
  auto args = base;
  args.insert(args.end(), {"--out", (dir / "a").string(), "experiment", "--tag-source", "user"});
  const Run r1 = run(args);
  REQUIRE_MESSAGE(r1.code == 0, r1.err);
  CHECK(r1.err.find("chosen kernel=") != std::string::npos);
  CHECK(synthetic::report_value(dir / "a" / "report.txt", "accuracy") == 1.0);
  CHECK(fs::exists(dir / "a" / "pr_curve.csv"));
  CHECK(lines_of(dir / "a" / "cv_table.csv").size() == 14);

  args = base;
  args.insert(args.end(), {"--out", (dir / "b").string(), "experiment", "--tag-source", "user"});
  REQUIRE(run(args).code == 0);
  for (const auto* name : {"report.txt", "pr_curve.csv", "cv_table.csv"})
    CHECK(synthetic::slurp(dir / "a" / name) == synthetic::slurp(dir / "b" / name));
}

TEST_CASE("dense layer experiment") {
  const fs::path dir = corpus_dir("dense");
  const Run r = run({"--config", (dir / "config.json").string(), "--out", (dir / "o").string(), "experiment",
                     "--representation", "fc8", "--standardize"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(synthetic::report_value(dir / "o" / "report.txt", "accuracy") > 0.5);
  CHECK(run({"--config", (dir / "config.json").string(), "experiment", "--representation", "fc9"}).code == 2);
}

TEST_CASE("tag analytics exports") {
  const fs::path dir = corpus_dir("tags");
  const std::string cfg = (dir / "config.json").string();
  const std::string out = (dir / "o").string();
  REQUIRE(run({"--config", cfg, "--out", out, "tags", "ig"}).code == 0);
  const auto ig = lines_of(dir / "o" / "ig.csv");
  CHECK(ig[1] == "rank,tag,ig_bits,source");
  CHECK(ig[2].rfind("1,p_marker,", 0) == 0);

  REQUIRE(run({"--config", cfg, "--out", out, "tags", "cloud", "--class", "public", "--top", "5"}).code == 0);
  CHECK(lines_of(dir / "o" / "cloud_public.csv").size() <= 7);

  REQUIRE(run({"--config", cfg, "--out", out, "tags", "graph", "--class", "private", "--focus", "p_marker",
               "--threshold", "2"})
              .code == 0);
  const auto dot = synthetic::slurp(dir / "o" / "graph_private.dot");
  CHECK(dot.find("graph {") != std::string::npos);
  CHECK(dot.find("\"p_marker\"") != std::string::npos);
  CHECK(fs::exists(dir / "o" / "graph_private.txt"));
  CHECK(run({"--config", cfg, "tags", "cloud", "--class", "secret"}).code == 2);

  REQUIRE(run({"--config", cfg, "--out", out, "featurize"}).code == 0);
  CHECK(fs::exists(dir / "o" / "vocab.csv"));
  CHECK(fs::exists(dir / "o" / "bag_of_tags.jsonl"));
}

TEST_CASE("gist over a directory with one corrupt file") {
  const fs::path dir = synthetic::fresh_dir("gist");
  const fs::path images = dir / "images";
  fs::create_directories(images);
  for (int i = 0; i < 3; ++i) {
    gist::GrayImage img(20 + i, 24);
    for (Eigen::Index r = 0; r < img.rows(); ++r)
      for (Eigen::Index c = 0; c < img.cols(); ++c) img(r, c) = ((r * 7 + c * (i + 3)) % 11) / 10.0;
    std::ofstream f(images / ("im" + std::to_string(i) + ".pgm"), std::ios::binary);
    gist::write_pgm(f, img);
  }
  const Run clean = run({"--out", (dir / "o").string(), "gist", "--images", images.string()});
  REQUIRE_MESSAGE(clean.code == 0, clean.err);
  const Dataset table = load_feature_table(dir / "o" / "gist.jsonl", "gist");
  CHECK(table.size() == 3);
  CHECK(table.layer_dimension("gist") == 512);

  std::ofstream(images / "broken.pgm", std::ios::binary) << "P5\n10 10\n255\nxx";
  const Run partial = run({"--out", (dir / "p").string(), "gist", "--images", images.string()});
  CHECK(partial.code == 0);
  CHECK(partial.err.find("warnings: 1") != std::string::npos);
  CHECK(load_feature_table(dir / "p" / "gist.jsonl", "gist").size() == 3);

  fs::create_directories(dir / "empty");
  CHECK(run({"--out", (dir / "e").string(), "gist", "--images", (dir / "empty").string()}).code == 2);
}

TEST_CASE("wordnet expand") {
  const fs::path dir = synthetic::fresh_dir("wn");
  std::ofstream(dir / "tags.jsonl") << "{\"id\":\"a\",\"tags\":[\"bikini\",\"Beach\"]}\n";
  const Run r = run({"--out", (dir / "o").string(), "wordnet", "expand", "--tags", (dir / "tags.jsonl").string(),
                     "--wordnet-dir", PRIVPRED_WORDNET, "--relation", "hypernym"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const TagTable t = load_tag_table(dir / "o" / "expanded_tags.jsonl");
  REQUIRE(t.size() == 1);
  CHECK(std::find(t[0].tags.begin(), t[0].tags.end(), "swimsuit") != t[0].tags.end());
  CHECK(std::find(t[0].tags.begin(), t[0].tags.end(), "beach") != t[0].tags.end());
  CHECK(run({"--out", (dir / "o").string(), "wordnet", "expand", "--tags", (dir / "tags.jsonl").string(),
             "--wordnet-dir", (dir / "missing").string()})
            .code == 2);
}
