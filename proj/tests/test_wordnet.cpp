#include "doctest.h"

#include <random>
#include <sstream>

#include "privpred/wordnet.hpp"

using namespace privpred;
using namespace privpred::wordnet;

namespace {

const char* kIndex =
    "  1 This software and database is being provided to you, the LICENSEE, by  \n"
    "bikini n 1 1 @ 1 0 00000100  \n"
    "swimsuit n 1 2 @ ~ 1 0 00000200  \n"
    "garment n 1 1 ~ 1 0 00000300  \n";

const char* kData =
    "  1 This software and database is being provided to you, the LICENSEE, by  \n"
    "00000100 06 n 02 bikini 0 two-piece 0 001 @ 00000200 n 0000 | a woman's very brief bathing suit  \n"
    "00000200 06 n 02 swimsuit 0 bathing_suit 0 003 @ 00000300 n 0000 ~ 00000100 n 0000 ;c 00000300 n 0000 | "
    "tight fitting garment  \n"
    "00000300 06 n 01 garment 0 001 ~ 00000200 n 0000 | an article of clothing  \n";

Lexicon fixture() {
  std::istringstream index(kIndex), data(kData);
  Lexicon lex;
  lex.load(index, data);
  return lex;
}

Lexicon& full_nouns() {
  static Lexicon lex = load_directory(PRIVPRED_WORDNET, {"noun"});
  return lex;
}

}  // namespace

TEST_CASE("small fixture parses, skipping license lines") {
  const Lexicon lex = fixture();
  CHECK(lex.synset_count() == 3);
  const auto senses = lex.senses("bikini");
  REQUIRE(senses.size() == 1);
  const Synset* s = lex.synset(senses[0]);
  REQUIRE(s->pointers.size() == 1);
  CHECK(s->pointers[0].symbol == "@");
  CHECK(lex.synset(s->pointers[0].target)->lemmas.front() == "swimsuit");
}

TEST_CASE("expansion by relation") {
  const Lexicon lex = fixture();
  CHECK(expand_tagset({"bikini"}, lex, {Relation::Synonym, 1}) == TagSet{"bikini", "two-piece"});
  CHECK(expand_tagset({"bikini"}, lex, {Relation::Hypernym, 1}) == TagSet{"bathing suit", "bikini", "swimsuit"});
  CHECK(expand_tagset({"bikini"}, lex, {Relation::Hypernym, 2}) ==
        TagSet{"bathing suit", "bikini", "garment", "swimsuit"});
  CHECK(expand_tagset({"garment"}, lex, {Relation::Hyponym, 1}) == TagSet{"bathing suit", "garment", "swimsuit"});
  CHECK(expand_tagset({"unknownword"}, lex, {Relation::Hypernym, 3}) == TagSet{"unknownword"});
  CHECK(expand_tagset({"swimsuit"}, lex, {Relation::Synonym, 1}) == TagSet{"bathing suit", "swimsuit"});
}

TEST_CASE("malformed and dangling input") {
  std::istringstream index1(""), data1("00000100 06 n 01 x 0 001 @ 00000999 n 0000 | gloss\n");
  Lexicon lex1;
  CHECK_THROWS_AS(lex1.load(index1, data1), InputError);

  std::istringstream index2(""), data2("00000100 06 n zz\n");
  Lexicon lex2;
  try {
    lex2.load(index2, data2, "index.noun", "data.noun");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("data.noun:1") != std::string::npos);
  }

  std::istringstream index3("ghost n 1 0 1 0 00000777  \n"), data3("00000100 06 n 01 x 0 000 | gloss\n");
  Lexicon lex3;
  CHECK_THROWS_AS(lex3.load(index3, data3), InputError);
}

TEST_CASE("index lines are written back verbatim") {
  const Lexicon lex = fixture();
  std::ostringstream out;
  lex.write_index(out, 'n');
  CHECK(out.str() == "bikini n 1 1 @ 1 0 00000100  \ngarment n 1 1 ~ 1 0 00000300  \nswimsuit n 1 2 @ ~ 1 0 00000200  \n");
}

TEST_CASE("full noun database") {
  const Lexicon& lex = full_nouns();
  CHECK(lex.synset_count() == 82115);
  CHECK(lex.lemma_count() == 117798);

  const auto bikini = lex.senses("bikini");
  REQUIRE(bikini.size() == 2);
  const TagSet syn = expand_tagset({"bikini"}, lex, {Relation::Synonym, 1});
  CHECK(syn.count("two-piece") == 1);
  const TagSet hyper = expand_tagset({"bikini"}, lex, {Relation::Hypernym, 1});
  CHECK(hyper.count("swimsuit") == 1);
  CHECK(hyper.count("bathing suit") == 1);

  // the written index reproduces the file line for line
  std::ostringstream out;
  lex.write_index(out, 'n');
  CHECK(out.str().find("\nbikini n 2 2 @ #p 2 0 08839296 02837789  \n") != std::string::npos);
}

TEST_CASE("expansion keeps the input tags") {
  const Lexicon& lex = full_nouns();
  std::vector<std::string> lemmas;
  for (const auto& [lemma, entries] : lex.index())
    if (lemma.size() < 12) lemmas.push_back(lemma);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    TagSet tags;
    for (int i = 0; i < 3; ++i) {
      std::string lemma = lemmas[rng() % lemmas.size()];
      std::replace(lemma.begin(), lemma.end(), '_', ' ');
      tags.insert(lemma);
    }
    tags.insert("not a wordnet lemma at all");
    const auto relation = static_cast<Relation>(t % 3);
    const TagSet out = expand_tagset(tags, lex, {relation, 1 + t % 2});
    CHECK(std::includes(out.begin(), out.end(), tags.begin(), tags.end()));
  }
}

TEST_CASE("relation names") {
  CHECK(parse_relation("Hypernym") == Relation::Hypernym);
  CHECK(to_string(Relation::Hyponym) == "hyponym");
  CHECK_THROWS_AS(parse_relation("meronym"), InputError);
  CHECK_THROWS_AS(load_directory(PRIVPRED_WORDNET, {"nouns"}), InputError);
}
