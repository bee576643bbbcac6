#ifndef PRIVPRED_WORDNET_HPP
#define PRIVPRED_WORDNET_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "privpred/annotate.hpp"
#include "privpred/common.hpp"

namespace privpred::wordnet {

// Part of speech as used for file names: 'n', 'v', 'a' (including satellites), 'r'.
using Pos = char;

struct SynsetId {
  Pos pos = 'n';
  std::uint32_t offset = 0;
  auto operator<=>(const SynsetId&) const = default;
};

struct SynsetIdHash {
  std::size_t operator()(const SynsetId& id) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<unsigned char>(id.pos)) << 32) | id.offset);
  }
};

struct Pointer {
  std::string symbol;  // "@" hypernym, "~" hyponym, ...
  SynsetId target;
};

struct Synset {
  std::vector<std::string> lemmas;  // lowercase, underscores for spaces
  std::vector<Pointer> pointers;
};

// One line of an index.<pos> file, kept whole so it can be written back.
struct IndexEntry {
  std::string lemma;
  Pos pos = 'n';
  std::vector<std::string> pointer_symbols;
  std::uint32_t sense_count = 0;
  std::uint32_t tagged_sense_count = 0;
  std::vector<std::uint32_t> offsets;
};

class Lexicon {
 public:
  // Parses one index/data file pair. Pointers into parts of speech that are not
  // loaded are dropped; all other pointer targets must exist.
  void load(std::istream& index, std::istream& data, const std::string& index_name = "index",
            const std::string& data_name = "data");
  void load_files(const std::filesystem::path& index_file, const std::filesystem::path& data_file);

  const Synset* synset(SynsetId id) const;
  // Senses of a lemma (spaces or underscores accepted) across the loaded parts of speech.
  std::vector<SynsetId> senses(std::string_view lemma) const;

  std::size_t synset_count() const { return synsets_.size(); }
  std::size_t lemma_count() const { return index_.size(); }
  const std::map<std::string, std::vector<IndexEntry>>& index() const { return index_; }

  // Writes the retained index entries of one part of speech in index-file line format.
  void write_index(std::ostream& out, Pos pos) const;

 private:
  void validate_pointers(const std::string& data_name) const;

  std::unordered_map<SynsetId, Synset, SynsetIdHash> synsets_;
  std::map<std::string, std::vector<IndexEntry>> index_;
  std::vector<Pos> loaded_;
};

Lexicon parse_wordnet(const std::filesystem::path& index_file, const std::filesystem::path& data_file);

// Loads index.<pos>/data.<pos> for each requested part of speech ("noun", "verb",
// "adj", "adv") from a WordNet dict directory.
Lexicon load_directory(const std::filesystem::path& dict_dir, const std::vector<std::string>& parts = {"noun"});

enum class Relation { Synonym, Hypernym, Hyponym };
Relation parse_relation(std::string_view text);
std::string_view to_string(Relation relation);

struct ExpansionSpec {
  Relation relation = Relation::Hypernym;
  int depth = 1;
};

// tags plus related lemmas over every sense (no disambiguation). Hypernyms and
// hyponyms follow up to `depth` pointer hops (instance links included). Added
// lemmas pass through the user-tag normalization, so over-long ones are dropped.
TagSet expand_tagset(const TagSet& tags, const Lexicon& lexicon, const ExpansionSpec& spec,
                     const AnnotationConfig& cleaning = {});

}  // namespace privpred::wordnet

#endif  // PRIVPRED_WORDNET_HPP
