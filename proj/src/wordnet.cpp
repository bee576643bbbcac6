#include "privpred/wordnet.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

namespace privpred::wordnet {
namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

class LineError {
 public:
  LineError(const std::string& file, std::size_t line) : prefix_(file + ":" + std::to_string(line) + ": ") {}
  [[noreturn]] void fail(const std::string& what) const { throw InputError(prefix_ + what); }

 private:
  std::string prefix_;
};

template <typename T>
T parse_number(std::string_view token, int base, const LineError& err, const char* what) {
  T value{};
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value, base);
  if (ec != std::errc{} || end != token.data() + token.size())
    err.fail(std::string("bad ") + what + " '" + std::string(token) + "'");
  return value;
}

Pos file_pos(char c, const LineError& err) {
  switch (c) {
    case 'n':
    case 'v':
    case 'r':
      return c;
    case 'a':
    case 's':
      return 'a';
    default:
      err.fail(std::string("unknown part of speech '") + c + "'");
  }
}

// Adjective lemmas may carry a syntactic marker such as "(p)".
std::string clean_lemma(std::string_view word) {
  if (word.ends_with(")")) {
    const auto open = word.rfind('(');
    if (open != std::string_view::npos && open > 0) word = word.substr(0, open);
  }
  return to_lower(word);
}

std::string lemma_key(std::string_view text) {
  std::string key = to_lower(trim(text));
  std::replace(key.begin(), key.end(), ' ', '_');
  return key;
}

bool is_header(std::string_view line) { return line.starts_with("  "); }

}  // namespace

void Lexicon::load(std::istream& index, std::istream& data, const std::string& index_name,
                   const std::string& data_name) {
  std::string line;
  std::size_t line_no = 0;
  std::set<Pos> parsed_parts;

  std::vector<std::pair<SynsetId, Synset>> parsed;
  while (std::getline(data, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || is_header(line)) continue;
    const LineError err(data_name, line_no);
    const auto bar = line.find(" | ");
    const auto tokens = tokenize(std::string_view(line).substr(0, bar == std::string::npos ? line.size() : bar));
    if (tokens.size() < 6) err.fail("malformed data line");
    const auto offset = parse_number<std::uint32_t>(tokens[0], 10, err, "synset offset");
    if (tokens[2].size() != 1) err.fail("malformed synset type");
    const Pos pos = file_pos(tokens[2][0], err);
    const auto word_count = parse_number<std::size_t>(tokens[3], 16, err, "word count");
    std::size_t t = 4;
    if (word_count == 0 || t + 2 * word_count >= tokens.size()) err.fail("word list overruns line");
    Synset synset;
    for (std::size_t w = 0; w < word_count; ++w, t += 2) {
      synset.lemmas.push_back(clean_lemma(tokens[t]));
      parse_number<unsigned>(tokens[t + 1], 16, err, "lex_id");
    }
    const auto pointer_count = parse_number<std::size_t>(tokens[t++], 10, err, "pointer count");
    if (t + 4 * pointer_count > tokens.size()) err.fail("pointer list overruns line");
    for (std::size_t p = 0; p < pointer_count; ++p, t += 4) {
      if (tokens[t + 2].size() != 1) err.fail("malformed pointer part of speech");
      const Pos target_pos = file_pos(tokens[t + 2][0], err);
      const auto target = parse_number<std::uint32_t>(tokens[t + 1], 10, err, "pointer offset");
      if (tokens[t + 3].size() != 4) err.fail("malformed pointer source/target field");
      synset.pointers.push_back({std::string(tokens[t]), SynsetId{target_pos, target}});
    }
    parsed_parts.insert(pos);
    parsed.emplace_back(SynsetId{pos, offset}, std::move(synset));
  }
  for (auto& [id, synset] : parsed)
    if (!synsets_.emplace(id, std::move(synset)).second)
      throw InputError(data_name + ": duplicate synset offset " + std::to_string(id.offset));
  for (const Pos p : parsed_parts)
    if (std::find(loaded_.begin(), loaded_.end(), p) == loaded_.end()) loaded_.push_back(p);

  // Drop pointers to parts of speech that are not loaded; everything else must resolve.
  for (auto& [id, synset] : synsets_) {
    std::erase_if(synset.pointers, [&](const Pointer& ptr) {
      return std::find(loaded_.begin(), loaded_.end(), ptr.target.pos) == loaded_.end();
    });
  }
  validate_pointers(data_name);

  line_no = 0;
  while (std::getline(index, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || is_header(line)) continue;
    const LineError err(index_name, line_no);
    const auto tokens = tokenize(line);
    if (tokens.size() < 6) err.fail("malformed index line");
    IndexEntry entry;
    entry.lemma = to_lower(tokens[0]);
    if (tokens[1].size() != 1) err.fail("malformed part of speech");
    entry.pos = file_pos(tokens[1][0], err);
    const auto synset_count = parse_number<std::size_t>(tokens[2], 10, err, "synset count");
    const auto pointer_count = parse_number<std::size_t>(tokens[3], 10, err, "pointer count");
    std::size_t t = 4;
    if (t + pointer_count + 2 + synset_count != tokens.size()) err.fail("field counts do not match line length");
    for (std::size_t p = 0; p < pointer_count; ++p) entry.pointer_symbols.emplace_back(tokens[t++]);
    entry.sense_count = parse_number<std::uint32_t>(tokens[t++], 10, err, "sense count");
    entry.tagged_sense_count = parse_number<std::uint32_t>(tokens[t++], 10, err, "tagged sense count");
    for (std::size_t s = 0; s < synset_count; ++s) {
      const auto offset = parse_number<std::uint32_t>(tokens[t++], 10, err, "synset offset");
      if (!synsets_.contains(SynsetId{entry.pos, offset}))
        err.fail("index refers to missing synset " + std::string(tokens[t - 1]));
      entry.offsets.push_back(offset);
    }
    index_[entry.lemma].push_back(std::move(entry));
  }
}

void Lexicon::validate_pointers(const std::string& data_name) const {
  for (const auto& [id, synset] : synsets_)
    for (const auto& ptr : synset.pointers)
      if (!synsets_.contains(ptr.target))
        throw InputError(data_name + ": synset " + std::to_string(id.offset) + " has dangling pointer '" +
                         ptr.symbol + "' to " + std::to_string(ptr.target.offset));
}

void Lexicon::load_files(const std::filesystem::path& index_file, const std::filesystem::path& data_file) {
  std::ifstream index(index_file);
  if (!index) throw InputError("cannot open WordNet index '" + index_file.string() + "'");
  std::ifstream data(data_file);
  if (!data) throw InputError("cannot open WordNet data '" + data_file.string() + "'");
  load(index, data, index_file.string(), data_file.string());
}

const Synset* Lexicon::synset(SynsetId id) const {
  const auto it = synsets_.find(id);
  return it == synsets_.end() ? nullptr : &it->second;
}

std::vector<SynsetId> Lexicon::senses(std::string_view lemma) const {
  std::vector<SynsetId> out;
  const auto it = index_.find(lemma_key(lemma));
  if (it == index_.end()) return out;
  for (const auto& entry : it->second)
    for (const auto offset : entry.offsets) out.push_back({entry.pos, offset});
  return out;
}

void Lexicon::write_index(std::ostream& out, Pos pos) const {
  for (const auto& [lemma, entries] : index_) {
    for (const auto& e : entries) {
      if (e.pos != pos) continue;
      out << e.lemma << ' ' << e.pos << ' ' << e.offsets.size() << ' ' << e.pointer_symbols.size() << ' ';
      for (const auto& symbol : e.pointer_symbols) out << symbol << ' ';
      out << e.sense_count << ' ' << e.tagged_sense_count;
      for (const auto offset : e.offsets) out << ' ' << std::setw(8) << std::setfill('0') << offset;
      out << "  \n";
    }
  }
}

Lexicon parse_wordnet(const std::filesystem::path& index_file, const std::filesystem::path& data_file) {
  Lexicon lexicon;
  lexicon.load_files(index_file, data_file);
  return lexicon;
}

Lexicon load_directory(const std::filesystem::path& dict_dir, const std::vector<std::string>& parts) {
  Lexicon lexicon;
  for (const auto& part : parts) {
    if (part != "noun" && part != "verb" && part != "adj" && part != "adv")
      throw InputError("unknown WordNet part of speech '" + part + "'");
    lexicon.load_files(dict_dir / ("index." + part), dict_dir / ("data." + part));
  }
  return lexicon;
}

Relation parse_relation(std::string_view text) {
  const std::string lowered = to_lower(trim(text));
  if (lowered == "synonym") return Relation::Synonym;
  if (lowered == "hypernym") return Relation::Hypernym;
  if (lowered == "hyponym") return Relation::Hyponym;
  throw InputError("unknown WordNet relation '" + std::string(text) + "'");
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::Synonym:
      return "synonym";
    case Relation::Hypernym:
      return "hypernym";
    case Relation::Hyponym:
      return "hyponym";
  }
  return "hypernym";
}

TagSet expand_tagset(const TagSet& tags, const Lexicon& lexicon, const ExpansionSpec& spec,
                     const AnnotationConfig& cleaning) {
  if (spec.depth < 1) throw InputError("expansion depth must be at least 1");
  const auto follows = [&](const std::string& symbol) {
    if (spec.relation == Relation::Hypernym) return symbol == "@" || symbol == "@i";
    return symbol == "~" || symbol == "~i";
  };

  std::vector<std::string> related;
  for (const auto& tag : tags) {
    const auto senses = lexicon.senses(tag);
    if (spec.relation == Relation::Synonym) {
      for (const auto id : senses)
        for (const auto& lemma : lexicon.synset(id)->lemmas) related.push_back(lemma);
      continue;
    }
    std::set<SynsetId> visited(senses.begin(), senses.end());
    std::vector<SynsetId> frontier(senses.begin(), senses.end());
    for (int hop = 0; hop < spec.depth && !frontier.empty(); ++hop) {
      std::vector<SynsetId> next;
      for (const auto id : frontier)
        for (const auto& ptr : lexicon.synset(id)->pointers)
          if (follows(ptr.symbol) && visited.insert(ptr.target).second) {
            next.push_back(ptr.target);
            for (const auto& lemma : lexicon.synset(ptr.target)->lemmas) related.push_back(lemma);
          }
      frontier = std::move(next);
    }
  }
  for (auto& lemma : related) std::replace(lemma.begin(), lemma.end(), '_', ' ');

  TagSet out = tags;
  const TagSet cleaned = normalize_user_tags(std::span<const std::string>(related), cleaning);
  out.insert(cleaned.begin(), cleaned.end());
  return out;
}

}  // namespace privpred::wordnet
