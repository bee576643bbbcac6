#include "privpred/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <regex>
#include <vector>

namespace privpred {
namespace {

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

bool is_url(const std::string& tag) {
  static const std::regex scheme(R"(^[a-z][a-z0-9+.\-]*://)");
  return tag.starts_with("www.") || std::regex_search(tag, scheme);
}

// True when nothing but digits remain once punctuation and spaces are removed.
bool is_numeric(std::string_view tag) {
  bool any_digit = false;
  for (unsigned char c : tag) {
    if (std::isdigit(c)) {
      any_digit = true;
    } else if (!std::ispunct(c) && !std::isspace(c)) {
      return false;
    }
  }
  return any_digit;
}

bool has_alnum(std::string_view tag) {
  return std::any_of(tag.begin(), tag.end(), [](unsigned char c) { return std::isalnum(c) || c >= 0x80; });
}

}  // namespace

void AnnotationConfig::validate() const {
  if (k < 1) throw InputError("annotation: k must be at least 1");
  if (max_tokens < 1) throw InputError("annotation: max_tokens must be at least 1");
}

TagSet top_k_tags(const Eigen::Ref<const Eigen::VectorXd>& probs, const CategoryLexicon& lexicon,
                  const AnnotationConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(probs.size());
  if (n != lexicon.size())
    throw InputError("top_k_tags: distribution has " + std::to_string(n) + " entries but lexicon has " +
                     std::to_string(lexicon.size()));
  if (cfg.k > n) throw InputError("top_k_tags: k exceeds lexicon size");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double pa = probs[static_cast<Eigen::Index>(a)];
                      const double pb = probs[static_cast<Eigen::Index>(b)];
                      return pa != pb ? pa > pb : a < b;
                    });
  TagSet tags;
  for (std::size_t i = 0; i < cfg.k; ++i) tags.insert(to_lower(trim(lexicon[order[i]])));
  return tags;
}

TagSet normalize_user_tags(std::span<const std::string> raw, const AnnotationConfig& cfg) {
  TagSet out;
  for (const auto& original : raw) {
    const std::string lowered = to_lower(trim(original));
    const auto tokens = split_tokens(lowered);
    if (tokens.empty()) continue;
    std::string tag;
    for (const auto token : tokens) {
      if (!tag.empty()) tag += ' ';
      tag += token;
    }
    if (is_url(tag) || is_numeric(tag) || !has_alnum(tag)) continue;
    if (tokens.size() == 1 && cfg.stopwords.contains(tag)) continue;
    if (tokens.size() > cfg.max_tokens) continue;
    out.insert(std::move(tag));
  }
  return out;
}

TagSet normalize_user_tags(const TagSet& raw, const AnnotationConfig& cfg) {
  const std::vector<std::string> list(raw.begin(), raw.end());
  return normalize_user_tags(std::span<const std::string>(list), cfg);
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file '" + path.string() + "'");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (!word.empty() && word.front() != '#') words.insert(to_lower(word));
  }
  return words;
}

void derive_prob_layer(Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& record = data[i];
    const auto it = record.features.find("fc8");
    if (it == record.features.end()) continue;
    data.set_feature(record.id, "prob", softmax(it->second));
  }
}

void annotate_deep_tags(Dataset& data, const CategoryLexicon& lexicon, const AnnotationConfig& cfg) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& record = data[i];
    const auto it = record.features.find("fc8");
    if (it == record.features.end()) continue;
    data.set_deep_tags(record.id, top_k_tags(softmax(it->second), lexicon, cfg));
  }
}

}  // namespace privpred
