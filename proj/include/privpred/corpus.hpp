#ifndef PRIVPRED_CORPUS_HPP
#define PRIVPRED_CORPUS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "privpred/common.hpp"

namespace privpred {

using FeatureVector = Eigen::VectorXd;

// Layer names recognised by the pipeline.
inline constexpr std::string_view kLayerNames[] = {"fc6", "fc7", "fc8", "prob", "gist", "tags"};
bool is_known_layer(std::string_view layer);

struct ImageRecord {
  std::string id;
  std::map<std::string, FeatureVector> features;
  TagSet user_tags;
  TagSet deep_tags;
  std::optional<PrivacyLabel> label;
};

struct ClassCounts {
  std::size_t public_count = 0;
  std::size_t private_count = 0;
  std::size_t total() const { return public_count + private_count; }
};

// Records in insertion order with O(1) lookup by id. Enforces unique ids and a
// constant dimension per feature layer.
class Dataset {
 public:
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<ImageRecord>& records() const { return records_; }
  const ImageRecord& operator[](std::size_t i) const { return records_[i]; }

  bool contains(const std::string& id) const { return by_id_.contains(id); }
  const ImageRecord* find(const std::string& id) const;
  std::optional<std::size_t> index_of(const std::string& id) const;

  // Appends a new record; throws InputError on duplicate or empty id.
  ImageRecord& add(std::string id);
  // Returns the record for id, appending it if absent.
  ImageRecord& upsert(const std::string& id);

  // Throws InputError when the dimension differs from the layer's established one
  // or the vector holds non-finite values.
  void set_feature(const std::string& id, const std::string& layer, FeatureVector values);
  std::optional<Eigen::Index> layer_dimension(const std::string& layer) const;

  void set_user_tags(const std::string& id, TagSet tags);
  void set_deep_tags(const std::string& id, TagSet tags);
  void set_label(const std::string& id, PrivacyLabel label);

  ClassCounts class_counts() const;

  // Moves every layer of `other` into matching records (by id), creating records as needed.
  void merge_features(const Dataset& other);

 private:
  ImageRecord& at(const std::string& id);

  std::vector<ImageRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::string, Eigen::Index> layer_dims_;
};

struct TagEntry {
  std::string id;
  std::vector<std::string> tags;
};
using TagTable = std::vector<TagEntry>;

struct LabelEntry {
  std::string id;
  PrivacyLabel label;
};

struct LabelTable {
  std::vector<LabelEntry> entries;
  ClassCounts counts;
};

class CategoryLexicon {
 public:
  explicit CategoryLexicon(std::vector<std::string> labels);
  std::size_t size() const { return labels_.size(); }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

inline constexpr std::size_t kDefaultCategoryCount = 1000;

// Line-delimited JSON: {"id": "...", "values": [...]}. Lines starting with '#' are metadata.
Dataset load_feature_table(const std::filesystem::path& path, const std::string& layer);
Dataset read_feature_table(std::istream& in, const std::string& layer, const std::string& source = "<stream>");
void write_feature_table(std::ostream& out, const Dataset& data, const std::string& layer);

// Line-delimited JSON: {"id": "...", "tags": [...]}.
TagTable load_tag_table(const std::filesystem::path& path);
TagTable read_tag_table(std::istream& in, const std::string& source = "<stream>");
void write_tag_table(std::ostream& out, const std::vector<std::pair<std::string, TagSet>>& rows);

// CSV with header `id,label`.
LabelTable load_labels(const std::filesystem::path& path);
LabelTable read_labels(std::istream& in, const std::string& source = "<stream>");

// One category name per line; line n names category n-1.
CategoryLexicon load_lexicon(const std::filesystem::path& path, std::size_t expected = kDefaultCategoryCount);
CategoryLexicon read_lexicon(std::istream& in, std::size_t expected = kDefaultCategoryCount,
                             const std::string& source = "<stream>");

void attach_labels(Dataset& data, const LabelTable& labels);

}  // namespace privpred

#endif  // PRIVPRED_CORPUS_HPP
