#include "privpred/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

namespace privpred {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

std::string where(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

// Strips a trailing CR so files with DOS line endings load unchanged.
void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool skippable(std::string_view line) {
  const auto body = trim(line);
  return body.empty() || body.front() == '#';
}

json parse_object(const std::string& line, const std::string& source, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(where(source, line_no) + ": malformed line: " + e.what());
  }
  if (!doc.is_object()) throw InputError(where(source, line_no) + ": malformed line: expected a JSON object");
  if (!doc.contains("id") || !doc["id"].is_string() || doc["id"].get_ref<const std::string&>().empty())
    throw InputError(where(source, line_no) + ": malformed line: missing nonempty string \"id\"");
  return doc;
}

}  // namespace

bool is_known_layer(std::string_view layer) {
  return std::find(std::begin(kLayerNames), std::end(kLayerNames), layer) != std::end(kLayerNames);
}

const ImageRecord* Dataset::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::optional<std::size_t> Dataset::index_of(const std::string& id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

ImageRecord& Dataset::add(std::string id) {
  if (id.empty()) throw InputError("record id must be nonempty");
  if (by_id_.contains(id)) throw InputError("duplicate record id '" + id + "'");
  by_id_.emplace(id, records_.size());
  records_.push_back(ImageRecord{.id = std::move(id)});
  return records_.back();
}

ImageRecord& Dataset::upsert(const std::string& id) {
  const auto it = by_id_.find(id);
  if (it != by_id_.end()) return records_[it->second];
  return add(id);
}

ImageRecord& Dataset::at(const std::string& id) {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw InputError("unknown record id '" + id + "'");
  return records_[it->second];
}

void Dataset::set_feature(const std::string& id, const std::string& layer, FeatureVector values) {
  if (values.size() == 0) throw InputError("record '" + id + "': empty feature vector for layer " + layer);
  if (!values.allFinite()) throw InputError("record '" + id + "': non-finite value in layer " + layer);
  const auto [it, inserted] = layer_dims_.emplace(layer, values.size());
  if (!inserted && it->second != values.size())
    throw InputError("record '" + id + "': dimension mismatch in layer " + layer + " (expected " +
                     std::to_string(it->second) + ", got " + std::to_string(values.size()) + ")");
  at(id).features[layer] = std::move(values);
}

std::optional<Eigen::Index> Dataset::layer_dimension(const std::string& layer) const {
  const auto it = layer_dims_.find(layer);
  if (it == layer_dims_.end()) return std::nullopt;
  return it->second;
}

void Dataset::set_user_tags(const std::string& id, TagSet tags) { at(id).user_tags = std::move(tags); }
void Dataset::set_deep_tags(const std::string& id, TagSet tags) { at(id).deep_tags = std::move(tags); }
void Dataset::set_label(const std::string& id, PrivacyLabel label) { at(id).label = label; }

ClassCounts Dataset::class_counts() const {
  ClassCounts counts;
  for (const auto& record : records_) {
    if (!record.label) continue;
    if (*record.label == PrivacyLabel::Private)
      ++counts.private_count;
    else
      ++counts.public_count;
  }
  return counts;
}

void Dataset::merge_features(const Dataset& other) {
  for (const auto& record : other.records()) {
    upsert(record.id);
    for (const auto& [layer, values] : record.features) set_feature(record.id, layer, values);
  }
}

CategoryLexicon::CategoryLexicon(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (trim(labels_[i]).empty()) throw InputError("category " + std::to_string(i) + " has an empty name");
}

Dataset read_feature_table(std::istream& in, const std::string& layer, const std::string& source) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (skippable(line)) continue;
    const json doc = parse_object(line, source, line_no);
    const auto& values = doc.find("values");
    if (values == doc.end() || !values->is_array())
      throw InputError(where(source, line_no) + ": malformed line: missing \"values\" array");
    FeatureVector vec(static_cast<Eigen::Index>(values->size()));
    for (std::size_t i = 0; i < values->size(); ++i) {
      const auto& v = (*values)[i];
      if (!v.is_number()) throw InputError(where(source, line_no) + ": malformed line: non-numeric value");
      vec[static_cast<Eigen::Index>(i)] = v.get<double>();
    }
    const std::string id = doc["id"].get<std::string>();
    try {
      data.add(id);
      data.set_feature(id, layer, std::move(vec));
    } catch (const InputError& e) {
      throw InputError(where(source, line_no) + ": " + e.what());
    }
  }
  return data;
}

Dataset load_feature_table(const std::filesystem::path& path, const std::string& layer) {
  auto in = open_input(path);
  return read_feature_table(in, layer, path.string());
}

void write_feature_table(std::ostream& out, const Dataset& data, const std::string& layer) {
  for (const auto& record : data.records()) {
    const auto it = record.features.find(layer);
    if (it == record.features.end()) continue;
    // Built by hand so the value formatting is the shortest exact round-trip form.
    out << "{\"id\":" << json(record.id).dump() << ",\"values\":[";
    for (Eigen::Index i = 0; i < it->second.size(); ++i) {
      if (i) out << ',';
      out << format_double(it->second[i]);
    }
    out << "]}\n";
  }
}

TagTable read_tag_table(std::istream& in, const std::string& source) {
  TagTable table;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (skippable(line)) continue;
    const json doc = parse_object(line, source, line_no);
    const auto& tags = doc.find("tags");
    if (tags == doc.end() || !tags->is_array())
      throw InputError(where(source, line_no) + ": malformed line: missing \"tags\" array");
    TagEntry entry{.id = doc["id"].get<std::string>(), .tags = {}};
    for (const auto& tag : *tags) {
      if (!tag.is_string()) throw InputError(where(source, line_no) + ": malformed line: non-string tag");
      entry.tags.push_back(tag.get<std::string>());
    }
    if (!seen.insert(entry.id).second)
      throw InputError(where(source, line_no) + ": duplicate id '" + entry.id + "'");
    table.push_back(std::move(entry));
  }
  return table;
}

TagTable load_tag_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_tag_table(in, path.string());
}

void write_tag_table(std::ostream& out, const std::vector<std::pair<std::string, TagSet>>& rows) {
  for (const auto& [id, tags] : rows) {
    json doc = json::object();
    doc["id"] = id;
    doc["tags"] = json::array();
    for (const auto& tag : tags) doc["tags"].push_back(tag);
    out << doc.dump() << '\n';
  }
}

LabelTable read_labels(std::istream& in, const std::string& source) {
  LabelTable table;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (skippable(line)) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw InputError(where(source, line_no) + ": expected two comma-separated fields");
    const std::string id(trim(std::string_view(line).substr(0, comma)));
    const std::string_view token = trim(std::string_view(line).substr(comma + 1));
    if (!header_seen) {
      if (to_lower(id) != "id" || to_lower(token) != "label")
        throw InputError(where(source, line_no) + ": expected header 'id,label'");
      header_seen = true;
      continue;
    }
    if (id.empty()) throw InputError(where(source, line_no) + ": empty id");
    PrivacyLabel label{};
    try {
      label = parse_label(token);
    } catch (const InputError& e) {
      throw InputError(where(source, line_no) + ": " + e.what());
    }
    if (!seen.insert(id).second) throw InputError(where(source, line_no) + ": duplicate id '" + id + "'");
    if (label == PrivacyLabel::Private)
      ++table.counts.private_count;
    else
      ++table.counts.public_count;
    table.entries.push_back({id, label});
  }
  if (!header_seen) throw InputError(source + ": missing header 'id,label'");
  return table;
}

LabelTable load_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labels(in, path.string());
}

CategoryLexicon read_lexicon(std::istream& in, std::size_t expected, const std::string& source) {
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (trim(line).empty()) {
      // A single trailing newline is not a blank entry; anything after it is.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw InputError(where(source, line_no) + ": blank category name");
    }
    labels.emplace_back(trim(line));
  }
  if (labels.size() != expected)
    throw InputError(source + ": expected " + std::to_string(expected) + " categories, found " +
                     std::to_string(labels.size()));
  return CategoryLexicon(std::move(labels));
}

CategoryLexicon load_lexicon(const std::filesystem::path& path, std::size_t expected) {
  auto in = open_input(path);
  return read_lexicon(in, expected, path.string());
}

void attach_labels(Dataset& data, const LabelTable& labels) {
  for (const auto& entry : labels.entries) {
    if (data.contains(entry.id)) data.set_label(entry.id, entry.label);
  }
}

}  // namespace privpred
