#include "privpred/taglab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "privpred/eval.hpp"

namespace privpred {
namespace {

struct Counts {
  std::size_t with_public = 0;
  std::size_t with_private = 0;
};

std::map<std::string, Counts> count_tags(std::span<const TaggedRecord> records) {
  std::map<std::string, Counts> counts;
  for (const auto& record : records)
    for (const auto& tag : record.tags) {
      auto& c = counts[tag];
      (record.label == PrivacyLabel::Private ? c.with_private : c.with_public) += 1;
    }
  return counts;
}

double conditional_entropy(std::size_t privates, std::size_t total) {
  if (total == 0) return 0.0;
  return binary_entropy(static_cast<double>(privates) / static_cast<double>(total));
}

void sort_stats(std::vector<TagStat>& stats) {
  std::sort(stats.begin(), stats.end(), [](const TagStat& a, const TagStat& b) {
    return a.ig != b.ig ? a.ig > b.ig : a.tag < b.tag;
  });
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

std::vector<TagStat> information_gain(std::span<const TaggedRecord> records) {
  std::size_t n_private = 0;
  for (const auto& r : records) n_private += r.label == PrivacyLabel::Private ? 1 : 0;
  const std::size_t n = records.size();
  if (n_private == 0 || n_private == n)
    throw InputError("information gain: both classes must be present (class entropy is zero)");

  const double class_entropy = conditional_entropy(n_private, n);
  std::vector<TagStat> stats;
  for (const auto& [tag, c] : count_tags(records)) {
    const std::size_t present = c.with_public + c.with_private;
    const std::size_t absent = n - present;
    const double p_present = static_cast<double>(present) / static_cast<double>(n);
    const double p_absent = static_cast<double>(absent) / static_cast<double>(n);
    const double remainder = p_present * conditional_entropy(c.with_private, present) +
                             p_absent * conditional_entropy(n_private - c.with_private, absent);
    stats.push_back({tag, std::max(0.0, class_entropy - remainder), c.with_public, c.with_private});
  }
  sort_stats(stats);
  return stats;
}

std::vector<TagStat> information_gain_cv(std::span<const TaggedRecord> records, int k, std::uint64_t seed) {
  std::vector<PrivacyLabel> labels;
  for (const auto& r : records) labels.push_back(r.label);
  const auto folds = stratified_fold_indices(labels, k, seed);

  std::map<std::string, double> ig_sum;
  for (int f = 0; f < k; ++f) {
    std::vector<TaggedRecord> fit;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (folds[i] != f) fit.push_back(records[i]);
    for (const auto& stat : information_gain(fit)) ig_sum[stat.tag] += stat.ig;
  }
  std::vector<TagStat> stats;
  for (const auto& [tag, c] : count_tags(records)) {
    const auto it = ig_sum.find(tag);
    const double mean = it == ig_sum.end() ? 0.0 : it->second / static_cast<double>(k);
    stats.push_back({tag, mean, c.with_public, c.with_private});
  }
  sort_stats(stats);
  return stats;
}

std::vector<std::pair<std::string, std::size_t>> frequency_cloud(std::span<const TaggedRecord> records,
                                                                 PrivacyLabel label, std::size_t top_n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records)
    if (r.label == label)
      for (const auto& tag : r.tags) ++counts[tag];
  std::vector<std::pair<std::string, std::size_t>> cloud(counts.begin(), counts.end());
  std::stable_sort(cloud.begin(), cloud.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (cloud.size() > top_n) cloud.resize(top_n);
  return cloud;
}

CooccurrenceGraph cooccurrence_graph(std::span<const TaggedRecord> records, PrivacyLabel label,
                                     std::size_t threshold) {
  if (threshold < 1) throw InputError("co-occurrence graph: threshold must be at least 1");
  CooccurrenceGraph graph{.label = label, .threshold = threshold, .nodes = {}, .edges = {}};
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& r : records) {
    if (r.label != label) continue;
    for (auto a = r.tags.begin(); a != r.tags.end(); ++a)
      for (auto b = std::next(a); b != r.tags.end(); ++b) ++counts[{*a, *b}];
  }
  for (auto& [pair, weight] : counts) {
    if (weight < threshold) continue;
    graph.nodes.insert(pair.first);
    graph.nodes.insert(pair.second);
    graph.edges.emplace(pair, weight);
  }
  return graph;
}

CooccurrenceGraph ego_subgraph(const CooccurrenceGraph& graph, const TagSet& focus) {
  CooccurrenceGraph sub{.label = graph.label, .threshold = graph.threshold, .nodes = {}, .edges = {}};
  for (const auto& [pair, weight] : graph.edges) {
    if (!focus.contains(pair.first) && !focus.contains(pair.second)) continue;
    sub.nodes.insert(pair.first);
    sub.nodes.insert(pair.second);
    sub.edges.emplace(pair, weight);
  }
  return sub;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_ig_csv(std::ostream& out, const std::vector<TagStat>& stats,
                  const std::map<std::string, std::string>& source_of) {
  out << "rank,tag,ig_bits,source\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto it = source_of.find(stats[i].tag);
    out << i + 1 << ',' << csv_field(stats[i].tag) << ',' << format_double(stats[i].ig) << ','
        << (it == source_of.end() ? "user" : it->second) << '\n';
  }
}

void write_cloud_csv(std::ostream& out, const std::vector<std::pair<std::string, std::size_t>>& cloud,
                     PrivacyLabel label) {
  out << "tag,count,class\n";
  for (const auto& [tag, count] : cloud) out << csv_field(tag) << ',' << count << ',' << to_string(label) << '\n';
}

void write_adjacency(std::ostream& out, const CooccurrenceGraph& graph) {
  out << "# class=" << to_string(graph.label) << " threshold=" << graph.threshold << " nodes=" << graph.nodes.size()
      << " edges=" << graph.edges.size() << '\n';
  for (const auto& [pair, weight] : graph.edges) out << pair.first << '\t' << pair.second << '\t' << weight << '\n';
}

void write_dot(std::ostream& out, const CooccurrenceGraph& graph) {
  out << "graph {\n";
  for (const auto& [pair, weight] : graph.edges)
    out << "  " << dot_quote(pair.first) << " -- " << dot_quote(pair.second) << " [weight=" << weight << "];\n";
  out << "}\n";
}

}  // namespace privpred
