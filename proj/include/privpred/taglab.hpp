#ifndef PRIVPRED_TAGLAB_HPP
#define PRIVPRED_TAGLAB_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privpred/common.hpp"

namespace privpred {

struct TagStat {
  std::string tag;
  double ig = 0.0;  // bits
  std::size_t freq_public = 0;
  std::size_t freq_private = 0;
};

// One tagged, labelled image as seen by the analytics.
struct TaggedRecord {
  TagSet tags;
  PrivacyLabel label;
};

// Binary entropy in bits with 0 log 0 = 0.
double binary_entropy(double p);

// IG(T) = H(C) - [P(T=1) H(C|T=1) + P(T=0) H(C|T=0)] for every tag's presence
// indicator, sorted by IG descending then tag. Throws InputError unless both
// classes are present.
std::vector<TagStat> information_gain(std::span<const TaggedRecord> records);

// Mean IG across the training parts of a stratified k-fold split; counts are over
// all records. Tags missing from a fold's training part contribute IG 0 there.
std::vector<TagStat> information_gain_cv(std::span<const TaggedRecord> records, int k, std::uint64_t seed);

// Number of records of `label` containing each tag, top_n by count then tag.
std::vector<std::pair<std::string, std::size_t>> frequency_cloud(std::span<const TaggedRecord> records,
                                                                 PrivacyLabel label, std::size_t top_n = 100);

struct CooccurrenceGraph {
  PrivacyLabel label = PrivacyLabel::Public;
  std::size_t threshold = 1;
  TagSet nodes;
  std::map<std::pair<std::string, std::string>, std::size_t> edges;  // key.first < key.second
};

// Edge weight = number of `label` records carrying both tags; edges lighter than
// threshold and the nodes they leave isolated are dropped.
CooccurrenceGraph cooccurrence_graph(std::span<const TaggedRecord> records, PrivacyLabel label,
                                     std::size_t threshold = 2);

CooccurrenceGraph ego_subgraph(const CooccurrenceGraph& graph, const TagSet& focus);

void write_ig_csv(std::ostream& out, const std::vector<TagStat>& stats, const std::map<std::string, std::string>& source_of);
void write_cloud_csv(std::ostream& out, const std::vector<std::pair<std::string, std::size_t>>& cloud,
                     PrivacyLabel label);
// Plain adjacency listing: one "a<TAB>b<TAB>weight" line per edge.
void write_adjacency(std::ostream& out, const CooccurrenceGraph& graph);
void write_dot(std::ostream& out, const CooccurrenceGraph& graph);

std::string csv_field(std::string_view text);

}  // namespace privpred

#endif  // PRIVPRED_TAGLAB_HPP
