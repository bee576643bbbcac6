#include "privpred/featurize.hpp"

#include <ostream>
#include <unordered_map>

namespace privpred {

TagVocabulary::TagVocabulary(std::map<std::string, Eigen::Index> index, std::size_t min_df)
    : index_(std::move(index)), min_df_(min_df) {}

std::optional<Eigen::Index> TagVocabulary::column(const std::string& tag) const {
  const auto it = index_.find(tag);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void TagVocabulary::write_csv(std::ostream& out) const {
  out << "tag,index\n";
  for (const auto& [tag, column] : index_) {
    // RFC 4180 quoting; tags may contain commas (multiword category names).
    if (tag.find_first_of(",\"") != std::string::npos) {
      out << '"';
      for (char c : tag) out << (c == '"' ? "\"\"" : std::string(1, c));
      out << '"';
    } else {
      out << tag;
    }
    out << ',' << column << '\n';
  }
}

TagVocabulary build_vocabulary(std::span<const TagSet> train_tagsets, std::size_t min_df) {
  if (train_tagsets.empty()) throw InputError("build_vocabulary: empty training corpus");
  if (min_df < 1) min_df = 1;
  std::map<std::string, std::size_t> doc_freq;
  for (const auto& tags : train_tagsets)
    for (const auto& tag : tags) ++doc_freq[tag];

  std::map<std::string, Eigen::Index> index;
  Eigen::Index next = 0;
  for (const auto& [tag, df] : doc_freq)
    if (df >= min_df) index.emplace(tag, next++);
  return TagVocabulary(std::move(index), min_df);
}

SparseVector vectorize(const TagSet& tags, const TagVocabulary& vocab) {
  SparseVector out(vocab.size());
  // TagSet iterates in lexicographic order, which is also column order.
  for (const auto& tag : tags)
    if (const auto column = vocab.column(tag)) out.insert(*column) = 1.0;
  return out;
}

SparseVector vectorize(const TagSet& user, const TagSet& deep, const TagVocabulary& vocab, TagEncoding encoding) {
  if (encoding == TagEncoding::Binary) return vectorize(combine_tagsets(user, deep), vocab);
  std::map<Eigen::Index, double> counts;
  for (const TagSet* source : {&user, &deep})
    for (const auto& tag : *source)
      if (const auto column = vocab.column(tag)) counts[*column] += 1.0;
  SparseVector out(vocab.size());
  for (const auto& [column, count] : counts) out.insert(column) = count;
  return out;
}

TagSet combine_tagsets(const TagSet& user, const TagSet& deep) {
  TagSet out = user;
  out.insert(deep.begin(), deep.end());
  return out;
}

Standardizer Standardizer::fit(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.rows() == 0) throw InputError("Standardizer: no training rows");
  Standardizer s;
  s.mean_ = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centred = rows.rowwise() - s.mean_.transpose();
  s.scale_ = (centred.colwise().squaredNorm() / static_cast<double>(rows.rows())).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < s.scale_.size(); ++j)
    if (!(s.scale_[j] > 0.0)) s.scale_[j] = 1.0;
  return s;
}

Eigen::VectorXd Standardizer::transform(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mean_.size()) throw InputError("Standardizer: dimension mismatch");
  return ((x - mean_).array() / scale_.array()).matrix();
}

}  // namespace privpred
