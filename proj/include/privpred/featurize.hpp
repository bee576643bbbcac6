#ifndef PRIVPRED_FEATURIZE_HPP
#define PRIVPRED_FEATURIZE_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privpred/common.hpp"

namespace privpred {

using SparseVector = Eigen::SparseVector<double>;

enum class TagEncoding {
  Binary,  // 1.0 for every present tag
  Count,   // number of tag sources (user, deep) carrying the tag
};

// Train-split tag -> column map. Columns follow lexicographic tag order.
class TagVocabulary {
 public:
  TagVocabulary() = default;
  TagVocabulary(std::map<std::string, Eigen::Index> index, std::size_t min_df);

  Eigen::Index size() const { return static_cast<Eigen::Index>(index_.size()); }
  std::size_t min_df() const { return min_df_; }
  const std::map<std::string, Eigen::Index>& index() const { return index_; }
  std::optional<Eigen::Index> column(const std::string& tag) const;

  void write_csv(std::ostream& out) const;

 private:
  std::map<std::string, Eigen::Index> index_;
  std::size_t min_df_ = 1;
};

TagVocabulary build_vocabulary(std::span<const TagSet> train_tagsets, std::size_t min_df = 1);

// Binary presence vector; tags outside the vocabulary are ignored.
SparseVector vectorize(const TagSet& tags, const TagVocabulary& vocab);
// Combined user+deep vector under the chosen encoding.
SparseVector vectorize(const TagSet& user, const TagSet& deep, const TagVocabulary& vocab, TagEncoding encoding);

TagSet combine_tagsets(const TagSet& user, const TagSet& deep);

// Per-column standardization fitted on training rows. Constant columns keep
// their centred value (scale 1).
class Standardizer {
 public:
  static Standardizer fit(const Eigen::Ref<const Eigen::MatrixXd>& rows);

  Eigen::VectorXd transform(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& scale() const { return scale_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
};

}  // namespace privpred

#endif  // PRIVPRED_FEATURIZE_HPP
