#ifndef PRIVPRED_ANNOTATE_HPP
#define PRIVPRED_ANNOTATE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_set>

#include "privpred/common.hpp"
#include "privpred/corpus.hpp"

namespace privpred {

struct AnnotationConfig {
  std::size_t k = 10;
  std::unordered_set<std::string> stopwords;
  std::size_t max_tokens = 4;

  void validate() const;
};

/// Max-shifted softmax over a logit vector. The result is a probability
/// distribution of the same length; the largest logit keeps the largest
/// probability.
///
/// Throws InputError for empty or non-finite input.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  if (logits.size() == 0) throw InputError("softmax: empty logit vector");
  if (!logits.allFinite()) throw InputError("softmax: non-finite logit");
  const Scalar shift = logits.maxCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probs = (logits.array() - shift).exp().matrix();
  probs /= probs.sum();
  return probs;
}

// Category names of the k most probable classes, ties broken by lower index.
// Names are lowercased so deep and user tags share one namespace.
TagSet top_k_tags(const Eigen::Ref<const Eigen::VectorXd>& probs, const CategoryLexicon& lexicon,
                  const AnnotationConfig& cfg);

// Cleaning applied to each raw tag: trim, lowercase, collapse inner whitespace,
// drop URLs, numbers, stopwords and tags longer than max_tokens tokens. Long
// tags are dropped individually; the image keeps its remaining tags.
TagSet normalize_user_tags(std::span<const std::string> raw, const AnnotationConfig& cfg);
TagSet normalize_user_tags(const TagSet& raw, const AnnotationConfig& cfg);

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

// Adds a "prob" layer (softmax of "fc8") to every record carrying fc8.
void derive_prob_layer(Dataset& data);

// Sets deep tags for every record carrying fc8 logits.
void annotate_deep_tags(Dataset& data, const CategoryLexicon& lexicon, const AnnotationConfig& cfg);

}  // namespace privpred

#endif  // PRIVPRED_ANNOTATE_HPP
