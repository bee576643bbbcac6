#ifndef PRIVPRED_COMMON_HPP
#define PRIVPRED_COMMON_HPP

#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace privpred {

inline constexpr std::string_view kVersion = "0.1.0";

// Bad or missing input data / configuration. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical or pipeline failure on otherwise valid input. Exit code 1.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PrivacyLabel { Public, Private };

// private = +1 (positive class), public = -1
inline int to_sign(PrivacyLabel label) { return label == PrivacyLabel::Private ? 1 : -1; }
inline PrivacyLabel from_sign(double value) {
  return value > 0.0 ? PrivacyLabel::Private : PrivacyLabel::Public;
}
std::string_view to_string(PrivacyLabel label);
PrivacyLabel parse_label(std::string_view token);

// Normalized tags. Ordered so that every traversal is deterministic.
using TagSet = std::set<std::string>;

using Rng = std::mt19937_64;

// Uniform integer in [0, bound) by rejection; unlike std::uniform_int_distribution
// the sequence is identical across standard library implementations.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// Independent per-purpose seeds from one run seed.
enum class SeedPurpose : std::uint64_t { OuterSplit = 1, CrossValidation = 2, Solver = 3, Analysis = 4 };
std::uint64_t derive_seed(std::uint64_t seed, SeedPurpose purpose);

std::uint64_t fnv1a64(std::string_view bytes);

// Shortest text that parses back to the identical double.
std::string format_double(double value);

std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text);

}  // namespace privpred

#endif  // PRIVPRED_COMMON_HPP
