#ifndef PRIVPRED_SVM_HPP
#define PRIVPRED_SVM_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "privpred/common.hpp"
#include "privpred/featurize.hpp"

namespace privpred {

enum class KernelKind { Linear, Rbf };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view text);

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  // RBF width; unset means 1 / dimension, resolved at training time.
  std::optional<double> gamma;

  static KernelSpec linear() { return {}; }
  static KernelSpec rbf(std::optional<double> gamma = std::nullopt) { return {KernelKind::Rbf, gamma}; }

  void validate() const;
  double resolved_gamma(Eigen::Index dimension) const;
  KernelSpec resolved(Eigen::Index dimension) const;
  bool operator==(const KernelSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Sample primitives. Sparse versions walk both index lists in one merge pass.

inline Eigen::Index dimension_of(const Eigen::VectorXd& x) { return x.size(); }
inline Eigen::Index dimension_of(const SparseVector& x) { return x.size(); }

inline bool all_finite(const Eigen::VectorXd& x) { return x.allFinite(); }
inline bool all_finite(const SparseVector& x) {
  for (SparseVector::InnerIterator it(x); it; ++it)
    if (!std::isfinite(it.value())) return false;
  return true;
}

inline double dot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return x.dot(y); }
inline double squared_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return (x - y).squaredNorm(); }

inline double dot(const SparseVector& x, const SparseVector& y) {
  double sum = 0.0;
  SparseVector::InnerIterator a(x), b(y);
  while (a && b) {
    if (a.index() == b.index()) {
      sum += a.value() * b.value();
      ++a;
      ++b;
    } else if (a.index() < b.index()) {
      ++a;
    } else {
      ++b;
    }
  }
  return sum;
}

inline double squared_distance(const SparseVector& x, const SparseVector& y) {
  double sum = 0.0;
  SparseVector::InnerIterator a(x), b(y);
  while (a || b) {
    double diff;
    if (a && b && a.index() == b.index()) {
      diff = a.value() - b.value();
      ++a;
      ++b;
    } else if (a && (!b || a.index() < b.index())) {
      diff = a.value();
      ++a;
    } else {
      diff = b.value();
      ++b;
    }
    sum += diff * diff;
  }
  return sum;
}

template <typename Sample>
double kernel_eval(const KernelSpec& kernel, const Sample& x, const Sample& y) {
  if (dimension_of(x) != dimension_of(y))
    throw InputError("kernel_eval: dimension mismatch (" + std::to_string(dimension_of(x)) + " vs " +
                     std::to_string(dimension_of(y)) + ")");
  if (kernel.kind == KernelKind::Linear) return dot(x, y);
  return std::exp(-kernel.resolved_gamma(dimension_of(x)) * squared_distance(x, y));
}

// ---------------------------------------------------------------------------

struct TrainConfig {
  double c = 1.0;
  KernelSpec kernel;
  double tol = 1e-3;       // KKT tolerance
  double eps = 1e-12;      // smallest accepted relative alpha change
  int max_passes = 10;     // outer sweeps without progress before the heuristic phase stops
  std::uint64_t seed = 0;  // sweep order
  bool record_objective = false;
  std::size_t gram_cache_limit = 6000;  // precompute the kernel matrix up to this many samples

  void validate() const;
};

struct TrainStats {
  std::size_t pair_updates = 0;
  double final_gap = 0.0;  // largest bias-interval violation at exit
  bool converged = false;
  std::vector<double> objective_trace;  // dual objective after each accepted pair (if recorded)
};

template <typename Sample>
class SvmModel {
 public:
  SvmModel() = default;
  SvmModel(KernelSpec kernel, double c, double bias, Eigen::Index dimension, std::vector<Sample> support_vectors,
           Eigen::VectorXd dual_coefs)
      : kernel_(kernel),
        c_(c),
        bias_(bias),
        dimension_(dimension),
        support_vectors_(std::move(support_vectors)),
        dual_coefs_(std::move(dual_coefs)) {
    if (static_cast<Eigen::Index>(support_vectors_.size()) != dual_coefs_.size())
      throw InputError("SvmModel: support vector / coefficient count mismatch");
    if (kernel_.kind == KernelKind::Rbf && !kernel_.gamma) kernel_ = kernel_.resolved(dimension_);
    kernel_.validate();
  }

  const KernelSpec& kernel() const { return kernel_; }
  double c() const { return c_; }
  double bias() const { return bias_; }
  Eigen::Index dimension() const { return dimension_; }
  const std::vector<Sample>& support_vectors() const { return support_vectors_; }
  const Eigen::VectorXd& dual_coefs() const { return dual_coefs_; }

  double decision_value(const Sample& x) const {
    if (dimension_of(x) != dimension_)
      throw InputError("decision_value: expected dimension " + std::to_string(dimension_) + ", got " +
                       std::to_string(dimension_of(x)));
    double f = bias_;
    for (std::size_t i = 0; i < support_vectors_.size(); ++i)
      f += dual_coefs_[static_cast<Eigen::Index>(i)] * kernel_eval(kernel_, support_vectors_[i], x);
    return f;
  }

  PrivacyLabel predict(const Sample& x) const { return from_sign(decision_value(x)); }

 private:
  KernelSpec kernel_;
  double c_ = 1.0;
  double bias_ = 0.0;
  Eigen::Index dimension_ = 0;
  std::vector<Sample> support_vectors_;
  Eigen::VectorXd dual_coefs_;  // alpha_i * y_i
};

template <typename Sample>
struct TrainResult {
  SvmModel<Sample> model;
  Eigen::VectorXd alpha;  // one multiplier per training sample
  TrainStats stats;
};

template <typename Sample>
double decision_value(const SvmModel<Sample>& model, const Sample& x) {
  return model.decision_value(x);
}

template <typename Sample>
PrivacyLabel predict(const SvmModel<Sample>& model, const Sample& x) {
  return model.predict(x);
}

namespace detail {

// Kernel matrix access: fully precomputed for small problems, rows on demand otherwise.
template <typename Sample>
class KernelMatrix {
 public:
  KernelMatrix(std::span<const Sample> samples, const KernelSpec& kernel, std::size_t cache_limit)
      : samples_(samples), kernel_(kernel) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (samples.size() > cache_limit) return;
    if constexpr (std::is_same_v<Sample, Eigen::VectorXd>) {
      // One matrix product instead of n^2 separate dot products.
      Eigen::MatrixXd rows(n, dimension_of(samples.front()));
      for (Eigen::Index i = 0; i < n; ++i) rows.row(i) = samples_[i].transpose();
      gram_.noalias() = rows * rows.transpose();
      if (kernel_.kind == KernelKind::Rbf) {
        const Eigen::VectorXd norms = gram_.diagonal();
        const double gamma = kernel_.resolved_gamma(rows.cols());
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index i = 0; i < n; ++i)
            gram_(i, j) = i == j ? 1.0 : std::exp(-gamma * std::max(0.0, norms[i] + norms[j] - 2.0 * gram_(i, j)));
      }
    } else {
      gram_.resize(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
          gram_(i, j) = gram_(j, i) = kernel_eval(kernel_, samples_[i], samples_[j]);
    }
    precomputed_ = true;
  }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    if (precomputed_) return gram_(i, j);
    return kernel_eval(kernel_, samples_[i], samples_[j]);
  }

  Eigen::VectorXd row(Eigen::Index i) const {
    if (precomputed_) return gram_.col(i);
    const auto n = static_cast<Eigen::Index>(samples_.size());
    Eigen::VectorXd out(n);
    for (Eigen::Index j = 0; j < n; ++j) out[j] = kernel_eval(kernel_, samples_[i], samples_[j]);
    return out;
  }

 private:
  std::span<const Sample> samples_;
  KernelSpec kernel_;
  Eigen::MatrixXd gram_;
  bool precomputed_ = false;
};

// Sequential minimal optimization on the soft-margin dual
//   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij   s.t. 0 <= a_i <= C, sum a_i y_i = 0.
// Phase one follows Platt's heuristics (first-violator sweep in seeded random order,
// second choice maximizing |E_i - E_j|). Phase two repeatedly optimizes the maximal
// violating pair until the bias interval closes to within tol, which is what
// guarantees the KKT conditions for the final bias.
template <typename Sample>
class SmoSolver {
 public:
  SmoSolver(std::span<const Sample> samples, std::span<const int> y, const TrainConfig& cfg)
      : samples_(samples),
        y_(y),
        cfg_(cfg),
        n_(static_cast<Eigen::Index>(samples.size())),
        kernel_(cfg.kernel.resolved(dimension_of(samples.front()))),
        gram_(samples, kernel_, cfg.gram_cache_limit),
        alpha_(Eigen::VectorXd::Zero(n_)),
        grad_(Eigen::VectorXd::Zero(n_)),
        rng_(cfg.seed) {}

  TrainResult<Sample> solve() {
    run_heuristic_phase();
    run_polish_phase();
    return finish();
  }

 private:
  double yi(Eigen::Index i) const { return static_cast<double>(y_[static_cast<std::size_t>(i)]); }
  bool at_lower(Eigen::Index i) const { return alpha_[i] <= 0.0; }
  bool at_upper(Eigen::Index i) const { return alpha_[i] >= cfg_.c; }
  bool is_free(Eigen::Index i) const { return !at_lower(i) && !at_upper(i); }

  // Bias that would put sample i exactly on its margin.
  double margin_bias(Eigen::Index i) const { return yi(i) - grad_[i]; }
  double error(Eigen::Index i) const { return grad_[i] + bias_ - yi(i); }

  // Lower-bound set: the bias must be >= margin_bias(i); upper-bound set: <=.
  bool bounds_below(Eigen::Index i) const {
    return is_free(i) || (at_lower(i) && yi(i) > 0) || (at_upper(i) && yi(i) < 0);
  }
  bool bounds_above(Eigen::Index i) const {
    return is_free(i) || (at_lower(i) && yi(i) < 0) || (at_upper(i) && yi(i) > 0);
  }

  struct Gap {
    double value;
    Eigen::Index lower_arg;
    Eigen::Index upper_arg;
    double max_lower;
    double min_upper;
  };

  Gap bias_gap() const {
    Gap gap{0.0, -1, -1, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double u = margin_bias(i);
      if (bounds_below(i) && u > gap.max_lower) {
        gap.max_lower = u;
        gap.lower_arg = i;
      }
      if (bounds_above(i) && u < gap.min_upper) {
        gap.min_upper = u;
        gap.upper_arg = i;
      }
    }
    gap.value = (gap.lower_arg >= 0 && gap.upper_arg >= 0) ? gap.max_lower - gap.min_upper : 0.0;
    return gap;
  }

  double snap(double a) const {
    const double slack = cfg_.c * 1e-12;
    if (a < slack) return 0.0;
    if (a > cfg_.c - slack) return cfg_.c;
    return a;
  }

  bool take_step(Eigen::Index i1, Eigen::Index i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double y1 = yi(i1), y2 = yi(i2);
    const double s = y1 * y2;
    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(cfg_.c, cfg_.c + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - cfg_.c);
      hi = std::min(cfg_.c, a1 + a2);
    }
    if (hi - lo <= 0.0) return false;

    const double k11 = gram_(i1, i1), k12 = gram_(i1, i2), k22 = gram_(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    // E1 - E2 does not depend on the bias.
    const double e_diff = (grad_[i1] - y1) - (grad_[i2] - y2);
    double a2_new;
    if (eta > 1e-12) {
      a2_new = std::clamp(a2 + y2 * e_diff / eta, lo, hi);
    } else {
      // Flat curvature: the objective is linear along the constraint line.
      const double slope = y2 * e_diff;
      if (slope > 0.0)
        a2_new = hi;
      else if (slope < 0.0)
        a2_new = lo;
      else
        return false;
    }
    a2_new = snap(a2_new);
    if (std::abs(a2_new - a2) < cfg_.eps * (a2_new + a2 + cfg_.eps)) return false;
    const double a1_new = snap(std::clamp(a1 + s * (a2 - a2_new), 0.0, cfg_.c));

    const double d1 = a1_new - a1, d2 = a2_new - a2;
    const double gain = d1 + d2 - (d1 * y1 * grad_[i1] + d2 * y2 * grad_[i2]) -
                        0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * d1 * d2 * s * k12);
    if (gain < 0.0) return false;

    // Platt's running threshold, expressed for f(x) = sum + b.
    const double e1 = error(i1), e2 = error(i2);
    const double b1 = bias_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
    const double b2 = bias_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
    const bool free1 = a1_new > 0.0 && a1_new < cfg_.c;
    const bool free2 = a2_new > 0.0 && a2_new < cfg_.c;
    if (free1)
      bias_ = b1;
    else if (free2)
      bias_ = b2;
    else
      bias_ = 0.5 * (b1 + b2);

    grad_.noalias() += (y1 * d1) * gram_.row(i1) + (y2 * d2) * gram_.row(i2);
    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    objective_ += gain;
    ++stats_.pair_updates;
    if (cfg_.record_objective) stats_.objective_trace.push_back(objective_);
    return true;
  }

  int examine_example(Eigen::Index i2) {
    const double e2 = error(i2);
    const double r2 = e2 * yi(i2);
    const bool violates = (r2 < -cfg_.tol && alpha_[i2] < cfg_.c) || (r2 > cfg_.tol && alpha_[i2] > 0.0);
    if (!violates) return 0;

    Eigen::Index best = -1;
    double best_delta = -1.0;
    Eigen::Index free_count = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!is_free(i)) continue;
      ++free_count;
      const double delta = std::abs(error(i) - e2);
      if (delta > best_delta) {
        best_delta = delta;
        best = i;
      }
    }
    if (free_count > 1 && best >= 0 && take_step(best, i2)) return 1;

    const auto start_free = static_cast<Eigen::Index>(uniform_below(rng_, static_cast<std::uint64_t>(n_)));
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::Index i1 = (start_free + k) % n_;
      if (is_free(i1) && take_step(i1, i2)) return 1;
    }
    const auto start_all = static_cast<Eigen::Index>(uniform_below(rng_, static_cast<std::uint64_t>(n_)));
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::Index i1 = (start_all + k) % n_;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  void run_heuristic_phase() {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    bool examine_all = true;
    int changed = 0;
    int stalled = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    while (changed > 0 || examine_all) {
      changed = 0;
      shuffle(order, rng_);
      for (const Eigen::Index i : order)
        if (examine_all || is_free(i)) changed += examine_example(i);
      if (examine_all)
        examine_all = false;
      else if (changed == 0)
        examine_all = true;

      const double gap = bias_gap().value;
      if (gap <= cfg_.tol) break;
      if (gap < best_gap) {
        best_gap = gap;
        stalled = 0;
      } else if (++stalled >= cfg_.max_passes) {
        break;
      }
    }
  }

  void run_polish_phase() {
    // Each accepted step strictly increases the objective, so this terminates;
    // the cap only guards against floating-point stagnation.
    const std::size_t cap = 100000 + 1000 * static_cast<std::size_t>(n_);
    for (std::size_t iter = 0; iter < cap; ++iter) {
      const Gap gap = bias_gap();
      if (gap.value <= cfg_.tol) return;
      if (!take_step(gap.lower_arg, gap.upper_arg)) return;
    }
  }

  TrainResult<Sample> finish() {
    const Gap gap = bias_gap();
    stats_.final_gap = gap.value;
    stats_.converged = gap.value <= cfg_.tol;

    double sum = 0.0;
    Eigen::Index free_count = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!is_free(i)) continue;
      sum += margin_bias(i);
      ++free_count;
    }
    double bias;
    if (free_count > 0) {
      bias = sum / static_cast<double>(free_count);
    } else if (gap.lower_arg < 0) {
      bias = gap.min_upper;
    } else if (gap.upper_arg < 0) {
      bias = gap.max_lower;
    } else {
      bias = 0.5 * (gap.max_lower + gap.min_upper);
    }

    std::vector<Sample> support;
    std::vector<double> coefs;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (alpha_[i] <= 0.0) continue;
      support.push_back(samples_[static_cast<std::size_t>(i)]);
      coefs.push_back(alpha_[i] * yi(i));
    }
    SvmModel<Sample> model(kernel_, cfg_.c, bias, dimension_of(samples_.front()), std::move(support),
                           Eigen::Map<const Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size())));
    return {std::move(model), alpha_, std::move(stats_)};
  }

  std::span<const Sample> samples_;
  std::span<const int> y_;
  TrainConfig cfg_;
  Eigen::Index n_;
  KernelSpec kernel_;
  KernelMatrix<Sample> gram_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd grad_;  // grad_[i] = sum_j alpha_j y_j K_ij
  double bias_ = 0.0;
  double objective_ = 0.0;
  Rng rng_;
  TrainStats stats_;
};

template <typename Sample>
void check_training_input(std::span<const Sample> samples, std::span<const int> y) {
  if (samples.empty()) throw InputError("train: no samples");
  if (samples.size() != y.size()) throw InputError("train: sample / label count mismatch");
  const Eigen::Index dim = dimension_of(samples.front());
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (dimension_of(samples[i]) != dim) throw InputError("train: inconsistent sample dimensions");
    if (!all_finite(samples[i])) throw InputError("train: non-finite feature value in sample " + std::to_string(i));
    if (y[i] == 1)
      has_pos = true;
    else if (y[i] == -1)
      has_neg = true;
    else
      throw InputError("train: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw InputError("train: training data must contain both classes");
}

}  // namespace detail

// Labels are +1 (private) / -1 (public).
template <typename Sample>
TrainResult<Sample> train_with_details(std::span<const Sample> samples, std::span<const int> y,
                                       const TrainConfig& cfg) {
  cfg.validate();
  detail::check_training_input(samples, y);
  return detail::SmoSolver<Sample>(samples, y, cfg).solve();
}

template <typename Sample>
SvmModel<Sample> train(std::span<const Sample> samples, std::span<const int> y, const TrainConfig& cfg) {
  return train_with_details(samples, y, cfg).model;
}

// Dual objective W(alpha) evaluated directly from pairwise kernel values.
template <typename Sample>
double dual_objective(std::span<const Sample> samples, std::span<const int> y, const Eigen::VectorXd& alpha,
                      const KernelSpec& kernel) {
  const KernelSpec k = kernel.resolved(dimension_of(samples.front()));
  double quad = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j)
      quad += alpha[static_cast<Eigen::Index>(i)] * alpha[static_cast<Eigen::Index>(j)] * y[i] * y[j] *
              kernel_eval(k, samples[i], samples[j]);
  return alpha.sum() - 0.5 * quad;
}

// Largest violation of the KKT conditions under the model's decision function:
// alpha=0 needs y f >= 1, 0<alpha<C needs y f = 1, alpha=C needs y f <= 1.
template <typename Sample>
double max_kkt_violation(const SvmModel<Sample>& model, std::span<const Sample> samples, std::span<const int> y,
                         const Eigen::VectorXd& alpha) {
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double margin = y[i] * model.decision_value(samples[i]);
    const double a = alpha[static_cast<Eigen::Index>(i)];
    double violation;
    if (a <= 0.0)
      violation = std::max(0.0, 1.0 - margin);
    else if (a >= model.c())
      violation = std::max(0.0, margin - 1.0);
    else
      violation = std::abs(margin - 1.0);
    worst = std::max(worst, violation);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Text serialization. Values use the shortest exact round-trip representation.

namespace detail {
inline void write_sample(std::ostream& out, const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) out << ' ' << format_double(x[i]);
}
inline void write_sample(std::ostream& out, const SparseVector& x) {
  out << ' ' << x.nonZeros();
  for (SparseVector::InnerIterator it(x); it; ++it) out << ' ' << it.index() << ':' << format_double(it.value());
}
inline constexpr std::string_view storage_name(const Eigen::VectorXd*) { return "dense"; }
inline constexpr std::string_view storage_name(const SparseVector*) { return "sparse"; }

double parse_double_token(std::string_view token);
std::istringstream next_content_line(std::istream& in, std::string_view expected_key);
Eigen::VectorXd read_dense_row(std::istringstream& row, Eigen::Index dimension);
SparseVector read_sparse_row(std::istringstream& row, Eigen::Index dimension);
inline void read_row(std::istringstream& row, Eigen::Index dim, Eigen::VectorXd& out) { out = read_dense_row(row, dim); }
inline void read_row(std::istringstream& row, Eigen::Index dim, SparseVector& out) { out = read_sparse_row(row, dim); }
}  // namespace detail

template <typename Sample>
void write_model(std::ostream& out, const SvmModel<Sample>& model) {
  out << "svm_model 1\n";
  out << "kernel " << to_string(model.kernel().kind);
  if (model.kernel().kind == KernelKind::Rbf) out << ' ' << format_double(*model.kernel().gamma);
  out << '\n';
  out << "c " << format_double(model.c()) << '\n';
  out << "bias " << format_double(model.bias()) << '\n';
  out << "dimension " << model.dimension() << '\n';
  out << "storage " << detail::storage_name(static_cast<const Sample*>(nullptr)) << '\n';
  out << "support_vectors " << model.support_vectors().size() << '\n';
  for (std::size_t i = 0; i < model.support_vectors().size(); ++i) {
    out << format_double(model.dual_coefs()[static_cast<Eigen::Index>(i)]);
    detail::write_sample(out, model.support_vectors()[i]);
    out << '\n';
  }
}

template <typename Sample>
SvmModel<Sample> read_model(std::istream& in) {
  using detail::next_content_line;
  std::string token;
  auto header = next_content_line(in, "svm_model");
  int version = 0;
  header >> version;
  if (version != 1) throw InputError("model: unsupported version");

  auto kernel_line = next_content_line(in, "kernel");
  KernelSpec kernel;
  kernel_line >> token;
  kernel.kind = parse_kernel_kind(token);
  if (kernel.kind == KernelKind::Rbf) {
    kernel_line >> token;
    kernel.gamma = detail::parse_double_token(token);
  }
  auto c_line = next_content_line(in, "c");
  c_line >> token;
  const double c = detail::parse_double_token(token);
  auto bias_line = next_content_line(in, "bias");
  bias_line >> token;
  const double bias = detail::parse_double_token(token);
  Eigen::Index dimension = 0;
  next_content_line(in, "dimension") >> dimension;
  auto storage_line = next_content_line(in, "storage");
  storage_line >> token;
  if (token != detail::storage_name(static_cast<const Sample*>(nullptr)))
    throw InputError("model: storage '" + token + "' does not match the requested sample type");
  std::size_t count = 0;
  next_content_line(in, "support_vectors") >> count;

  std::vector<Sample> support(count);
  Eigen::VectorXd coefs(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("model: truncated support vector list");
    std::istringstream row(line);
    row >> token;
    coefs[static_cast<Eigen::Index>(i)] = detail::parse_double_token(token);
    detail::read_row(row, dimension, support[i]);
  }
  return SvmModel<Sample>(kernel, c, bias, dimension, std::move(support), std::move(coefs));
}

}  // namespace privpred

#endif  // PRIVPRED_SVM_HPP
