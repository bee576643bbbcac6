#include "privpred/svm.hpp"

#include <charconv>

namespace privpred {

std::string_view to_string(KernelKind kind) { return kind == KernelKind::Rbf ? "rbf" : "linear"; }

KernelKind parse_kernel_kind(std::string_view text) {
  const std::string lowered = to_lower(trim(text));
  if (lowered == "linear") return KernelKind::Linear;
  if (lowered == "rbf") return KernelKind::Rbf;
  throw InputError("unknown kernel '" + std::string(text) + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::Rbf && gamma && !(*gamma > 0.0 && std::isfinite(*gamma)))
    throw InputError("rbf kernel: gamma must be positive");
}

double KernelSpec::resolved_gamma(Eigen::Index dimension) const {
  if (gamma) return *gamma;
  if (dimension <= 0) throw InputError("rbf kernel: cannot derive gamma for an empty feature space");
  return 1.0 / static_cast<double>(dimension);
}

KernelSpec KernelSpec::resolved(Eigen::Index dimension) const {
  validate();
  if (kind == KernelKind::Linear) return linear();
  return rbf(resolved_gamma(dimension));
}

void TrainConfig::validate() const {
  if (!(c > 0.0 && std::isfinite(c))) throw InputError("train: C must be positive");
  if (!(tol > 0.0)) throw InputError("train: tol must be positive");
  if (!(eps >= 0.0)) throw InputError("train: eps must be non-negative");
  if (max_passes < 1) throw InputError("train: max_passes must be at least 1");
  kernel.validate();
}

namespace detail {

double parse_double_token(std::string_view token) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size())
    throw InputError("model: bad number '" + std::string(token) + "'");
  return value;
}

std::istringstream next_content_line(std::istream& in, std::string_view expected_key) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (key != expected_key)
      throw InputError("model: expected '" + std::string(expected_key) + "', found '" + key + "'");
    return row;
  }
  throw InputError("model: missing '" + std::string(expected_key) + "' line");
}

Eigen::VectorXd read_dense_row(std::istringstream& row, Eigen::Index dimension) {
  Eigen::VectorXd x(dimension);
  std::string token;
  for (Eigen::Index i = 0; i < dimension; ++i) {
    if (!(row >> token)) throw InputError("model: support vector shorter than dimension");
    x[i] = parse_double_token(token);
  }
  if (row >> token) throw InputError("model: support vector longer than dimension");
  return x;
}

SparseVector read_sparse_row(std::istringstream& row, Eigen::Index dimension) {
  Eigen::Index nnz = 0;
  if (!(row >> nnz) || nnz < 0) throw InputError("model: bad sparse entry count");
  SparseVector x(dimension);
  std::string token;
  Eigen::Index previous = -1;
  for (Eigen::Index k = 0; k < nnz; ++k) {
    if (!(row >> token)) throw InputError("model: truncated sparse support vector");
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw InputError("model: bad sparse entry '" + token + "'");
    Eigen::Index index = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + colon, index);
    if (ec != std::errc{} || end != token.data() + colon || index <= previous || index >= dimension)
      throw InputError("model: bad sparse index in '" + token + "'");
    x.insert(index) = parse_double_token(std::string_view(token).substr(colon + 1));
    previous = index;
  }
  return x;
}

}  // namespace detail
}  // namespace privpred
