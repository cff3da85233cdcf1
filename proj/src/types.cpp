#include "nusl/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nusl {

namespace {

constexpr double kUnitNormExact = 1e-12;
constexpr double kUnitNormRepair = 1e-6;

}  // namespace

bool Support::contains(int i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

Support make_support(std::vector<int> indices, int K) {
  std::sort(indices.begin(), indices.end());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= K)
      throw std::invalid_argument("support index out of range");
    if (k > 0 && indices[k] == indices[k - 1])
      throw std::invalid_argument("duplicate support index");
  }
  return Support{std::move(indices)};
}

Dictionary validate_dictionary(const Matrix& entries, bool require_unit_norm) {
  if (entries.rows() < 1 || entries.cols() < 1)
    throw std::invalid_argument("dictionary must be nonempty");
  if (!entries.allFinite())
    throw std::invalid_argument("dictionary has a non-finite entry");

  Dictionary dict;
  dict.entries = entries;
  bool all_unit = true;
  for (int k = 0; k < dict.K(); ++k) {
    double norm = dict.entries.col(k).norm();
    if (norm <= kUnitNormExact)
      throw std::invalid_argument("dictionary has a zero column (column " +
                                  std::to_string(k + 1) + ")");
    if (std::abs(norm - 1.0) > kUnitNormExact) all_unit = false;
    if (require_unit_norm) {
      if (std::abs(norm - 1.0) > kUnitNormRepair)
        throw std::invalid_argument(
            "column " + std::to_string(k + 1) + " norm " + std::to_string(norm) +
            " violates unit-norm requirement");
      dict.entries.col(k) /= norm;
    }
  }
  dict.unit_norm = require_unit_norm || all_unit;
  return dict;
}

SupportModel build_support_model(const Vector& p, double tol) {
  if (p.size() < 1) throw std::invalid_argument("empty probability vector");
  if (!p.allFinite()) throw std::invalid_argument("non-finite probability entry");
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || p[i] > 1.0)
      throw std::invalid_argument("entry " + std::to_string(p[i]) +
                                  " outside [0,1]");
  }
  double sum = p.sum();
  double rounded = std::round(sum);
  if (std::abs(sum - rounded) > tol || rounded < 1.0)
    throw std::invalid_argument("sum " + std::to_string(sum) +
                                " not within tolerance of an integer sparsity");
  int S = static_cast<int>(rounded);
  int positive = 0;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) ++positive;
  if (positive < S)
    throw std::invalid_argument("fewer than S positive entries");
  return SupportModel{p, S};
}

SignalInstance make_signal(const Dictionary& phi, const Support& support,
                           const Vector& magnitudes, const Vector& signs) {
  int S = support.size();
  if (magnitudes.size() != S || signs.size() != S)
    throw std::invalid_argument("coefficient length does not match support size");
  for (int k = 0; k < S; ++k) {
    if (!(magnitudes[k] > 0.0))
      throw std::invalid_argument("magnitudes must be strictly positive");
    if (signs[k] != 1.0 && signs[k] != -1.0)
      throw std::invalid_argument("signs must be +1 or -1");
    if (support.indices[k] < 0 || support.indices[k] >= phi.K())
      throw std::invalid_argument("support index out of range");
  }
  Vector y = Vector::Zero(phi.d());
  for (int k = 0; k < S; ++k)
    y += phi.entries.col(support.indices[k]) * (magnitudes[k] * signs[k]);
  return SignalInstance{std::move(y), support, magnitudes, signs};
}

}  // namespace nusl
