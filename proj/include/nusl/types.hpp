#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace nusl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// d x K matrix whose columns are the atoms.
struct Dictionary {
  Matrix entries;
  bool unit_norm = false;

  int d() const { return static_cast<int>(entries.rows()); }
  int K() const { return static_cast<int>(entries.cols()); }
};

/// Inclusion probabilities p_k in [0,1] with sum(p) = S.
/// The weight matrix W = diag(sqrt(p_k)) is represented by its diagonal.
struct SupportModel {
  Vector p;
  int S = 0;

  int K() const { return static_cast<int>(p.size()); }
  Vector weights() const { return p.cwiseSqrt(); }
  // Diagonal of W^2 = P. Returned as stored so (W^2)_kk == p_k exactly.
  const Vector& weight_squares() const { return p; }
};

/// Strictly increasing 0-based index set into {0..K-1}.
struct Support {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int i) const;
  bool operator==(const Support&) const = default;
  bool operator<(const Support& other) const { return indices < other.indices; }
};

/// Validates, sorts and range-checks indices.
Support make_support(std::vector<int> indices, int K);

/// y = sum_k phi_{i_k} c_k sigma_k with c_k > 0 and sigma_k in {-1,+1}.
struct SignalInstance {
  Vector y;
  Support support;
  Vector magnitudes;
  Vector signs;
};

/// The scalar norms consumed by the tail bounds and recovery conditions.
struct GramQuantities {
  double mu = 0;       // max absolute (off-diagonal) entry of H
  double hw_inf2 = 0;  // max row l2 norm of H W
  double wh_21 = 0;    // max column l2 norm of W H
  double whw_op = 0;   // operator norm of W H W
  int K = 0;
};

Dictionary validate_dictionary(const Matrix& entries, bool require_unit_norm);

SupportModel build_support_model(const Vector& p, double tol = 1e-9);

/// Assembles y from (phi, support, magnitudes, signs); validates positivity
/// and sign values.
SignalInstance make_signal(const Dictionary& phi, const Support& support,
                           const Vector& magnitudes, const Vector& signs);

}  // namespace nusl
