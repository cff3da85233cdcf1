#include "nusl/gram.hpp"

#include "nusl/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace nusl {

namespace {

constexpr int kFullSvdLimit = 512;

double power_iteration_norm(const Matrix& m) {
  // Iterate on the smaller Gram form B = M M^T or M^T M.
  bool use_rows = m.rows() <= m.cols();
  int n = use_rows ? static_cast<int>(m.rows()) : static_cast<int>(m.cols());
  RngStream rng(0x6e75736cULL, 0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vector w = use_rows ? Vector(m * (m.transpose() * v))
                        : Vector(m.transpose() * (m * v));
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    double next = norm;  // Rayleigh quotient of the normalized iterate
    if (std::abs(next - lambda) <= 1e-12 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return std::sqrt(lambda);
}

}  // namespace

HollowMatrix hollow_gram(const Dictionary& phi) {
  for (int k = 0; k < phi.K(); ++k) {
    if (std::abs(phi.entries.col(k).norm() - 1.0) > 1e-9)
      throw std::invalid_argument("hollow_gram requires unit-norm columns");
  }
  Matrix g = phi.entries.transpose() * phi.entries;
  g = ((g + g.transpose()) * 0.5).eval();
  g.diagonal().setZero();
  return HollowMatrix{std::move(g), true};
}

HollowMatrix cross_gram(const Matrix& psi, const Dictionary& phi) {
  if (psi.rows() != phi.entries.rows() || psi.cols() != phi.entries.cols())
    throw std::invalid_argument("sensing/dictionary shape mismatch");
  Matrix h = psi.transpose() * phi.entries;
  h.diagonal().setZero();
  return HollowMatrix{std::move(h), false};
}

GramQuantities gram_quantities(const HollowMatrix& h, const SupportModel& model) {
  if (h.entries.cols() != model.K() || h.entries.rows() != model.K())
    throw std::invalid_argument("gram/model shape mismatch");
  Vector w = model.weights();
  GramQuantities q;
  q.K = model.K();
  q.mu = h.entries.cwiseAbs().maxCoeff();
  Matrix hw = h.entries * w.asDiagonal();
  q.hw_inf2 = hw.rowwise().norm().maxCoeff();
  Matrix wh = w.asDiagonal() * h.entries;
  q.wh_21 = wh.colwise().norm().maxCoeff();
  q.whw_op = operator_norm(w.asDiagonal() * hw);
  return q;
}

double restricted_conditioning(const Dictionary& phi, const Support& I) {
  if (I.size() == 0) return 0.0;
  int S = I.size();
  Matrix sub(phi.d(), S);
  for (int k = 0; k < S; ++k) sub.col(k) = phi.entries.col(I.indices[k]);
  Matrix gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  double lmin = eig.eigenvalues().minCoeff();
  double lmax = eig.eigenvalues().maxCoeff();
  return std::max(lmax - 1.0, 1.0 - lmin);
}

double restricted_max_row_norm(const HollowMatrix& h, const Support& I) {
  if (I.size() == 0) return 0.0;
  double best = 0.0;
  for (int i = 0; i < h.entries.rows(); ++i) {
    double acc = 0.0;
    for (int j : I.indices) acc += h.entries(i, j) * h.entries(i, j);
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw std::invalid_argument("non-finite matrix");
  if (std::min(m.rows(), m.cols()) <= kFullSvdLimit) {
    if (m.rows() == m.cols() && m.isApprox(m.transpose(), 1e-14)) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
      return eig.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  }
  return power_iteration_norm(m);
}

}  // namespace nusl
