#include "nusl/sensing.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace nusl {

namespace {

constexpr double kMaxCondition = 1e12;

// Phi P Phi^T + ridge I with its eigendecomposition, condition-checked.
struct GramFrame {
  Matrix matrix;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
};

GramFrame frame_matrix(const Dictionary& phi, const SupportModel& model,
                       double ridge) {
  if (phi.K() != model.K())
    throw std::invalid_argument("dictionary/model shape mismatch");
  if (ridge < 0) throw std::invalid_argument("ridge must be nonnegative");
  GramFrame frame;
  frame.matrix = phi.entries * model.weight_squares().asDiagonal() *
                 phi.entries.transpose();
  frame.matrix = ((frame.matrix + frame.matrix.transpose()) * 0.5).eval();
  if (ridge > 0) frame.matrix.diagonal().array() += ridge;
  frame.eig.compute(frame.matrix);
  double lmin = frame.eig.eigenvalues().minCoeff();
  double lmax = frame.eig.eigenvalues().maxCoeff();
  if (lmin < -1e-12 * std::max(1.0, lmax))
    throw std::runtime_error("frame matrix has a negative eigenvalue");
  if (!(lmin > 0.0) || lmax / lmin > kMaxCondition)
    throw std::runtime_error(
        "frame matrix Phi P Phi^T is near-singular (try a ridge)");
  return frame;
}

}  // namespace

SensingDictionary greedy_sensing(const Dictionary& phi, const SupportModel& model,
                                 double ridge) {
  GramFrame frame = frame_matrix(phi, model, ridge);
  Matrix m = frame.eig.eigenvectors() *
             frame.eig.eigenvalues().cwiseInverse().asDiagonal() *
             frame.eig.eigenvectors().transpose() * phi.entries;
  SensingDictionary psi;
  psi.kind = SensingDictionary::Kind::greedy;
  psi.normalization = Vector(phi.K());
  psi.entries = Matrix(phi.d(), phi.K());
  for (int k = 0; k < phi.K(); ++k) {
    double g = m.col(k).dot(phi.entries.col(k));
    if (g <= 1e-12)
      throw std::runtime_error("atom " + std::to_string(k + 1) +
                               " is unsensable under this distribution");
    psi.normalization[k] = 1.0 / g;
    psi.entries.col(k) = m.col(k) / g;
  }
  return psi;
}

Preconditioner preconditioner(const Dictionary& phi, const SupportModel& model,
                              double ridge) {
  GramFrame frame = frame_matrix(phi, model, ridge);
  Preconditioner pc;
  pc.transform = frame.eig.eigenvectors() *
                 frame.eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 frame.eig.eigenvectors().transpose();
  Matrix raw = pc.transform * phi.entries;
  pc.psi.kind = SensingDictionary::Kind::precondition;
  pc.psi.normalization = Vector(phi.K());
  pc.psi.entries = Matrix(phi.d(), phi.K());
  for (int k = 0; k < phi.K(); ++k) {
    double norm2 = raw.col(k).squaredNorm();
    if (norm2 <= 1e-24)
      throw std::runtime_error("atom " + std::to_string(k + 1) +
                               " vanishes under the preconditioner");
    pc.psi.normalization[k] = 1.0 / norm2;
    pc.psi.entries.col(k) = raw.col(k) / std::sqrt(norm2);
  }
  return pc;
}

}  // namespace nusl
