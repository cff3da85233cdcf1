#pragma once

#include "nusl/sensing.hpp"
#include "nusl/types.hpp"

#include <optional>

namespace nusl {

struct RecoveryResult {
  Support support_found;
  Vector coefficients;  // length K, dense
  int iterations = 0;
  bool converged = true;
};

struct BpOptions {
  double feas_tol = 1e-9;     // |A x - y|_2 at the solution
  double gap_tol = 1e-8;      // duality gap <= gap_tol * (1 + |x|_1)
  double support_tol = 1e-6;  // entries above this count as support
  int max_iterations = 200;
};

/// Select the S largest |<psi_k, y>| (psi = phi columns when no sensing
/// matrix is given), then least squares on the selection. Ties go to the
/// lowest index.
RecoveryResult thresholding(const Dictionary& phi, const Vector& y, int S,
                            const std::optional<Matrix>& sensing = std::nullopt);

/// S greedy iterations; selection via psi, residual update always via phi.
RecoveryResult omp(const Dictionary& phi, const Vector& y, int S,
                   const std::optional<Matrix>& sensing = std::nullopt);

/// min |x|_1 s.t. a x = y via the nonnegative-split LP solved with a
/// primal-dual interior-point method.
RecoveryResult basis_pursuit(const Matrix& a, const Vector& y,
                             const BpOptions& opts = {});

/// Builds Psi = (Phi P Phi^T)^{-1/2} Phi D^{1/2}, solves BP on (Psi, T y),
/// maps back x = D^{1/2} z.
RecoveryResult bp_preconditioned(const Dictionary& phi, const SupportModel& model,
                                 const Vector& y, const BpOptions& opts = {},
                                 double ridge = 0.0);

struct RecoveryVerdict {
  bool support_exact = false;
  bool coeff_exact = false;
  double coeff_max_err = 0;
};

RecoveryVerdict judge_recovery(const RecoveryResult& result,
                               const SignalInstance& truth,
                               double coeff_tol = 1e-4);

}  // namespace nusl
