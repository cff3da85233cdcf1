#pragma once

#include "nusl/types.hpp"

namespace nusl {

/// Distribution-aware sensing dictionary. Greedy kind satisfies
/// <psi_k, phi_k> = 1; precondition kind has unit-norm columns.
struct SensingDictionary {
  enum class Kind { greedy, precondition };

  Matrix entries;        // d x K
  Vector normalization;  // diagonal of D, strictly positive
  Kind kind = Kind::greedy;
};

/// Psi = (Phi P Phi^T + ridge I)^{-1} Phi D with D chosen so that
/// diag(Psi^T Phi) = 1. P = W^2 = diag(p).
SensingDictionary greedy_sensing(const Dictionary& phi, const SupportModel& model,
                                 double ridge = 0.0);

struct Preconditioner {
  Matrix transform;      // T = (Phi P Phi^T)^{-1/2}, symmetric d x d
  SensingDictionary psi; // T Phi D^{1/2}, unit-norm columns
};

/// Preconditioning pair for BP: solve min |z|_1 s.t. T y = Psi z and map
/// back x = D^{1/2} z.
Preconditioner preconditioner(const Dictionary& phi, const SupportModel& model,
                              double ridge = 0.0);

}  // namespace nusl
