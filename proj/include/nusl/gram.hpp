#pragma once

#include "nusl/types.hpp"

namespace nusl {

/// Square matrix with exact zero diagonal (a Gram or cross-Gram with the
/// diagonal removed).
struct HollowMatrix {
  Matrix entries;
  bool symmetric = false;

  int K() const { return static_cast<int>(entries.cols()); }
};

/// H = Phi^T Phi - I for a unit-norm dictionary.
HollowMatrix hollow_gram(const Dictionary& phi);

/// H = Psi^T Phi - diag(Psi^T Phi); psi need not be normalized.
HollowMatrix cross_gram(const Matrix& psi, const Dictionary& phi);

/// The four norms consumed by the bounds: mu, |HW|_{inf,2}, |WH|_{2,1},
/// |WHW|_{2,2}.
GramQuantities gram_quantities(const HollowMatrix& h, const SupportModel& model);

/// theta_I = |Phi_I^T Phi_I - I|_{2,2} = max(lmax - 1, 1 - lmin).
double restricted_conditioning(const Dictionary& phi, const Support& I);

/// |H_I|_{inf,2} = max row l2 norm of the column restriction of H to I.
double restricted_max_row_norm(const HollowMatrix& h, const Support& I);

/// Largest singular value. Full SVD up to min-dim 512, power iteration above.
double operator_norm(const Matrix& m);

}  // namespace nusl
