#include "nusl/algorithms.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nusl {

namespace {

constexpr double kPinvCutoff = 1e-10;  // relative to sigma_max

Matrix gather_columns(const Matrix& m, const std::vector<int>& idx) {
  Matrix out(m.rows(), static_cast<int>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(k) = m.col(idx[k]);
  return out;
}

// Least squares via SVD with a relative cutoff; flags rank deficiency.
Vector pinv_solve(const Matrix& a, const Vector& y, bool& full_rank) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() ? sv[0] * kPinvCutoff : 0.0;
  full_rank = true;
  Vector uy = svd.matrixU().transpose() * y;
  Vector x = Vector::Zero(a.cols());
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff && sv[i] > 0.0) {
      x += svd.matrixV().col(i) * (uy[i] / sv[i]);
    } else {
      full_rank = false;
    }
  }
  if (sv.size() < a.cols()) full_rank = false;
  return x;
}

void check_selection_inputs(const Dictionary& phi, const Vector& y, int S,
                            const std::optional<Matrix>& sensing) {
  if (y.size() != phi.d()) throw std::invalid_argument("signal length mismatch");
  if (S < 0 || S > std::min(phi.d(), phi.K()))
    throw std::invalid_argument("sparsity S out of range");
  if (sensing) {
    if (sensing->rows() != phi.d() || sensing->cols() != phi.K())
      throw std::invalid_argument("sensing matrix shape mismatch");
    for (int k = 0; k < phi.K(); ++k) {
      if (std::abs(sensing->col(k).dot(phi.entries.col(k)) - 1.0) > 1e-9)
        throw std::invalid_argument(
            "sensing matrix violates <psi_k, phi_k> = 1");
    }
  }
}

int argmax_abs(const Vector& values, const std::vector<bool>& taken) {
  int best = -1;
  double best_val = -1.0;
  for (int k = 0; k < values.size(); ++k) {
    if (taken[k]) continue;
    double v = std::abs(values[k]);
    if (v > best_val) {  // strict: ties keep the lowest index
      best_val = v;
      best = k;
    }
  }
  return best;
}

}  // namespace

RecoveryResult thresholding(const Dictionary& phi, const Vector& y, int S,
                            const std::optional<Matrix>& sensing) {
  check_selection_inputs(phi, y, S, sensing);
  RecoveryResult result;
  result.coefficients = Vector::Zero(phi.K());
  result.iterations = 1;
  if (S == 0) return result;

  const Matrix& selector = sensing ? *sensing : phi.entries;
  Vector corr = selector.transpose() * y;
  std::vector<int> order(phi.K());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(corr[a]) > std::abs(corr[b]);
  });
  std::vector<int> picked(order.begin(), order.begin() + S);
  std::sort(picked.begin(), picked.end());

  bool full_rank = true;
  Vector x = pinv_solve(gather_columns(phi.entries, picked), y, full_rank);
  for (int k = 0; k < S; ++k) result.coefficients[picked[k]] = x[k];
  result.support_found = Support{std::move(picked)};
  result.converged = full_rank;
  return result;
}

RecoveryResult omp(const Dictionary& phi, const Vector& y, int S,
                   const std::optional<Matrix>& sensing) {
  check_selection_inputs(phi, y, S, sensing);
  RecoveryResult result;
  result.coefficients = Vector::Zero(phi.K());
  if (S == 0) return result;

  const Matrix& selector = sensing ? *sensing : phi.entries;
  std::vector<bool> taken(phi.K(), false);
  std::vector<int> selected;
  selected.reserve(S);
  Vector residual = y;
  Vector x;
  bool full_rank = true;
  for (int it = 0; it < S; ++it) {
    Vector corr = selector.transpose() * residual;
    int j = argmax_abs(corr, taken);
    taken[j] = true;
    selected.push_back(j);
    // Residual update always projects with the original dictionary.
    x = pinv_solve(gather_columns(phi.entries, selected), y, full_rank);
    residual = y;
    for (std::size_t k = 0; k < selected.size(); ++k)
      residual -= phi.entries.col(selected[k]) * x[k];
  }
  for (std::size_t k = 0; k < selected.size(); ++k)
    result.coefficients[selected[k]] = x[k];
  std::sort(selected.begin(), selected.end());
  result.support_found = Support{std::move(selected)};
  result.iterations = S;
  result.converged = full_rank;
  return result;
}

// ---------------------------------------------------------------------------
// Basis pursuit: min 1^T (x+ + x-) s.t. A(x+ - x-) = y, x+- >= 0, solved with
// a Mehrotra-style primal-dual interior-point method on the split LP.
// The normal-equation matrix is A (D+ + D-) A^T, size d x d.
// ---------------------------------------------------------------------------

namespace {

struct IpmState {
  Vector zp, zn;  // primal split variables, > 0
  Vector sp, sn;  // dual slacks, > 0
  Vector nu;      // equality multipliers
};

double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (int i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

}  // namespace

RecoveryResult basis_pursuit(const Matrix& a, const Vector& y,
                             const BpOptions& opts) {
  if (y.size() != a.rows()) throw std::invalid_argument("signal length mismatch");
  if (!a.allFinite() || !y.allFinite())
    throw std::invalid_argument("non-finite input");
  const int d = static_cast<int>(a.rows());
  const int K = static_cast<int>(a.cols());

  RecoveryResult result;
  result.coefficients = Vector::Zero(K);
  if (y.norm() == 0.0) {
    result.converged = true;
    return result;
  }

  // Feasibility pre-check: y must lie in the column span.
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  Vector x_ls = qr.solve(y);
  double ls_residual = (a * x_ls - y).norm();
  if (ls_residual > opts.feas_tol * (1.0 + y.norm()))
    throw std::runtime_error("basis pursuit: y is not in the span of the columns");

  IpmState st;
  double init = 1.0 + x_ls.cwiseAbs().maxCoeff();
  st.zp = x_ls.cwiseMax(0.0).array() + init;
  st.zn = (-x_ls).cwiseMax(0.0).array() + init;
  st.sp = Vector::Constant(K, 1.0);
  st.sn = Vector::Constant(K, 1.0);
  st.nu = Vector::Zero(d);

  const double gap_target = 1e-11;
  const double feas_target = std::min(opts.feas_tol, 1e-10);
  bool converged = false;
  int iter = 0;
  Vector x = st.zp - st.zn;

  for (; iter < opts.max_iterations; ++iter) {
    x = st.zp - st.zn;
    Vector atnu = a.transpose() * st.nu;
    Vector rp = y - a * x;
    Vector rdp = Vector::Ones(K) - atnu - st.sp;
    Vector rdn = Vector::Ones(K) + atnu - st.sn;
    double gap = st.zp.dot(st.sp) + st.zn.dot(st.sn);
    double mu = gap / (2.0 * K);
    double dual_inf = std::max(rdp.cwiseAbs().maxCoeff(), rdn.cwiseAbs().maxCoeff());

    double l1 = x.cwiseAbs().sum();
    if (rp.norm() <= feas_target && dual_inf <= 1e-9 &&
        gap <= std::min(gap_target * (1.0 + l1), opts.gap_tol * (1.0 + l1))) {
      converged = true;
      break;
    }

    Vector dp = st.zp.cwiseQuotient(st.sp);
    Vector dn = st.zn.cwiseQuotient(st.sn);
    Matrix normal = a * (dp + dn).asDiagonal() * a.transpose();
    normal.diagonal().array() += 1e-13 * (1.0 + normal.diagonal().maxCoeff());
    Eigen::LDLT<Matrix> fact(normal);
    if (fact.info() != Eigen::Success) {
      normal.diagonal().array() += 1e-8 * (1.0 + normal.diagonal().maxCoeff());
      fact.compute(normal);
      if (fact.info() != Eigen::Success) break;
    }

    auto solve_newton = [&](const Vector& rcp, const Vector& rcn, Vector& dzp,
                            Vector& dzn, Vector& dsp, Vector& dsn, Vector& dnu) {
      Vector rhs = rp + a * (dp.cwiseProduct(rdp) - rcp.cwiseQuotient(st.sp)) -
                   a * (dn.cwiseProduct(rdn) - rcn.cwiseQuotient(st.sn));
      dnu = fact.solve(rhs);
      Vector atdnu = a.transpose() * dnu;
      dzp = dp.cwiseProduct(atdnu - rdp) + rcp.cwiseQuotient(st.sp);
      dzn = dn.cwiseProduct(-atdnu - rdn) + rcn.cwiseQuotient(st.sn);
      dsp = (rcp - st.sp.cwiseProduct(dzp)).cwiseQuotient(st.zp);
      dsn = (rcn - st.sn.cwiseProduct(dzn)).cwiseQuotient(st.zn);
    };

    // Affine (predictor) direction.
    Vector rcp_aff = -st.zp.cwiseProduct(st.sp);
    Vector rcn_aff = -st.zn.cwiseProduct(st.sn);
    Vector dzp, dzn, dsp, dsn, dnu;
    solve_newton(rcp_aff, rcn_aff, dzp, dzn, dsp, dsn, dnu);

    double ap = std::min(max_step(st.zp, dzp), max_step(st.zn, dzn));
    double ad = std::min(max_step(st.sp, dsp), max_step(st.sn, dsn));
    double gap_aff = (st.zp + ap * dzp).dot(st.sp + ad * dsp) +
                     (st.zn + ap * dzn).dot(st.sn + ad * dsn);
    double sigma = std::pow(gap_aff / gap, 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // Corrector.
    Vector rcp = Vector::Constant(K, sigma * mu) - st.zp.cwiseProduct(st.sp) -
                 dzp.cwiseProduct(dsp);
    Vector rcn = Vector::Constant(K, sigma * mu) - st.zn.cwiseProduct(st.sn) -
                 dzn.cwiseProduct(dsn);
    solve_newton(rcp, rcn, dzp, dzn, dsp, dsn, dnu);

    double eta = 0.99995;
    ap = eta * std::min(max_step(st.zp, dzp), max_step(st.zn, dzn));
    ad = eta * std::min(max_step(st.sp, dsp), max_step(st.sn, dsn));
    ap = std::min(ap, 1.0);
    ad = std::min(ad, 1.0);

    st.zp += ap * dzp;
    st.zn += ap * dzn;
    st.sp += ad * dsp;
    st.sn += ad * dsn;
    st.nu += ad * dnu;

    if (mu < 1e-16 && rp.norm() <= feas_target) {
      converged = true;
      x = st.zp - st.zn;
      break;
    }
  }

  x = st.zp - st.zn;
  result.coefficients = x;
  result.iterations = iter;
  double l1 = x.cwiseAbs().sum();
  double gap = st.zp.dot(st.sp) + st.zn.dot(st.sn);
  double feas = (a * x - y).norm();
  result.converged =
      converged && feas <= opts.feas_tol && gap <= opts.gap_tol * (1.0 + l1);

  std::vector<int> support;
  for (int k = 0; k < K; ++k)
    if (std::abs(x[k]) > opts.support_tol) support.push_back(k);
  result.support_found = Support{std::move(support)};
  return result;
}

RecoveryResult bp_preconditioned(const Dictionary& phi, const SupportModel& model,
                                 const Vector& y, const BpOptions& opts,
                                 double ridge) {
  Preconditioner pc = preconditioner(phi, model, ridge);
  Vector y_tilde = pc.transform * y;

  BpOptions inner = opts;
  // The map back multiplies the residual by T^{-1}; tighten accordingly.
  double t_inv_norm = 0.0;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(pc.transform, Eigen::EigenvaluesOnly);
    double lmin = eig.eigenvalues().cwiseAbs().minCoeff();
    t_inv_norm = lmin > 0 ? 1.0 / lmin : 1e12;
  }
  inner.feas_tol = opts.feas_tol / std::max(1.0, 2.0 * t_inv_norm);

  RecoveryResult inner_result = basis_pursuit(pc.psi.entries, y_tilde, inner);

  RecoveryResult result;
  result.coefficients = Vector(phi.K());
  for (int k = 0; k < phi.K(); ++k) {
    double dk = pc.psi.normalization[k];
    result.coefficients[k] = std::sqrt(dk) * inner_result.coefficients[k];
  }
  result.iterations = inner_result.iterations;
  double feas = (phi.entries * result.coefficients - y).norm();
  result.converged = inner_result.converged && feas <= opts.feas_tol;
  std::vector<int> support;
  for (int k = 0; k < phi.K(); ++k)
    if (std::abs(result.coefficients[k]) > opts.support_tol) support.push_back(k);
  result.support_found = Support{std::move(support)};
  return result;
}

RecoveryVerdict judge_recovery(const RecoveryResult& result,
                               const SignalInstance& truth, double coeff_tol) {
  RecoveryVerdict verdict;
  verdict.support_exact = result.support_found == truth.support;
  Vector truth_dense = Vector::Zero(result.coefficients.size());
  for (int k = 0; k < truth.support.size(); ++k)
    truth_dense[truth.support.indices[k]] = truth.magnitudes[k] * truth.signs[k];
  verdict.coeff_max_err =
      (result.coefficients - truth_dense).cwiseAbs().maxCoeff();
  verdict.coeff_exact = verdict.coeff_max_err <= coeff_tol;
  return verdict;
}

}  // namespace nusl
