#include <doctest.h>

#include "oracle_utils.hpp"

#include "nusl/experiments.hpp"
#include "nusl/gram.hpp"
#include "nusl/sensing.hpp"

#include <cmath>

using namespace nusl;

namespace {

SupportModel random_model(int K, int S, std::uint64_t seed) {
  RngStream rng(seed, 17);
  return build_support_model(oracle::random_model_p(K, S, rng), 1e-6);
}

double weighted_frobenius(const Matrix& psi, const Dictionary& phi,
                          const SupportModel& model) {
  Matrix h = psi.transpose() * phi.entries - Matrix::Identity(phi.K(), phi.K());
  return (h * model.weights().asDiagonal()).norm();
}

}  // namespace

TEST_SUITE_BEGIN("sensing");

TEST_CASE("orthonormal dictionaries are fixed points of both constructions") {
  Dictionary phi = validate_dictionary(Matrix::Identity(8, 8), true);
  Vector p(8);
  p << 0.9, 0.7, 0.5, 0.4, 0.2, 0.15, 0.1, 0.05;
  SupportModel model = build_support_model(p);

  SensingDictionary greedy = greedy_sensing(phi, model);
  CHECK((greedy.entries - phi.entries).cwiseAbs().maxCoeff() < 1e-10);

  Preconditioner pc = preconditioner(phi, model);
  CHECK((pc.psi.entries - phi.entries).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("greedy sensing satisfies its defining normalization") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Dictionary phi = gen_gaussian_dictionary(16, 32, seed);
    SupportModel model = random_model(32, 4, seed);
    SensingDictionary psi = greedy_sensing(phi, model);
    for (int k = 0; k < 32; ++k)
      CHECK(std::abs(psi.entries.col(k).dot(phi.entries.col(k)) - 1.0) < 1e-9);
    CHECK((psi.normalization.array() > 0).all());
  }
}

TEST_CASE("uniform probabilities reproduce the uniform sensing dictionary") {
  Dictionary phi = gen_gaussian_dictionary(12, 20, 5);
  SupportModel uniform = build_support_model(Vector::Constant(20, 4.0 / 20));
  SensingDictionary psi = greedy_sensing(phi, uniform);
  // Direct construction: (Phi Phi^T)^{-1} Phi with columns rescaled to
  // <psi_k, phi_k> = 1.
  Matrix frame = phi.entries * phi.entries.transpose();
  Matrix m = frame.ldlt().solve(phi.entries);
  for (int k = 0; k < 20; ++k) {
    Vector direct = m.col(k) / m.col(k).dot(phi.entries.col(k));
    CHECK((psi.entries.col(k) - direct).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("greedy sensing never loses to the plain dictionary in Frobenius") {
  for (int rep = 0; rep < 6; ++rep) {
    Dictionary phi = gen_gaussian_dictionary(32, 64, 40 + rep);
    DistributionFamily::Kind kinds[] = {
        DistributionFamily::Kind::uniform, DistributionFamily::Kind::linear,
        DistributionFamily::Kind::quadratic, DistributionFamily::Kind::step};
    for (auto kind : kinds) {
      DistributionFamily family{kind, 64, 6, 10.0};
      SupportModel model = gen_distribution(family);
      SensingDictionary psi = greedy_sensing(phi, model);
      CHECK(weighted_frobenius(psi.entries, phi, model) <=
            weighted_frobenius(phi.entries, phi, model) + 1e-9);
    }
  }
}

TEST_CASE("greedy sensing is stationary on the constraint manifold") {
  Dictionary phi = gen_gaussian_dictionary(10, 18, 99);
  SupportModel model = random_model(18, 3, 99);
  SensingDictionary psi = greedy_sensing(phi, model);
  double base = weighted_frobenius(psi.entries, phi, model);
  double base_sq = base * base;

  RngStream rng(7, 1);
  for (int col : {0, 4, 17}) {
    for (int dir = 0; dir < 10; ++dir) {
      Vector t(10);
      for (int i = 0; i < 10; ++i) t[i] = rng.normal();
      // Project onto the tangent space of <phi_col, psi_col> = 1.
      const Vector atom = phi.entries.col(col);
      t -= atom * (t.dot(atom) / atom.squaredNorm());
      t.normalize();
      for (double step : {1e-4, -1e-4}) {
        Matrix perturbed = psi.entries;
        perturbed.col(col) += step * t;
        double value = weighted_frobenius(perturbed, phi, model);
        CHECK(value * value >= base_sq - 1e-10);
      }
    }
  }
}

TEST_CASE("preconditioner whitens the frame and normalizes columns") {
  for (std::uint64_t seed : {4ull, 9ull}) {
    Dictionary phi = gen_gaussian_dictionary(16, 28, seed);
    SupportModel model = random_model(28, 5, seed);
    Preconditioner pc = preconditioner(phi, model);
    Matrix frame = phi.entries * model.weight_squares().asDiagonal() *
                   phi.entries.transpose();
    Matrix identity = pc.transform * frame * pc.transform;
    CHECK((identity - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-9);
    for (int k = 0; k < 28; ++k)
      CHECK(std::abs(pc.psi.entries.col(k).norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("near-singular frames error without a ridge and pass with one") {
  // Two atoms spanning a plane inside R^3: Phi P Phi^T is rank 2.
  Matrix m(3, 2);
  m << 1, 0, 0, 1, 0, 0;
  Dictionary phi = validate_dictionary(m, true);
  Vector p(2);
  p << 1.0, 1.0;
  SupportModel model = build_support_model(p);
  CHECK_THROWS_WITH_AS(greedy_sensing(phi, model),
                       doctest::Contains("near-singular"), std::runtime_error);
  CHECK_THROWS_AS(preconditioner(phi, model), std::runtime_error);
  CHECK_NOTHROW(greedy_sensing(phi, model, 1e-6));
  CHECK_NOTHROW(preconditioner(phi, model, 1e-6));
}

TEST_SUITE_END();
