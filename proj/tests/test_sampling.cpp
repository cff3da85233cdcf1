#include <doctest.h>

#include "oracle_utils.hpp"

#include "nusl/experiments.hpp"
#include "nusl/gram.hpp"
#include "nusl/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

using namespace nusl;

namespace {

SupportModel model_from(std::initializer_list<double> values) {
  Vector p(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) p[i++] = v;
  return build_support_model(p);
}

}  // namespace

TEST_SUITE_BEGIN("sampling");

TEST_CASE("poisson sampling honors degenerate probabilities") {
  SupportModel model = model_from({1.0, 1.0, 0.0});
  for (int t = 0; t < 50; ++t) {
    RngStream rng(7, t);
    Support s = poisson_sample(model, rng);
    CHECK(s.indices == std::vector<int>{0, 1});
  }
}

TEST_CASE("poisson inclusion frequencies match fair coins") {
  SupportModel model = model_from({0.5, 0.5, 0.5, 0.5});
  const int n = 1000000;
  long long counts[4] = {0, 0, 0, 0};
  for (int t = 0; t < n; ++t) {
    RngStream rng(123, t);
    Support s = poisson_sample(model, rng);
    for (int i : s.indices) ++counts[i];
  }
  for (long long c : counts) {
    double freq = static_cast<double>(c) / n;
    CHECK(freq > 0.498);
    CHECK(freq < 0.502);
  }
}

TEST_CASE("poisson support probability matches the product formula") {
  SupportModel model = model_from({0.9, 0.1});
  const int n = 1000000;
  long long hits = 0;  // support exactly {0}
  for (int t = 0; t < n; ++t) {
    RngStream rng(99, t);
    Support s = poisson_sample(model, rng);
    if (s.indices == std::vector<int>{0}) ++hits;
  }
  double freq = static_cast<double>(hits) / n;
  double expected = 0.81;  // 0.9 * (1 - 0.1)
  double sigma = std::sqrt(expected * (1 - expected) / n);
  CHECK(std::abs(freq - expected) < 3 * sigma + 1e-12);
}

TEST_CASE("poisson marginals converge to p for nonuniform models") {
  SupportModel model = model_from({0.8, 0.45, 0.3, 0.25, 0.15, 0.05});
  const int n = 1000000;
  std::vector<long long> counts(6, 0);
  for (int t = 0; t < n; ++t) {
    RngStream rng(314, t);
    for (int i : poisson_sample(model, rng).indices) ++counts[i];
  }
  for (int i = 0; i < 6; ++i) {
    double freq = static_cast<double>(counts[i]) / n;
    double sigma = std::sqrt(model.p[i] * (1 - model.p[i]) / n);
    CHECK(std::abs(freq - model.p[i]) <= 4 * sigma);
  }
}

TEST_CASE("rejective sampling conditions on the cardinality") {
  SupportModel model = model_from({0.5, 0.5, 1.0});
  const int n = 200000;
  long long first = 0, second = 0;
  for (int t = 0; t < n; ++t) {
    RngStream rng(5, t);
    Support s = rejective_sample(model, rng);
    REQUIRE(s.size() == 2);
    if (s.indices == std::vector<int>{0, 2})
      ++first;
    else if (s.indices == std::vector<int>{1, 2})
      ++second;
    else
      FAIL("impossible support drawn");
  }
  CHECK(std::abs(first / double(n) - 0.5) < 0.005);
  CHECK(std::abs(second / double(n) - 0.5) < 0.005);
}

TEST_CASE("rejective sampling is deterministic when forced") {
  SupportModel model = model_from({1.0, 1.0, 0.0, 0.0});
  RngStream rng(0, 0);
  CHECK(rejective_sample(model, rng).indices == std::vector<int>{0, 1});
}

TEST_CASE("rejective sampling errors when a handcrafted model is starved") {
  SupportModel bad;
  bad.p = Vector::Zero(3);
  bad.p[0] = 1.0;
  bad.S = 2;
  RngStream rng(0, 0);
  CHECK_THROWS_WITH_AS(rejective_sample(bad, rng),
                       doctest::Contains("positive"), std::invalid_argument);
}

TEST_CASE("enumerate_poisson matches the hand tables") {
  auto table = enumerate_poisson(model_from({0.5, 0.5}));
  CHECK(table.prob_mask(0b00) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(table.prob_mask(0b01) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(table.prob_mask(0b10) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(table.prob_mask(0b11) == doctest::Approx(0.25).epsilon(1e-14));

  auto forced = enumerate_poisson(model_from({1.0, 0.0}));
  CHECK(forced.prob_mask(0b01) == 1.0);
  CHECK(forced.prob_mask(0b10) == 0.0);

  auto skew = enumerate_poisson(model_from({0.9, 0.1}));
  CHECK(skew.prob_mask(0b00) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(skew.prob_mask(0b01) == doctest::Approx(0.81).epsilon(1e-14));
  CHECK(skew.prob_mask(0b10) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(skew.prob_mask(0b11) == doctest::Approx(0.09).epsilon(1e-14));

  double total = 0;
  for (const auto& [mask, prob] : skew.entries) total += prob;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("enumerate_rejective matches hand enumeration") {
  auto table = enumerate_rejective(model_from({0.5, 0.5, 1.0}));
  CHECK(table.prob_mask(0b101) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(table.prob_mask(0b110) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(table.prob_mask(0b011) == 0.0);

  auto uniform = enumerate_rejective(model_from({0.5, 0.5, 0.5, 0.5}));
  for (const auto& [mask, prob] : uniform.entries)
    CHECK(prob == doctest::Approx(1.0 / 6).epsilon(1e-13));

  // Frozen from an independent high-precision evaluation of the product
  // masses for p = (0.8, 0.6, 0.4, 0.2), S = 2.
  auto skew = enumerate_rejective(model_from({0.8, 0.6, 0.4, 0.2}));
  CHECK(skew.prob_mask(0b0011) ==
        doctest::Approx(0.535315985130111524).epsilon(1e-14));
  CHECK(skew.prob_mask(0b0101) ==
        doctest::Approx(0.237918215613382900).epsilon(1e-14));
  CHECK(skew.prob_mask(0b1001) ==
        doctest::Approx(0.089219330855018587).epsilon(1e-14));
  CHECK(skew.prob_mask(0b0110) ==
        doctest::Approx(0.089219330855018587).epsilon(1e-14));
  CHECK(skew.prob_mask(0b1010) ==
        doctest::Approx(0.033457249070631970).epsilon(1e-14));
  CHECK(skew.prob_mask(0b1100) ==
        doctest::Approx(0.014869888475836431).epsilon(1e-14));

  double total = 0;
  for (const auto& [mask, prob] : skew.entries) total += prob;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("enumeration rejects large alphabets") {
  Vector p = Vector::Constant(21, 1.0 / 21);
  SupportModel big{p, 1};
  CHECK_THROWS_WITH_AS(enumerate_poisson(big), doctest::Contains("too large"),
                       std::invalid_argument);
}

TEST_CASE("rejective empirical distribution matches the table in TV") {
  SupportModel model = model_from({0.55, 0.45, 0.35, 0.30, 0.20, 0.15});
  auto table = enumerate_rejective(model);
  const long long n = 100000;
  std::map<std::uint32_t, long long> counts;
  for (long long t = 0; t < n; ++t) {
    RngStream rng(2024, static_cast<std::uint64_t>(t));
    counts[support_to_mask(rejective_sample(model, rng))]++;
  }
  std::vector<std::pair<std::uint32_t, long long>> sorted(counts.begin(),
                                                          counts.end());
  CHECK(oracle::tv_distance(table, sorted, n) < 0.012);
}

TEST_CASE("table_sample reproduces the table distribution") {
  SupportModel model = model_from({0.8, 0.6, 0.4, 0.2});
  auto table = enumerate_rejective(model);
  const long long n = 100000;
  std::map<std::uint32_t, long long> counts;
  for (long long t = 0; t < n; ++t) {
    RngStream rng(77, static_cast<std::uint64_t>(t));
    counts[support_to_mask(table_sample(table, rng))]++;
  }
  std::vector<std::pair<std::uint32_t, long long>> sorted(counts.begin(),
                                                          counts.end());
  CHECK(oracle::tv_distance(table, sorted, n) < 0.012);
}

TEST_CASE("verify_poissonisation on constant indicators") {
  SupportModel model = model_from({0.9, 0.1});
  auto always = verify_poissonisation(model, [](std::uint32_t) { return true; });
  CHECK(always.lhs == doctest::Approx(1.0));
  CHECK(always.rhs == doctest::Approx(2.0));
  CHECK(always.holds);

  auto never = verify_poissonisation(model, [](std::uint32_t) { return false; });
  CHECK(never.lhs == 0.0);
  CHECK(never.rhs == 0.0);
  CHECK(never.holds);
}

TEST_CASE("verify_poissonisation matches the hand-computed inclusion case") {
  SupportModel model = model_from({0.9, 0.1});
  auto report =
      verify_poissonisation(model, [](std::uint32_t m) { return (m & 1u) != 0; });
  CHECK(report.lhs == doctest::Approx(0.81 / 0.82).epsilon(1e-13));
  CHECK(report.rhs == doctest::Approx(1.8).epsilon(1e-13));
  CHECK(report.holds);
}

TEST_CASE("verify_poissonisation rejects non-monotone indicators") {
  SupportModel model = model_from({0.9, 0.1});
  CHECK_THROWS_WITH_AS(
      verify_poissonisation(model, [](std::uint32_t m) { return m == 0; }),
      doctest::Contains("monotonicity"), std::invalid_argument);
}

TEST_CASE("poissonisation holds exactly for random monotone indicators") {
  RngStream rng(99, 3);
  for (int rep = 0; rep < 4; ++rep) {
    int K = 8;
    Vector p = oracle::random_model_p(K, 3, rng);
    SupportModel model = build_support_model(p, 1e-6);
    for (int j = 0; j < 25; ++j) {
      SetIndicator f = j % 2 == 0 ? oracle::random_upset_union(K, 3, rng)
                                  : oracle::random_weight_threshold(K, rng);
      auto report = verify_poissonisation(model, f);
      CHECK(report.holds);
      CHECK(verify_conditional_monotonicity(model, f));
    }
  }
}

TEST_CASE("poissonisation holds for submatrix-norm threshold indicators") {
  Dictionary phi = gen_gaussian_dictionary(6, 8, 21);
  HollowMatrix h = hollow_gram(phi);
  RngStream rng(5, 5);
  Vector p = oracle::random_model_p(8, 3, rng);
  SupportModel model = build_support_model(p, 1e-6);
  for (double t : {0.1, 0.3, 0.5, 0.8}) {
    SetIndicator f = [&h, t](std::uint32_t mask) {
      Support I = mask_to_support(mask, 8);
      if (I.size() == 0) return false;
      Matrix sub(I.size(), I.size());
      for (int a = 0; a < I.size(); ++a)
        for (int b = 0; b < I.size(); ++b)
          sub(a, b) = h.entries(I.indices[a], I.indices[b]);
      return operator_norm(sub) >= t;
    };
    auto report = verify_poissonisation(model, f);
    CHECK(report.holds);
  }
}

TEST_CASE("conditional monotonicity chain on the hand example") {
  CHECK(verify_conditional_monotonicity(model_from({0.9, 0.1}),
                                        [](std::uint32_t) { return true; }));
  SupportModel model = model_from({0.8, 0.6, 0.4, 0.2});
  CHECK(verify_conditional_monotonicity(
      model, [](std::uint32_t m) { return std::popcount(m) >= 2; }));
  CHECK(verify_conditional_monotonicity(
      model, [](std::uint32_t m) { return (m & 1u) != 0; }));
}

TEST_CASE("median property on hand-checked models") {
  auto fair = verify_median_property(model_from({0.5, 0.5}));
  CHECK(fair.tail == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(fair.holds);

  auto forced = verify_median_property(model_from({1.0, 0.0}));
  CHECK(forced.tail == doctest::Approx(1.0));
  CHECK(forced.holds);

  auto skew = verify_median_property(model_from({0.9, 0.6, 0.5}));
  CHECK(skew.tail == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(skew.holds);
}

TEST_CASE("poisson binomial tail matches enumeration") {
  RngStream rng(17, 0);
  for (int rep = 0; rep < 10; ++rep) {
    int K = 4 + static_cast<int>(rng.below(6));
    Vector p(K);
    for (int i = 0; i < K; ++i) p[i] = rng.uniform();
    for (int s = 0; s <= K + 1; ++s) {
      double fast = poisson_binomial_tail_geq(p, s);
      double slow = oracle::poisson_binomial_tail_enum(p, s);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    }
  }
}

TEST_SUITE_END();
