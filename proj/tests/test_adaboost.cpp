#include <doctest.h>

#include <cmath>

#include "hatepipe/adaboost.hpp"
#include "hatepipe/error.hpp"
#include "hatepipe/random.hpp"
#include "oracles.hpp"

using namespace hatepipe;

namespace {

double weighted_error(const Stump& s, const FeatureMatrix& x, const std::vector<int>& y, const std::vector<double>& w) {
  double e = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (s.vote(x.row(i)) != (y[i] == 1 ? 1 : -1)) e += w[i];
  }
  return e;
}

double exp_loss(const AdaBoostModel& m, const FeatureMatrix& x, const std::vector<int>& y, std::size_t rounds) {
  double l = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) l += std::exp(-(y[i] == 1 ? 1.0 : -1.0) * adaboost_decision(m, x.row(i), rounds));
  return l / static_cast<double>(x.rows());
}

}  // namespace

TEST_SUITE("adaboost") {

TEST_CASE("separable one-dimensional data") {
  const auto x = FeatureMatrix::from_dense({{1}, {2}, {3}, {7}, {8}}, 1);
  const std::vector<int> y{0, 0, 0, 1, 1};
  const std::vector<double> w(5, 0.2);
  const auto fit = stump_fit(x, y, w);
  CHECK(fit.error == 0.0);
  CHECK(fit.stump.threshold > 3.0);
  CHECK(fit.stump.threshold < 7.0);
  CHECK(fit.stump.polarity == 1);
}

TEST_CASE("symmetric unseparable pair") {
  const auto x = FeatureMatrix::from_dense({{1}, {1}}, 1);
  const auto fit = stump_fit(x, std::vector<int>{0, 1}, std::vector<double>{0.5, 0.5});
  CHECK(fit.error == doctest::Approx(0.5));
}

TEST_CASE("weights are validated") {
  const auto x = FeatureMatrix::from_dense({{1}, {2}}, 1);
  CHECK_THROWS_AS(stump_fit(x, std::vector<int>{0, 1}, std::vector<double>{0.5, 0.6}), ArgumentError);
  CHECK_THROWS_AS(stump_fit(x, std::vector<int>{0, 1}, std::vector<double>{1.0}), ArgumentError);
  CHECK_THROWS_AS(adaboost_train(x, std::vector<int>{1, 1}), ValidationError);
}

TEST_CASE("stump fit matches exhaustive enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    oracle::Dense rows(8, std::vector<double>(3));
    // a few repeated values and zeros, as sparse rows have
    for (auto& r : rows)
      for (auto& v : r) v = rng.uniform() < 0.3 ? 0.0 : static_cast<double>(rng.below(5)) - 2.0;
    std::vector<int> y(8);
    for (auto& v : y) v = static_cast<int>(rng.below(2));
    std::vector<double> w(8);
    double total = 0;
    for (auto& v : w) total += (v = rng.uniform(0.1, 1.0));
    for (auto& v : w) v /= total;

    const auto x = FeatureMatrix::from_dense(rows, 3);
    const auto got = stump_fit(x, y, w);
    const auto want = oracle::best_stump(rows, y, w);
    if (std::isinf(want.error)) continue;  // every column constant
    CHECK(got.error == doctest::Approx(want.error).epsilon(1e-12));
    CHECK(weighted_error(got.stump, x, y, w) == doctest::Approx(got.error).epsilon(1e-12));
    if (std::abs(got.error - want.error) < 1e-12) {
      // same tie rule: lowest feature, then lowest threshold, then +1
      CHECK(got.stump.feature == want.feature);
      CHECK(got.stump.threshold == doctest::Approx(want.threshold));
      CHECK(got.stump.polarity == want.polarity);
    }
  }
}

TEST_CASE("exponential loss never increases") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::Dense rows(40, std::vector<double>(4));
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
      for (auto& v : rows[i]) v = rng.uniform(-1, 1);
      y[i] = rows[i][0] * rows[i][1] + 0.3 * rng.uniform(-1, 1) > 0 ? 1 : 0;
    }
    y[0] = 0;
    y[1] = 1;
    const auto x = FeatureMatrix::from_dense(rows, 4);
    const auto m = adaboost_train(x, y, {30, 1.0});
    double prev = exp_loss(m, x, y, 0);
    CHECK(prev == doctest::Approx(1.0));
    for (std::size_t t = 1; t <= m.stumps.size(); ++t) {
      const double cur = exp_loss(m, x, y, t);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("stump-separable data is solved in one round") {
  const auto x = FeatureMatrix::from_dense({{0, 5}, {1, 3}, {0, 1}, {1, 9}, {0, 7}, {1, 2}}, 2);
  const std::vector<int> y{1, 0, 0, 1, 1, 0};
  const auto m = adaboost_train(x, y);
  REQUIRE(m.stumps.size() >= 1);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    CHECK((adaboost_decision(m, x.row(i), 1) > 0 ? 1 : 0) == y[i]);
    CHECK(adaboost_predict(m, x.row(i)) == y[i]);
  }
}

TEST_CASE("prediction is the sign of the weighted vote") {
  AdaBoostModel m;
  m.n_features = 1;
  m.stumps = {Stump{0, 0.5, 1}, Stump{0, 0.5, -1}};
  m.stage_weights = {0.7, 0.7};
  const auto x = FeatureMatrix::from_dense({{1.0}}, 1);
  CHECK(adaboost_decision(m, x.row(0)) == 0.0);
  CHECK(adaboost_predict(m, x.row(0)) == 0);
  m.stage_weights = {0.7, 0.2};
  CHECK(adaboost_decision(m, x.row(0)) == doctest::Approx(0.5));
  CHECK(adaboost_predict(m, x.row(0)) == 1);
  CHECK_THROWS_AS(adaboost_decisions(m, FeatureMatrix::from_dense({{1, 2}}, 2)), ShapeError);
}

}
