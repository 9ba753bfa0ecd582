#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hatepipe/feature_matrix.hpp"

namespace hatepipe {

// One-feature threshold rule. polarity +1 predicts class 1 when
// x[feature] > threshold; polarity -1 predicts class 1 when x[feature] <= threshold.
struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  int polarity = 1;

  // +1 / -1
  int vote(RowView x) const;
  friend bool operator==(const Stump&, const Stump&) = default;
};

struct StumpFit {
  Stump stump;
  double error = 0.0;
};

// Exhaustive search over features, midpoints between sorted distinct values and
// both polarities. Ties go to the lowest feature, then the lowest threshold,
// then polarity +1. With no usable threshold, returns a constant rule for the
// weighted-majority class.
StumpFit stump_fit(const FeatureMatrix& x, std::span<const int> y, std::span<const double> weights);

struct AdaBoostParams {
  std::size_t n_estimators = 50;
  double learning_rate = 1.0;
};

struct AdaBoostModel {
  std::vector<Stump> stumps;
  std::vector<double> stage_weights;
  std::size_t n_features = 0;

  friend bool operator==(const AdaBoostModel&, const AdaBoostModel&) = default;
};

// Discrete AdaBoost over decision stumps.
AdaBoostModel adaboost_train(const FeatureMatrix& x, std::span<const int> y, const AdaBoostParams& params = {});

// Weighted vote sum_t w_t * h_t(x); the first `rounds` stumps when given.
double adaboost_decision(const AdaBoostModel& model, RowView x, std::size_t rounds = SIZE_MAX);
int adaboost_predict(const AdaBoostModel& model, RowView x);
std::vector<double> adaboost_decisions(const AdaBoostModel& model, const FeatureMatrix& x);

}  // namespace hatepipe
