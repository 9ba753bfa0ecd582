#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hatepipe/feature_matrix.hpp"

namespace hatepipe {

enum class KernelKind { rbf, sigmoid, poly };

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  int degree = 3;               // poly only, 1..3
  std::optional<double> gamma;  // nullopt = "scale", resolved at training time
  double coef0 = 0.0;

  void validate() const;
  // SVM-RBF, SVM-SIGMOID, SVM-POLY-<d>
  std::string name() const;
  // Accepts "rbf", "sigmoid", "poly-2", "svm-poly-1", "SVM-RBF", ...
  static KernelSpec parse(std::string_view text);

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// "scale": 1 / (n_features * variance of all entries of x); 1.0 when the variance is zero.
double scale_gamma(const FeatureMatrix& x);

// Requires a resolved gamma. Throws ArgumentError on width mismatch.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z);
double kernel_eval(const KernelSpec& spec, RowView x, RowView z);

struct SvmParams {
  double C = 1.0;
  double tol = 1e-3;
  std::size_t max_iterations = 0;  // 0 = max(200000, 50 * n)
  std::size_t cache_megabytes = 256;
};

struct SvmModel {
  KernelSpec kernel;  // gamma resolved
  double C = 1.0;
  std::size_t n_features = 0;
  FeatureMatrix support_vectors;
  std::vector<std::size_t> support_indices;  // rows of the training matrix
  std::vector<double> dual_coefs;            // alpha_i * y_i, y in {-1,+1}
  double bias = 0.0;
  bool converged = true;
  std::size_t iterations = 0;

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

// Soft-margin dual solved by SMO with maximal-violating-pair working sets.
// Labels are {0,1}; internally mapped to {-1,+1}. Throws ValidationError
// when fewer than two rows or only one class is given.
SvmModel svm_train(const FeatureMatrix& x, std::span<const int> y, const KernelSpec& kernel,
                   const SvmParams& params = {});

double svm_decision(const SvmModel& model, RowView x);
double svm_decision(const SvmModel& model, std::span<const double> x);
// 1 when the decision value is strictly positive.
int svm_predict(const SvmModel& model, RowView x);
int svm_predict(const SvmModel& model, std::span<const double> x);

// Checks the row width against the model before scoring each row.
std::vector<double> svm_decisions(const SvmModel& model, const FeatureMatrix& x);

}  // namespace hatepipe
