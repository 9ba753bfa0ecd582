#include "hatepipe/svm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "hatepipe/error.hpp"

namespace hatepipe {

void KernelSpec::validate() const {
  if (kind == KernelKind::poly && (degree < 1 || degree > 3)) {
    throw ArgumentError("polynomial kernel degree must be 1, 2 or 3");
  }
  if (gamma && !(*gamma > 0.0)) throw ArgumentError("kernel gamma must be positive");
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::rbf: return "SVM-RBF";
    case KernelKind::sigmoid: return "SVM-SIGMOID";
    case KernelKind::poly: return "SVM-POLY-" + std::to_string(degree);
  }
  return "SVM-?";
}

KernelSpec KernelSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s.rfind("svm-", 0) == 0) s = s.substr(4);
  KernelSpec spec;
  if (s == "rbf") {
    spec.kind = KernelKind::rbf;
  } else if (s == "sigmoid") {
    spec.kind = KernelKind::sigmoid;
  } else if (s.rfind("poly", 0) == 0) {
    spec.kind = KernelKind::poly;
    const auto rest = s.substr(4);
    if (rest.empty()) spec.degree = 3;
    else if (rest == "-1" || rest == "1") spec.degree = 1;
    else if (rest == "-2" || rest == "2") spec.degree = 2;
    else if (rest == "-3" || rest == "3") spec.degree = 3;
    else throw ArgumentError("unsupported polynomial kernel '" + std::string(text) + "'");
  } else {
    throw ArgumentError("unknown kernel '" + std::string(text) + "' (expected rbf, sigmoid, poly-1/2/3)");
  }
  return spec;
}

double scale_gamma(const FeatureMatrix& x) {
  const double count = static_cast<double>(x.rows()) * static_cast<double>(x.cols());
  if (count == 0.0) return 1.0;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (double v : x.row(i).values) {
      sum += v;
      sq += v * v;
    }
  }
  const double mean = sum / count;
  const double var = sq / count - mean * mean;
  if (!(var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(x.cols()) * var);
}

namespace {

double apply_kernel(const KernelSpec& spec, double gamma, double dot_xz, double sq_dist) {
  switch (spec.kind) {
    case KernelKind::rbf: return std::exp(-gamma * std::max(sq_dist, 0.0));
    case KernelKind::sigmoid: return std::tanh(gamma * dot_xz + spec.coef0);
    case KernelKind::poly: {
      const double base = gamma * dot_xz + spec.coef0;
      double r = base;
      for (int d = 1; d < spec.degree; ++d) r *= base;
      return r;
    }
  }
  return 0.0;
}

double resolved_gamma(const KernelSpec& spec) {
  if (!spec.gamma) throw ArgumentError("kernel gamma is unresolved ('scale' needs training data)");
  return *spec.gamma;
}

// Q_ij = y_i y_j K(x_i, x_j), rows computed on demand and kept in an LRU cache.
class KernelRows {
 public:
  KernelRows(const FeatureMatrix& x, const std::vector<double>& y, const KernelSpec& spec, std::size_t megabytes)
      : x_(x), y_(y), spec_(spec), gamma_(*spec.gamma), norms_(x.rows()), scratch_(x.cols(), 0.0) {
    for (std::size_t i = 0; i < x.rows(); ++i) norms_[i] = squared_norm(x.row(i));
    const std::size_t row_bytes = std::max<std::size_t>(1, x.rows()) * sizeof(double);
    capacity_ = std::max<std::size_t>(2, megabytes * 1024 * 1024 / row_bytes);
    diag_.resize(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) diag_[i] = kernel(i, i);
  }

  double kernel(std::size_t i, std::size_t j) const {
    const double d = dot(x_.row(i), x_.row(j));
    const double sq = spec_.kind == KernelKind::rbf ? norms_[i] + norms_[j] - 2.0 * d : 0.0;
    return apply_kernel(spec_, gamma_, d, sq);
  }

  double diag(std::size_t i) const { return diag_[i]; }

  const std::vector<double>& row(std::size_t i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    std::vector<double> data;
    if (lru_.size() >= capacity_) {
      data = std::move(lru_.back().second);
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    const std::size_t n = x_.rows();
    data.resize(n);
    const RowView ri = x_.row(i);
    for (std::size_t k = 0; k < ri.nnz(); ++k) scratch_[ri.indices[k]] = ri.values[k];
    for (std::size_t t = 0; t < n; ++t) {
      const RowView rt = x_.row(t);
      double d = 0.0;
      for (std::size_t k = 0; k < rt.nnz(); ++k) d += scratch_[rt.indices[k]] * rt.values[k];
      const double sq = spec_.kind == KernelKind::rbf ? norms_[i] + norms_[t] - 2.0 * d : 0.0;
      data[t] = y_[i] * y_[t] * apply_kernel(spec_, gamma_, d, sq);
    }
    for (std::size_t k = 0; k < ri.nnz(); ++k) scratch_[ri.indices[k]] = 0.0;
    lru_.emplace_front(i, std::move(data));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  const FeatureMatrix& x_;
  const std::vector<double>& y_;
  KernelSpec spec_;
  double gamma_;
  std::vector<double> norms_;
  std::vector<double> diag_;
  std::vector<double> scratch_;
  std::size_t capacity_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) {
    throw ArgumentError("kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(z.size()) + ")");
  }
  double d = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    d += x[k] * z[k];
    const double diff = x[k] - z[k];
    sq += diff * diff;
  }
  return apply_kernel(spec, resolved_gamma(spec), d, sq);
}

double kernel_eval(const KernelSpec& spec, RowView x, RowView z) {
  const double d = dot(x, z);
  const double sq = spec.kind == KernelKind::rbf ? squared_distance(x, z) : 0.0;
  return apply_kernel(spec, resolved_gamma(spec), d, sq);
}

SvmModel svm_train(const FeatureMatrix& x, std::span<const int> y, const KernelSpec& kernel,
                   const SvmParams& params) {
  kernel.validate();
  const std::size_t n = x.rows();
  if (y.size() != n) throw ArgumentError("svm: label count does not match matrix rows");
  if (n < 2) throw ValidationError("svm: need at least 2 training rows");
  if (!(params.C > 0.0)) throw ArgumentError("svm: C must be positive");
  std::vector<double> ys(n);
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0 && y[i] != 1) throw ArgumentError("svm: labels must be 0 or 1");
    ys[i] = y[i] == 1 ? 1.0 : -1.0;
    has_pos |= y[i] == 1;
    has_neg |= y[i] == 0;
  }
  if (!has_pos || !has_neg) throw ValidationError("svm: training labels contain a single class");

  KernelSpec spec = kernel;
  if (!spec.gamma) spec.gamma = scale_gamma(x);

  const double C = params.C;
  const double tau = 1e-12;
  const std::size_t max_iter = params.max_iterations ? params.max_iterations : std::max<std::size_t>(200000, 50 * n);
  KernelRows q(x, ys, spec, params.cache_megabytes);

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a
  auto in_up = [&](std::size_t t) { return (ys[t] > 0 && alpha[t] < C) || (ys[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (ys[t] > 0 && alpha[t] > 0) || (ys[t] < 0 && alpha[t] < C); };

  SvmModel model;
  model.converged = false;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -ys[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i == n || j == n || g_max - g_min < params.tol) {
      model.converged = true;
      break;
    }

    const auto& qi = q.row(i);
    const double qij = qi[j];
    const double old_ai = alpha[i], old_aj = alpha[j];
    if (ys[i] != ys[j]) {
      double quad = q.diag(i) + q.diag(j) + 2.0 * qij;
      if (quad <= 0) quad = tau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = q.diag(i) + q.diag(j) - 2.0 * qij;
      if (quad <= 0) quad = tau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
    // qi stays valid until row(j) is fetched.
    if (dai != 0.0) {
      for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * dai;
    }
    if (daj != 0.0) {
      const auto& qj = q.row(j);
      for (std::size_t t = 0; t < n; ++t) grad[t] += qj[t] * daj;
    }
  }
  model.iterations = iter;

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = ys[t] * grad[t];
    if (alpha[t] >= C) {
      if (ys[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (ys[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      sum_free += yg;
      ++n_free;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  model.kernel = spec;
  model.C = C;
  model.n_features = x.cols();
  model.bias = -rho;
  model.support_vectors = FeatureMatrix(x.cols());
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12) {
      model.support_vectors.add_row(x.row(t));
      model.support_indices.push_back(t);
      model.dual_coefs.push_back(alpha[t] * ys[t]);
    }
  }
  return model;
}

double svm_decision(const SvmModel& model, RowView x) {
  if (x.nnz() > 0 && x.indices.back() >= model.n_features) {
    throw ArgumentError("svm: input has a feature index beyond the model width " + std::to_string(model.n_features));
  }
  FeatureMatrix m(model.n_features);
  m.add_row(x);
  return svm_decisions(model, m)[0];
}

double svm_decision(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw ArgumentError("svm: input width " + std::to_string(x.size()) + " does not match model width " +
                        std::to_string(model.n_features));
  }
  FeatureMatrix m(x.size());
  m.add_dense_row(x);
  return svm_decision(model, m.row(0));
}

int svm_predict(const SvmModel& model, RowView x) { return svm_decision(model, x) > 0.0 ? 1 : 0; }
int svm_predict(const SvmModel& model, std::span<const double> x) { return svm_decision(model, x) > 0.0 ? 1 : 0; }

std::vector<double> svm_decisions(const SvmModel& model, const FeatureMatrix& x) {
  if (x.cols() != model.n_features) {
    throw ShapeError("svm: feature width " + std::to_string(x.cols()) + " does not match model width " +
                        std::to_string(model.n_features));
  }
  const double gamma = resolved_gamma(model.kernel);
  const FeatureMatrix& sv = model.support_vectors;
  const bool rbf = model.kernel.kind == KernelKind::rbf;
  std::vector<double> sv_norms(sv.rows());
  if (rbf) {
    for (std::size_t s = 0; s < sv.rows(); ++s) sv_norms[s] = squared_norm(sv.row(s));
  }
  std::vector<double> scratch(x.cols(), 0.0);
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const RowView r = x.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) scratch[r.indices[k]] = r.values[k];
    const double norm = rbf ? squared_norm(r) : 0.0;
    double f = model.bias;
    for (std::size_t s = 0; s < sv.rows(); ++s) {
      const RowView v = sv.row(s);
      double d = 0.0;
      for (std::size_t k = 0; k < v.nnz(); ++k) d += scratch[v.indices[k]] * v.values[k];
      const double sq = rbf ? norm + sv_norms[s] - 2.0 * d : 0.0;
      f += model.dual_coefs[s] * apply_kernel(model.kernel, gamma, d, sq);
    }
    for (std::size_t k = 0; k < r.nnz(); ++k) scratch[r.indices[k]] = 0.0;
    out[i] = f;
  }
  return out;
}

}  // namespace hatepipe
