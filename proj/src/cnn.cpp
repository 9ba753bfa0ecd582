#include "hatepipe/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hatepipe/error.hpp"
#include "hatepipe/random.hpp"

namespace hatepipe {

void CnnConfig::validate() const {
  if (channels.empty()) throw ArgumentError("cnn: at least one channel is required");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] < 1 || channels[i] > 4) throw ArgumentError("cnn: channel widths must be within 1..4");
    for (std::size_t j = 0; j < i; ++j) {
      if (channels[j] == channels[i]) throw ArgumentError("cnn: duplicate channel width");
    }
  }
  if (filters == 0) throw ArgumentError("cnn: filters must be positive");
  if (embed_dim == 0 || dense_units == 0) throw ArgumentError("cnn: embed_dim and dense_units must be positive");
  const int widest = *std::max_element(channels.begin(), channels.end());
  if (seq_len < static_cast<std::size_t>(widest) + 1) {
    throw ArgumentError("cnn: seq_len must leave at least two convolution positions for the widest channel");
  }
  if (batch_size == 0) throw ArgumentError("cnn: batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ArgumentError("cnn: learning_rate must be positive");
}

CnnLayout CnnLayout::compute(const CnnConfig& config, std::size_t vocab_rows) {
  CnnLayout l;
  std::size_t off = 0;
  for (int width : config.channels) {
    Channel c{};
    c.width = width;
    c.embedding = off;
    off += vocab_rows * config.embed_dim;
    c.conv_w = off;
    off += static_cast<std::size_t>(width) * config.embed_dim * config.filters;
    c.conv_b = off;
    off += config.filters;
    c.conv_len = config.seq_len - static_cast<std::size_t>(width) + 1;
    c.pooled_len = c.conv_len / 2;
    c.concat_offset = l.concat_size;
    l.concat_size += c.pooled_len * config.filters;
    l.channels.push_back(c);
  }
  l.dense_w = off;
  off += config.dense_units * l.concat_size;
  l.dense_b = off;
  off += config.dense_units;
  l.out_w = off;
  off += config.dense_units;
  l.out_b = off;
  off += 1;
  l.total = off;
  return l;
}

IndexRows encode_sequences(const std::vector<Document>& docs, const Vocabulary& vocab, std::size_t seq_len) {
  const auto oov = static_cast<std::uint32_t>(vocab.size() + 1);
  IndexRows out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<std::uint32_t> row(seq_len, 0);
    const std::size_t n = std::min(seq_len, doc.tokens.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto idx = vocab.index_of(doc.tokens[i]);
      row[i] = idx ? static_cast<std::uint32_t>(*idx + 1) : oov;
    }
    out.push_back(std::move(row));
  }
  return out;
}

CnnModel init_cnn(const CnnConfig& config, std::size_t vocab_rows) {
  config.validate();
  if (vocab_rows < 2) throw ArgumentError("cnn: vocab_rows must include padding and at least one token");
  CnnModel model{config, vocab_rows, {}};
  const auto l = model.layout();
  model.params.assign(l.total, 0.0);
  Rng rng(config.seed);
  const std::size_t D = config.embed_dim, F = config.filters, H = config.dense_units;
  for (const auto& c : l.channels) {
    for (std::size_t r = 1; r < vocab_rows; ++r) {
      for (std::size_t d = 0; d < D; ++d) model.params[c.embedding + r * D + d] = rng.uniform(-0.05, 0.05);
    }
    const double fan_in = static_cast<double>(c.width * D), fan_out = static_cast<double>(c.width * F);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (std::size_t k = 0; k < static_cast<std::size_t>(c.width) * D * F; ++k) {
      model.params[c.conv_w + k] = rng.uniform(-limit, limit);
    }
  }
  const double dense_limit = std::sqrt(6.0 / static_cast<double>(l.concat_size + H));
  for (std::size_t k = 0; k < H * l.concat_size; ++k) model.params[l.dense_w + k] = rng.uniform(-dense_limit, dense_limit);
  const double out_limit = std::sqrt(6.0 / static_cast<double>(H + 1));
  for (std::size_t h = 0; h < H; ++h) model.params[l.out_w + h] = rng.uniform(-out_limit, out_limit);
  return model;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log p + (1-y) log(1-p)] with p = sigmoid(z), evaluated without overflow.
double bce_from_logit(double z, int y) {
  const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
  return softplus - (y == 1 ? z : 0.0);
}

struct Pass {
  std::vector<std::vector<double>> conv;            // per channel, conv_len x F pre-activations
  std::vector<std::vector<std::uint32_t>> argmax;   // per channel, pooled_len x F winning positions
  std::vector<double> concat;
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  std::size_t n_eff = 0;
  double logit = 0.0;
};

void check_row(const CnnModel& model, const std::vector<std::uint32_t>& row) {
  if (row.size() != model.config.seq_len) {
    throw ArgumentError("cnn: sequence length " + std::to_string(row.size()) + " does not match seq_len " +
                        std::to_string(model.config.seq_len));
  }
  for (auto idx : row) {
    if (idx >= model.vocab_rows) {
      throw ArgumentError("cnn: token index " + std::to_string(idx) + " exceeds vocabulary rows " +
                          std::to_string(model.vocab_rows));
    }
  }
}

void forward_one(const CnnModel& model, const CnnLayout& l, const std::vector<std::uint32_t>& row, Pass& pass) {
  const auto& P = model.params;
  const std::size_t D = model.config.embed_dim, F = model.config.filters, H = model.config.dense_units;
  pass.n_eff = 0;
  for (std::size_t i = row.size(); i > 0; --i) {
    if (row[i - 1] != 0) {
      pass.n_eff = i;
      break;
    }
  }
  pass.conv.resize(l.channels.size());
  pass.argmax.resize(l.channels.size());
  pass.concat.assign(l.concat_size, 0.0);
  for (std::size_t ci = 0; ci < l.channels.size(); ++ci) {
    const auto& c = l.channels[ci];
    auto& conv = pass.conv[ci];
    conv.resize(c.conv_len * F);
    const double* bias = &P[c.conv_b];
    for (std::size_t p = 0; p < c.conv_len; ++p) {
      double* acc = &conv[p * F];
      std::copy(bias, bias + F, acc);
      // Windows starting at or after n_eff read only the zero padding row.
      if (p >= pass.n_eff) continue;
      for (std::size_t j = 0; j < static_cast<std::size_t>(c.width); ++j) {
        const auto tok = row[p + j];
        if (tok == 0) continue;
        const double* e = &P[c.embedding + tok * D];
        const double* w = &P[c.conv_w + j * D * F];
        for (std::size_t d = 0; d < D; ++d) {
          const double ev = e[d];
          const double* wr = w + d * F;
          for (std::size_t f = 0; f < F; ++f) acc[f] += ev * wr[f];
        }
      }
    }
    auto& arg = pass.argmax[ci];
    arg.resize(c.pooled_len * F);
    for (std::size_t q = 0; q < c.pooled_len; ++q) {
      for (std::size_t f = 0; f < F; ++f) {
        const double a = std::max(conv[2 * q * F + f], 0.0);
        const double b = std::max(conv[(2 * q + 1) * F + f], 0.0);
        const bool first = a >= b;
        arg[q * F + f] = static_cast<std::uint32_t>(first ? 2 * q : 2 * q + 1);
        pass.concat[c.concat_offset + q * F + f] = first ? a : b;
      }
    }
  }
  pass.hidden_pre.assign(H, 0.0);
  pass.hidden.assign(H, 0.0);
  double logit = P[l.out_b];
  for (std::size_t h = 0; h < H; ++h) {
    const double* w = &P[l.dense_w + h * l.concat_size];
    double z = P[l.dense_b + h];
    for (std::size_t t = 0; t < l.concat_size; ++t) z += w[t] * pass.concat[t];
    pass.hidden_pre[h] = z;
    pass.hidden[h] = std::max(z, 0.0);
    logit += P[l.out_w + h] * pass.hidden[h];
  }
  pass.logit = logit;
}

// Accumulates scale * d(loss_i)/d(params) into grad.
void backward_one(const CnnModel& model, const CnnLayout& l, const std::vector<std::uint32_t>& row,
                  const Pass& pass, int label, double scale, std::vector<double>& grad,
                  std::vector<double>& d_concat) {
  const auto& P = model.params;
  const std::size_t D = model.config.embed_dim, F = model.config.filters, H = model.config.dense_units;
  const double d_logit = (sigmoid(pass.logit) - static_cast<double>(label)) * scale;
  grad[l.out_b] += d_logit;
  d_concat.assign(l.concat_size, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    grad[l.out_w + h] += d_logit * pass.hidden[h];
    const double dz = pass.hidden_pre[h] > 0.0 ? d_logit * P[l.out_w + h] : 0.0;
    if (dz == 0.0) continue;
    grad[l.dense_b + h] += dz;
    double* gw = &grad[l.dense_w + h * l.concat_size];
    const double* w = &P[l.dense_w + h * l.concat_size];
    for (std::size_t t = 0; t < l.concat_size; ++t) {
      gw[t] += dz * pass.concat[t];
      d_concat[t] += w[t] * dz;
    }
  }
  for (std::size_t ci = 0; ci < l.channels.size(); ++ci) {
    const auto& c = l.channels[ci];
    const auto& conv = pass.conv[ci];
    const auto& arg = pass.argmax[ci];
    for (std::size_t q = 0; q < c.pooled_len; ++q) {
      for (std::size_t f = 0; f < F; ++f) {
        const double g = d_concat[c.concat_offset + q * F + f];
        if (g == 0.0) continue;
        const std::size_t p = arg[q * F + f];
        if (!(conv[p * F + f] > 0.0)) continue;
        grad[c.conv_b + f] += g;
        if (p >= pass.n_eff) continue;
        for (std::size_t j = 0; j < static_cast<std::size_t>(c.width); ++j) {
          const auto tok = row[p + j];
          if (tok == 0) continue;
          const std::size_t e_off = c.embedding + tok * D;
          const std::size_t w_off = c.conv_w + j * D * F;
          for (std::size_t d = 0; d < D; ++d) {
            grad[w_off + d * F + f] += P[e_off + d] * g;
            grad[e_off + d] += P[w_off + d * F + f] * g;
          }
        }
      }
    }
  }
}

void check_batch(const CnnModel& model, const IndexRows& batch, std::span<const int> labels) {
  if (labels.size() != batch.size()) throw ArgumentError("cnn: label count does not match batch size");
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("cnn: labels must be 0 or 1");
  }
  for (const auto& row : batch) check_row(model, row);
}

}  // namespace

std::vector<double> cnn_forward(const CnnModel& model, const IndexRows& batch) {
  const auto l = model.layout();
  Pass pass;
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& row : batch) {
    check_row(model, row);
    forward_one(model, l, row, pass);
    out.push_back(sigmoid(pass.logit));
  }
  return out;
}

double cnn_loss(const CnnModel& model, const IndexRows& batch, std::span<const int> labels) {
  check_batch(model, batch, labels);
  if (batch.empty()) return 0.0;
  const auto l = model.layout();
  Pass pass;
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    forward_one(model, l, batch[i], pass);
    total += bce_from_logit(pass.logit, labels[i]);
  }
  return total / static_cast<double>(batch.size());
}

CnnGradients cnn_backward(const CnnModel& model, const IndexRows& batch, std::span<const int> labels) {
  check_batch(model, batch, labels);
  const auto l = model.layout();
  CnnGradients out;
  out.grad.assign(l.total, 0.0);
  if (batch.empty()) return out;
  const double scale = 1.0 / static_cast<double>(batch.size());
  Pass pass;
  std::vector<double> d_concat;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    forward_one(model, l, batch[i], pass);
    out.loss += bce_from_logit(pass.logit, labels[i]);
    backward_one(model, l, batch[i], pass, labels[i], scale, out.grad, d_concat);
  }
  out.loss *= scale;
  const std::size_t D = model.config.embed_dim;
  for (const auto& c : l.channels) std::fill_n(out.grad.begin() + static_cast<std::ptrdiff_t>(c.embedding), D, 0.0);
  return out;
}

CnnModel train_cnn(const CnnConfig& config, const IndexRows& x, std::span<const int> y, std::size_t vocab_rows) {
  CnnModel model = init_cnn(config, vocab_rows);
  check_batch(model, x, y);
  if (x.empty()) throw ValidationError("cnn: empty training set");
  const auto l = model.layout();
  std::vector<double> m(l.total, 0.0), v(l.total, 0.0);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  IndexRows batch;
  std::vector<int> labels;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, 1000 + epoch));
    rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0, b = 0; start < order.size(); start += config.batch_size, ++b) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      labels.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(x[order[k]]);
        labels.push_back(y[order[k]]);
      }
      auto g = cnn_backward(model, batch, labels);
      if (!std::isfinite(g.loss)) {
        throw TrainingError("cnn: non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                            std::to_string(b + 1));
      }
      ++step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      const double lr = config.learning_rate * std::sqrt(c2) / c1;
      for (std::size_t k = 0; k < l.total; ++k) {
        const double gk = g.grad[k];
        m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * gk;
        v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * gk * gk;
        model.params[k] -= lr * m[k] / (std::sqrt(v[k]) + config.epsilon);
      }
    }
  }
  return model;
}

std::vector<int> predict_cnn(const CnnModel& model, const IndexRows& x) {
  const auto probs = cnn_forward(model, x);
  std::vector<int> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] > 0.5 ? 1 : 0;
  return out;
}

}  // namespace hatepipe
