#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hatepipe/corpus.hpp"
#include "hatepipe/features.hpp"

namespace hatepipe {

// Multichannel 1-D text CNN. Each channel k has its own embedding table, a
// width-k valid convolution with ReLU, max-pooling (size 2, stride 2) and a
// flatten; channel outputs are concatenated, passed through a ReLU dense
// layer and a single sigmoid unit.
struct CnnConfig {
  std::size_t seq_len = 300;
  std::size_t embed_dim = 100;
  std::vector<int> channels{1, 2, 3, 4};  // kernel widths
  std::size_t filters = 32;
  std::size_t dense_units = 10;
  std::size_t epochs = 7;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const CnnConfig&, const CnnConfig&) = default;
};

using IndexRows = std::vector<std::vector<std::uint32_t>>;

// Offsets of every parameter block inside the flat parameter vector.
struct CnnLayout {
  struct Channel {
    int width;
    std::size_t embedding;  // vocab_rows x embed_dim
    std::size_t conv_w;     // width x embed_dim x filters
    std::size_t conv_b;     // filters
    std::size_t conv_len;   // seq_len - width + 1
    std::size_t pooled_len; // conv_len / 2
    std::size_t concat_offset;
  };
  std::vector<Channel> channels;
  std::size_t concat_size = 0;
  std::size_t dense_w = 0;  // dense_units x concat_size
  std::size_t dense_b = 0;
  std::size_t out_w = 0;    // dense_units
  std::size_t out_b = 0;
  std::size_t total = 0;

  static CnnLayout compute(const CnnConfig& config, std::size_t vocab_rows);
};

struct CnnModel {
  CnnConfig config;
  std::size_t vocab_rows = 0;  // pad (0) + vocabulary + OOV
  std::vector<double> params;

  CnnLayout layout() const { return CnnLayout::compute(config, vocab_rows); }
  friend bool operator==(const CnnModel&, const CnnModel&) = default;
};

// Token indices are 1-based vocabulary positions, 0 is padding and
// vocab.size() + 1 is the shared OOV index. Rows are right-padded/truncated.
IndexRows encode_sequences(const std::vector<Document>& docs, const Vocabulary& vocab, std::size_t seq_len);

// Glorot-uniform convolution/dense weights, uniform(-0.05, 0.05) embeddings,
// zero biases, zero padding row.
CnnModel init_cnn(const CnnConfig& config, std::size_t vocab_rows);

std::vector<double> cnn_forward(const CnnModel& model, const IndexRows& batch);

// Mean binary cross-entropy.
double cnn_loss(const CnnModel& model, const IndexRows& batch, std::span<const int> labels);

struct CnnGradients {
  double loss = 0.0;
  std::vector<double> grad;  // same layout as CnnModel::params
};

// Exact gradients of the mean BCE; the padding embedding rows get zero gradient.
CnnGradients cnn_backward(const CnnModel& model, const IndexRows& batch, std::span<const int> labels);

// Mini-batch Adam. Throws TrainingError when the loss becomes non-finite.
CnnModel train_cnn(const CnnConfig& config, const IndexRows& x, std::span<const int> y, std::size_t vocab_rows);

std::vector<int> predict_cnn(const CnnModel& model, const IndexRows& x);

}  // namespace hatepipe
