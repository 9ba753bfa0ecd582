#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hatepipe/corpus.hpp"
#include "hatepipe/embeddings.hpp"

namespace hatepipe {

// Marker-token corpus generator. Every document is a run of noise tokens;
// with probability p_marker one position holds a marker of its own class.
struct SynthSpec {
  std::array<std::size_t, 2> n_docs{100, 100};  // class 0, class 1
  std::size_t markers_per_class = 20;
  std::size_t noise_vocab = 500;
  std::size_t min_len = 5;
  std::size_t max_len = 15;
  double p_marker = 0.95;
  bool urdu = false;  // draw tokens from Arabic-script letters instead of ASCII
  std::uint64_t seed = 0;
  std::string id_prefix = "d";

  void validate() const;

  // Counts for `total` documents with the given positive share (rounded).
  static SynthSpec imbalanced(std::size_t total, double positive_ratio);
};

// Token vocabularies the generator draws from. Marker sets are disjoint.
std::string marker_token(const SynthSpec& spec, int label, std::size_t index);
std::string noise_token(const SynthSpec& spec, std::size_t index);

LabeledDataset generate(const SynthSpec& spec);

// Shapes of the two competition datasets (train, test).
SynthSpec task_a_shape(bool test, std::uint64_t seed = 0);
SynthSpec task_b_shape(bool test, std::uint64_t seed = 0);

// Random word vectors for every token of `spec`. Markers of class 1 are
// shifted by +signal along the first axis, class-0 markers by -signal.
EmbeddingTable synth_embeddings(const SynthSpec& spec, std::size_t dim, double signal, std::uint64_t seed);

}  // namespace hatepipe
