#include "hatepipe/synthdata.hpp"

#include <cmath>

#include "hatepipe/error.hpp"
#include "hatepipe/random.hpp"
#include "hatepipe/utf8.hpp"

namespace hatepipe {

namespace {

// Urdu letters that normalization leaves untouched.
constexpr char32_t kLetters[] = {
    0x0627, 0x0628, 0x067E, 0x062A, 0x0679, 0x062B, 0x062C, 0x0686, 0x062D, 0x062E, 0x062F, 0x0688,
    0x0630, 0x0631, 0x0691, 0x0632, 0x0698, 0x0633, 0x0634, 0x0635, 0x0636, 0x0637, 0x0638, 0x0639,
    0x063A, 0x0641, 0x0642, 0x06A9, 0x06AF, 0x0644, 0x0645, 0x0646, 0x0648, 0x06C1, 0x06CC, 0x06D2};
constexpr std::size_t kNumLetters = sizeof(kLetters) / sizeof(kLetters[0]);
constexpr char32_t kFatha = 0x064E;

std::string urdu_word(std::size_t kind, std::size_t index) {
  std::string out;
  utf8::append(out, kLetters[kind]);
  std::u32string digits;
  do {
    digits.push_back(kLetters[3 + index % (kNumLetters - 3)]);
    index /= kNumLetters - 3;
  } while (index > 0);
  while (digits.size() < 3) digits.push_back(kLetters[3]);
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) utf8::append(out, *it);
  return out;
}

std::string token(const SynthSpec& spec, std::size_t kind, std::size_t index) {
  if (spec.urdu) return urdu_word(kind, index);
  static const char* prefixes[] = {"neg", "pos", "w"};
  return prefixes[kind] + std::to_string(index);
}

// Inserts a fatha after the first letter; preprocessing strips it again.
std::string add_diacritic(const std::string& word) {
  auto cps = utf8::decode(word);
  cps.insert(cps.begin() + 1, kFatha);
  return utf8::encode(cps);
}

}  // namespace

void SynthSpec::validate() const {
  if (min_len < 1 || max_len < min_len) throw ArgumentError("synthetic document lengths must satisfy 1 <= min_len <= max_len");
  if (markers_per_class < 1) throw ArgumentError("markers_per_class must be positive");
  if (!(p_marker >= 0.0 && p_marker <= 1.0)) throw ArgumentError("p_marker must lie in [0, 1]");
  if (noise_vocab == 0 && p_marker < 1.0) throw ArgumentError("noise_vocab = 0 requires p_marker = 1");
}

SynthSpec SynthSpec::imbalanced(std::size_t total, double positive_ratio) {
  if (!(positive_ratio >= 0.0 && positive_ratio <= 1.0)) throw ArgumentError("positive_ratio must lie in [0, 1]");
  SynthSpec s;
  s.n_docs[1] = static_cast<std::size_t>(std::floor(static_cast<double>(total) * positive_ratio + 0.5));
  s.n_docs[0] = total - s.n_docs[1];
  return s;
}

std::string marker_token(const SynthSpec& spec, int label, std::size_t index) {
  return token(spec, label == 1 ? 1 : 0, index);
}

std::string noise_token(const SynthSpec& spec, std::size_t index) { return token(spec, 2, index); }

LabeledDataset generate(const SynthSpec& spec) {
  spec.validate();
  std::vector<int> labels(spec.n_docs[0], 0);
  labels.insert(labels.end(), spec.n_docs[1], 1);
  Rng order(derive_seed(spec.seed, 0));
  order.shuffle(labels.begin(), labels.end());

  const std::size_t width = std::to_string(labels.size()).size();
  std::vector<Document> docs;
  docs.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Rng rng(derive_seed(spec.seed, i + 1));
    const int label = labels[i];
    const std::size_t len = spec.min_len + rng.below(spec.max_len - spec.min_len + 1);
    std::vector<std::string> words;
    words.reserve(len);
    for (std::size_t t = 0; t < len; ++t) {
      if (spec.noise_vocab == 0) {
        words.push_back(marker_token(spec, label, rng.below(spec.markers_per_class)));
      } else {
        words.push_back(noise_token(spec, rng.below(spec.noise_vocab)));
      }
    }
    if (spec.noise_vocab > 0 && rng.uniform() < spec.p_marker) {
      words[rng.below(len)] = marker_token(spec, label, rng.below(spec.markers_per_class));
    }
    if (spec.urdu) {
      for (auto& w : words) {
        if (rng.uniform() < 0.1) w = add_diacritic(w);
      }
    }
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    std::string id = std::to_string(i + 1);
    id.insert(0, width - id.size(), '0');
    docs.push_back(Document{spec.id_prefix + id, std::move(text), {}, label});
  }
  return LabeledDataset(std::move(docs), "positive");
}

SynthSpec task_a_shape(bool test, std::uint64_t seed) {
  SynthSpec s;
  s.n_docs = test ? std::array<std::size_t, 2>{537, 563} : std::array<std::size_t, 2>{1213, 1187};
  s.seed = derive_seed(seed, test ? 2 : 1);
  s.id_prefix = test ? "te" : "tr";
  return s;
}

SynthSpec task_b_shape(bool test, std::uint64_t seed) {
  SynthSpec s;
  s.n_docs = test ? std::array<std::size_t, 2>{3231, 719} : std::array<std::size_t, 2>{4929, 1071};
  s.seed = derive_seed(seed, test ? 4 : 3);
  s.id_prefix = test ? "te" : "tr";
  return s;
}

EmbeddingTable synth_embeddings(const SynthSpec& spec, std::size_t dim, double signal, std::uint64_t seed) {
  if (dim == 0) throw ArgumentError("embedding dimension must be positive");
  EmbeddingTable table(dim);
  Rng rng(seed);
  std::vector<double> v(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  auto add = [&](const std::string& word, double shift) {
    for (auto& x : v) x = rng.normal() * scale;
    v[0] += shift;
    table.add(word, v);
  };
  for (int label = 0; label < 2; ++label) {
    for (std::size_t i = 0; i < spec.markers_per_class; ++i) {
      add(marker_token(spec, label, i), label == 1 ? signal : -signal);
    }
  }
  for (std::size_t i = 0; i < spec.noise_vocab; ++i) add(noise_token(spec, i), 0.0);
  return table;
}

}  // namespace hatepipe
