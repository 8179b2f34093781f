#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tocgen/features.hpp"
#include "tocgen/nn/adam.hpp"
#include "tocgen/nn/layers.hpp"

namespace tocgen {

/// Character inventory for the char-CNN. Index 0 is <pad>, 1 is <unk>,
/// remaining slots are the retained characters sorted by codepoint.
struct CharVocab {
  std::vector<char32_t> chars;

  /// Corpus characters with frequency >= min_freq, capped at max_size symbols
  /// (most frequent first, ties toward the lower codepoint).
  static CharVocab build(const std::vector<std::string>& texts, int min_freq = 10,
                         int max_size = 120);
  /// Printable ASCII plus the common accented Latin-1 block.
  static CharVocab default_latin();

  int size() const { return static_cast<int>(chars.size()) + 2; }
  int index_of(char32_t c) const;  // 1 (<unk>) when absent
};

/// Indices of the first l_c characters of s, right-padded with <pad>.
std::vector<int> encode_chars(const std::string& s, const CharVocab& vocab, int l_c);

struct ConvSpec {
  int kernels = 0, filter = 0, pool = 0;
};

struct DetectorConfig {
  int max_chars = 50;   // l_c
  int char_dim = 200;   // d_c
  std::vector<ConvSpec> convs{{16, 2, 2}, {32, 5, 2}};
  int fc_dim = 256;
  double dropout = 0.25;
};

struct TrainOptions {
  int batch_size = 32;
  int epochs = 30;
  int patience = 5;
  double learning_rate = 1e-3;
  double val_fraction = 0.1;
  std::uint64_t seed = 13;
};

struct TrainLog {
  std::vector<double> train_loss, val_loss;
  int best_epoch = -1;
};

struct DetectorSample {
  std::string text;  // raw block text; normalized internally
  FeatureVector features;
  int label = 0;  // 1 = title
};

class DetectorModel {
 public:
  DetectorModel() = default;
  DetectorModel(DetectorConfig cfg, CharVocab chars, TitleVocab titles,
                nn::Rng& rng);

  /// (p_non_title, p_title); caller text must already be normalized+encoded.
  std::array<double, 2> forward(const std::vector<int>& char_indices,
                                const FeatureVector& features) const;
  std::array<double, 2> predict(const std::string& raw_text,
                                const FeatureVector& features) const;

  const DetectorConfig& config() const { return cfg_; }
  const CharVocab& char_vocab() const { return chars_; }
  const TitleVocab& title_vocab() const { return titles_; }
  int feature_dim() const { return feature_dim_; }

  std::vector<nn::ParamRef> params();

  friend DetectorModel train_detector(const std::vector<DetectorSample>&,
                                      const TitleVocab&, const DetectorConfig&,
                                      const TrainOptions&, TrainLog*);
  friend void save_detector(const std::filesystem::path&, const DetectorModel&);
  friend DetectorModel load_detector(const std::filesystem::path&);

 private:
  struct ForwardCache;
  std::array<double, 2> forward_impl(const std::vector<int>& char_indices,
                                     const FeatureVector& features, bool train,
                                     nn::Rng* rng, ForwardCache* cache) const;
  void backward_impl(const ForwardCache& cache, const nn::Tensor& d_logits);
  void zero_grad();

  DetectorConfig cfg_;
  CharVocab chars_;
  TitleVocab titles_;
  int feature_dim_ = 0;
  int flat_dim_ = 0;
  nn::Embedding emb_;
  std::vector<nn::Conv1D> convs_;
  nn::Dense fc1_, fc2_;
};

/// Trains the char-CNN with class-weighted cross-entropy (inverse class
/// frequency) and early stopping on held-out loss. Deterministic per seed.
/// Throws DataError when the corpus lacks one of the two classes.
DetectorModel train_detector(const std::vector<DetectorSample>& samples,
                             const TitleVocab& title_vocab,
                             const DetectorConfig& cfg, const TrainOptions& opts,
                             TrainLog* log = nullptr);

/// p_title >= threshold (inclusive).
bool is_title(const DetectorModel& model, const std::string& raw_text,
              const FeatureVector& features, double threshold = 0.5);

/// Weight container at `path` plus JSON sidecar at `path.json` holding the
/// config, vocabularies and feature layout.
void save_detector(const std::filesystem::path& path, const DetectorModel& model);
DetectorModel load_detector(const std::filesystem::path& path);

}  // namespace tocgen
