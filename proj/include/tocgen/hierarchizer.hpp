#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "tocgen/detector.hpp"
#include "tocgen/features.hpp"
#include "tocgen/nn/crf.hpp"
#include "tocgen/nn/lstm.hpp"

namespace tocgen {

inline constexpr int kTemplateSlots = 7;  // levels 1-5, NO_MATCH, DISABLED
using TemplateFeature = std::array<double, kTemplateSlots>;

TemplateFeature template_feature_disabled();

/// Word inventory of the word-CNN. Index 0 is <pad>, 1 is <unk>.
struct WordVocab {
  std::vector<std::string> tokens;

  /// Tokens of the training titles with frequency >= min_freq, most frequent
  /// first, ties lexicographic.
  static WordVocab build(const std::vector<std::string>& titles, int min_freq = 2);

  int size() const { return static_cast<int>(tokens.size()) + 2; }
  int index_of(const std::string& token) const;
};

/// Whitespace split of normalize_text(s), lowercased. Keeps punctuation
/// attached to tokens ("1." stays one token).
std::vector<std::string> tokenize_words(const std::string& s);

struct HierConfig {
  int max_words = 70;  // l_w
  int word_dim = 300;  // d_w
  std::vector<ConvSpec> convs{{16, 3, 2}, {16, 5, 2}};
  int fc_dim = 512;
  double dropout = 0.25;
  int lstm_units = 70;
  double recurrent_dropout = 0.1;
  int num_levels = 5;  // K <= 6
  // Long documents are split into overlapping windows at train time and
  // decoded whole at inference.
  int train_window = 400;
  int window_overlap = 50;
};

struct TitleSample {
  std::string text;
  FeatureVector features;
  TemplateFeature template_feature = template_feature_disabled();
  int gold_level = 0;  // 1..K when labeled, 0 otherwise
  int block_index = -1;
};

using DocTitleSeq = std::vector<TitleSample>;

class HierModel {
 public:
  HierModel() = default;
  HierModel(HierConfig cfg, WordVocab words, TitleVocab titles, nn::Rng& rng);

  /// Dense title vector: word-CNN encoding ++ hand-crafted features ++
  /// template one-hot.
  nn::Tensor encode_title(const TitleSample& title) const;

  /// Rows = encode_title of each sequence element, document order.
  nn::Tensor build_document_matrix(const DocTitleSeq& titles) const;

  /// Viterbi decode of the BiLSTM emissions; levels in 1..K.
  std::vector<int> get_hierarchy(const nn::Tensor& doc_matrix) const;

  std::vector<int> predict_levels(const DocTitleSeq& titles) const;

  const HierConfig& config() const { return cfg_; }
  const WordVocab& word_vocab() const { return words_; }
  const TitleVocab& title_vocab() const { return titles_; }
  int title_dim() const { return title_dim_; }
  int feature_dim() const { return feature_dim_; }
  const nn::CrfParams& crf() const { return crf_; }
  nn::CrfParams& mutable_crf() { return crf_; }

  std::vector<nn::ParamRef> params();

  friend HierModel train_hierarchizer(const std::vector<DocTitleSeq>&,
                                      const TitleVocab&, const HierConfig&,
                                      const TrainOptions&, TrainLog*);
  friend void save_hierarchizer(const std::filesystem::path&, const HierModel&);
  friend HierModel load_hierarchizer(const std::filesystem::path&);

 private:
  struct TitleCache;
  struct DocCache;
  nn::Tensor encode_title_impl(const TitleSample& title, bool train, nn::Rng* rng,
                               TitleCache* cache) const;
  double doc_nll(const DocTitleSeq& titles, const std::vector<int>& labels,
                 bool train, nn::Rng* rng, DocCache* cache);
  void doc_backward(const DocCache& cache, double scale);
  void zero_grad();

  HierConfig cfg_;
  WordVocab words_;
  std::unordered_map<std::string, int> word_index_;
  TitleVocab titles_;
  int feature_dim_ = 0;
  int flat_dim_ = 0;
  int title_dim_ = 0;
  nn::Embedding emb_;
  std::vector<nn::Conv1D> convs_;
  nn::Dense fc1_;
  nn::BiLstm lstm_;
  nn::Dense emit_;
  nn::CrfParams crf_;
  nn::Tensor crf_gt_, crf_gs_, crf_ge_;  // CRF grads
};

/// Joint training of word-CNN + BiLSTM + CRF by document-level NLL.
/// Documents with zero titles are skipped with a warning. Deterministic per
/// seed.
HierModel train_hierarchizer(const std::vector<DocTitleSeq>& docs,
                             const TitleVocab& title_vocab, const HierConfig& cfg,
                             const TrainOptions& opts, TrainLog* log = nullptr);

void save_hierarchizer(const std::filesystem::path& path, const HierModel& model);
HierModel load_hierarchizer(const std::filesystem::path& path);

}  // namespace tocgen
