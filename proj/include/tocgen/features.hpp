#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tocgen/doc.hpp"

namespace tocgen {

inline constexpr int kTitleVocabSize = 100;

/// The 100 most frequent tokens in training-set titles, ties broken
/// lexicographically, padded with sentinels when fewer exist.
struct TitleVocab {
  std::vector<std::string> tokens;  // exactly kTitleVocabSize, no duplicates

  static TitleVocab build(const std::vector<std::string>& training_titles);

  /// 100-dim 0/1 vector: presence of each vocab token in the text.
  std::vector<double> presence(const std::string& text) const;

  bool operator==(const TitleVocab&) const = default;
};

enum class Fuzzy { Small, Normal, Large };

/// small iff value < mean - std, large iff value > mean + std, else normal
/// (boundaries inclusive as normal).
Fuzzy fuzzify(double value, double mean, double stddev);

enum class Cmp3 { Smaller, Same, Larger };

/// Raw (unencoded) hand-crafted features of one text block.
struct RawFeatures {
  // unary
  double contains_verb = 0;
  double is_bold = 0;
  double is_italic = 0;
  double is_all_caps = 0;
  double text_length = 0;             // characters of merged_text; fuzzified
  double begins_with_numbering = 0;
  std::vector<double> one_hot;        // kTitleVocabSize presence slots
  double indent = 0;                  // left coordinate; fuzzified
  double font_size = 0;               // fuzzified
  // relative (prev/subs = previous/subsequent block; neutral at boundaries)
  bool style_same_prev = true;
  bool style_same_subs = true;
  int weight_diff_prev = 0;           // bold flag difference in {-1,0,1}
  int weight_diff_subs = 0;
  Cmp3 size_cmp_prev = Cmp3::Same;
  Cmp3 size_cmp_subs = Cmp3::Same;
  double size_diff_prev = 0;          // fuzzified
  double size_diff_subs = 0;          // fuzzified
  Cmp3 indent_cmp_prev = Cmp3::Same;
  Cmp3 indent_cmp_subs = Cmp3::Same;
  double indent_diff_prev = 0;        // fuzzified
  double indent_diff_subs = 0;        // fuzzified
  double dist_prev = 0;               // vertical distance, px; fuzzified
  double dist_subs = 0;               // fuzzified
  std::vector<double> prev_one_hot;   // zeros when no previous block
  std::vector<double> subs_one_hot;
  double color_same_prev = 1;         // 1 when colors are the SAME
  double color_same_subs = 1;
};

/// Per-document mean/std (population) for every fuzzified feature, plus the
/// median inter-block gap used as the boundary-neutral distance.
struct DocStats {
  struct MeanStd {
    double mean = 0, stddev = 0;
  };
  MeanStd text_length, indent, font_size;
  MeanStd size_diff_prev, indent_diff_prev, dist_prev;
  MeanStd size_diff_subs, indent_diff_subs, dist_subs;
  double median_line_gap = 0;
};

/// Name -> [offset, length) map of the encoded vector; constant for a fixed
/// vocab size.
struct FeatureLayout {
  struct Slice {
    std::string name;
    int offset = 0;
    int length = 0;
  };
  std::vector<Slice> slices;
  int total = 0;

  const Slice& at(const std::string& name) const;
};

struct FeatureVector {
  std::vector<double> values;

  bool operator==(const FeatureVector&) const = default;
};

const FeatureLayout& feature_layout();

/// Vertical distance between two blocks in reading order; spans page breaks
/// by unrolling page heights.
double block_distance(const TextBlock& a, const TextBlock& b, const Document& doc);

RawFeatures extract_raw(const TextBlock& block, const TextBlock* prev,
                        const TextBlock* next, const TitleVocab& vocab,
                        double neutral_gap = 0.0);

DocStats compute_doc_stats(const std::vector<RawFeatures>& raw,
                           double median_line_gap);

FeatureVector encode(const RawFeatures& raw, const DocStats& stats);

/// extract_raw + compute_doc_stats + encode over all blocks of a segmented
/// document.
std::vector<FeatureVector> featurize_document(const Document& segmented,
                                              const TitleVocab& vocab);

std::vector<RawFeatures> extract_document_raw(const Document& segmented,
                                              const TitleVocab& vocab,
                                              DocStats* stats_out = nullptr);

bool begins_with_numbering_text(const std::string& text);
bool is_verb_token(const std::string& token);
bool contains_verb_text(const std::string& text);

}  // namespace tocgen
