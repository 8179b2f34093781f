#include "tocgen/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "tocgen/errors.hpp"
#include "tocgen/text_norm.hpp"

namespace tocgen {

namespace {

constexpr double kSizeTolerance = 0.5;   // pt
constexpr double kIndentTolerance = 2.0; // px

}  // namespace

TitleVocab TitleVocab::build(const std::vector<std::string>& training_titles) {
  if (training_titles.empty()) {
    throw DataError("title vocab: empty training title list");
  }
  std::map<std::string, long> freq;
  for (const auto& title : training_titles) {
    for (const auto& token : tokenize_title(title)) ++freq[token];
  }
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  TitleVocab vocab;
  for (const auto& [token, count] : ranked) {
    if (static_cast<int>(vocab.tokens.size()) >= kTitleVocabSize) break;
    vocab.tokens.push_back(token);
  }
  int pad = 1;
  while (static_cast<int>(vocab.tokens.size()) < kTitleVocabSize) {
    vocab.tokens.push_back("<pad-" + std::to_string(pad++) + ">");
  }
  return vocab;
}

std::vector<double> TitleVocab::presence(const std::string& text) const {
  std::unordered_set<std::string> present;
  for (const auto& token : tokenize_title(text)) present.insert(token);
  std::vector<double> out(tokens.size(), 0.0);
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (present.contains(tokens[i])) out[i] = 1.0;
  }
  return out;
}

Fuzzy fuzzify(double value, double mean, double stddev) {
  if (value < mean - stddev) return Fuzzy::Small;
  if (value > mean + stddev) return Fuzzy::Large;
  return Fuzzy::Normal;
}

bool contains_verb_text(const std::string& text) {
  for (const auto& token : tokenize_title(text)) {
    if (is_verb_token(token)) return true;
  }
  return false;
}

// Numbering = optional parenthesised token, or tokens (arabic / roman / single
// letter) chained by '.', ')' or '-' with at least one separator, ending
// before whitespace. Matches "1.", "II.2.a", "(a)", "1.2.3".
bool begins_with_numbering_text(const std::string& text) {
  std::u32string s = decode_utf8(normalize_text(text));
  size_t pos = 0;
  auto is_digit = [](char32_t c) { return c >= U'0' && c <= U'9'; };
  auto is_alpha = [](char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  };
  auto is_roman = [](char32_t c) {
    constexpr std::u32string_view kRoman = U"ivxlcdmIVXLCDM";
    return kRoman.find(c) != std::u32string_view::npos;
  };
  auto read_token = [&]() -> bool {
    size_t start = pos;
    if (pos < s.size() && is_digit(s[pos])) {
      while (pos < s.size() && is_digit(s[pos])) ++pos;
      return true;
    }
    while (pos < s.size() && is_roman(s[pos])) ++pos;
    if (pos > start) return true;
    if (pos < s.size() && is_alpha(s[pos])) {
      ++pos;
      // single letter only; a longer run is a word
      if (pos < s.size() && is_alpha(s[pos])) {
        pos = start;
        return false;
      }
      return true;
    }
    return false;
  };
  auto is_sep = [](char32_t c) { return c == U'.' || c == U')' || c == U'-'; };

  bool paren = false;
  if (pos < s.size() && s[pos] == U'(') {
    paren = true;
    ++pos;
  }
  if (!read_token()) return false;
  int seps = 0;
  if (paren) {
    if (pos < s.size() && s[pos] == U')') {
      ++pos;
      ++seps;
    } else {
      return false;
    }
  }
  while (pos < s.size() && is_sep(s[pos])) {
    ++seps;
    ++pos;
    read_token();  // trailing separator without a token is fine ("1.")
  }
  if (seps == 0) return false;
  return pos >= s.size() || s[pos] == U' ';
}

double block_distance(const TextBlock& a, const TextBlock& b, const Document& doc) {
  if (a.page() == b.lines.front().page) {
    return b.top() - a.bottom();
  }
  double dist = doc.page_dims(a.page()).height - a.bottom();
  for (int page = a.page() + 1; page < b.lines.front().page; ++page) {
    dist += doc.page_dims(page).height;
  }
  return dist + b.top();
}

namespace {

Cmp3 compare_with_tolerance(double mine, double other, double tolerance) {
  if (mine < other - tolerance) return Cmp3::Smaller;
  if (mine > other + tolerance) return Cmp3::Larger;
  return Cmp3::Same;
}

bool block_style_same(const TextBlock& a, const TextBlock& b) {
  return a.font_family() == b.font_family() && a.is_bold() == b.is_bold() &&
         a.is_italic() == b.is_italic();
}

}  // namespace

RawFeatures extract_raw(const TextBlock& block, const TextBlock* prev,
                        const TextBlock* next, const TitleVocab& vocab,
                        double neutral_gap) {
  RawFeatures f;
  f.contains_verb = contains_verb_text(block.merged_text) ? 1 : 0;
  f.is_bold = block.is_bold() ? 1 : 0;
  f.is_italic = block.is_italic() ? 1 : 0;
  f.is_all_caps = is_all_caps_text(block.merged_text) ? 1 : 0;
  f.text_length = static_cast<double>(decode_utf8(block.merged_text).size());
  f.begins_with_numbering = begins_with_numbering_text(block.merged_text) ? 1 : 0;
  f.one_hot = vocab.presence(block.merged_text);
  f.indent = block.left();
  f.font_size = block.font_size();

  f.prev_one_hot.assign(kTitleVocabSize, 0.0);
  f.subs_one_hot.assign(kTitleVocabSize, 0.0);

  if (prev) {
    f.style_same_prev = block_style_same(block, *prev);
    f.weight_diff_prev = (block.is_bold() ? 1 : 0) - (prev->is_bold() ? 1 : 0);
    f.size_cmp_prev = compare_with_tolerance(block.font_size(), prev->font_size(),
                                             kSizeTolerance);
    f.size_diff_prev = block.font_size() - prev->font_size();
    f.indent_cmp_prev = compare_with_tolerance(block.left(), prev->left(),
                                               kIndentTolerance);
    f.indent_diff_prev = block.left() - prev->left();
    f.prev_one_hot = vocab.presence(prev->merged_text);
    f.color_same_prev = block.color() == prev->color() ? 1 : 0;
  } else {
    f.dist_prev = neutral_gap;
  }
  if (next) {
    f.style_same_subs = block_style_same(block, *next);
    f.weight_diff_subs = (block.is_bold() ? 1 : 0) - (next->is_bold() ? 1 : 0);
    f.size_cmp_subs = compare_with_tolerance(block.font_size(), next->font_size(),
                                             kSizeTolerance);
    f.size_diff_subs = block.font_size() - next->font_size();
    f.indent_cmp_subs = compare_with_tolerance(block.left(), next->left(),
                                               kIndentTolerance);
    f.indent_diff_subs = block.left() - next->left();
    f.subs_one_hot = vocab.presence(next->merged_text);
    f.color_same_subs = block.color() == next->color() ? 1 : 0;
  } else {
    f.dist_subs = neutral_gap;
  }
  return f;
}

namespace {

DocStats::MeanStd mean_std(const std::vector<double>& values) {
  DocStats::MeanStd ms;
  if (values.empty()) return ms;
  double sum = 0;
  for (double v : values) sum += v;
  ms.mean = sum / static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - ms.mean) * (v - ms.mean);
  ms.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return ms;
}

}  // namespace

DocStats compute_doc_stats(const std::vector<RawFeatures>& raw,
                           double median_line_gap) {
  auto collect = [&](auto field) {
    std::vector<double> values;
    values.reserve(raw.size());
    for (const auto& r : raw) values.push_back(field(r));
    return values;
  };
  DocStats stats;
  stats.median_line_gap = median_line_gap;
  stats.text_length = mean_std(collect([](const RawFeatures& r) { return r.text_length; }));
  stats.indent = mean_std(collect([](const RawFeatures& r) { return r.indent; }));
  stats.font_size = mean_std(collect([](const RawFeatures& r) { return r.font_size; }));
  stats.size_diff_prev = mean_std(collect([](const RawFeatures& r) { return r.size_diff_prev; }));
  stats.indent_diff_prev = mean_std(collect([](const RawFeatures& r) { return r.indent_diff_prev; }));
  stats.dist_prev = mean_std(collect([](const RawFeatures& r) { return r.dist_prev; }));
  stats.size_diff_subs = mean_std(collect([](const RawFeatures& r) { return r.size_diff_subs; }));
  stats.indent_diff_subs = mean_std(collect([](const RawFeatures& r) { return r.indent_diff_subs; }));
  stats.dist_subs = mean_std(collect([](const RawFeatures& r) { return r.dist_subs; }));
  return stats;
}

namespace {

FeatureLayout build_layout() {
  FeatureLayout layout;
  auto add = [&](const std::string& name, int length) {
    layout.slices.push_back({name, layout.total, length});
    layout.total += length;
  };
  add("contains_verb", 1);
  add("is_bold", 1);
  add("is_italic", 1);
  add("is_all_caps", 1);
  add("text_length", 3);
  add("begins_with_numbering", 1);
  add("one_hot", kTitleVocabSize);
  add("indent", 3);
  add("font_size", 3);
  add("style_to_prev", 2);
  add("style_to_subs", 2);
  add("weight_diff_to_prev", 3);
  add("weight_diff_to_subs", 3);
  add("size_to_prev", 3);
  add("size_to_subs", 3);
  add("size_diff_to_prev", 3);
  add("size_diff_to_subs", 3);
  add("indent_to_prev", 3);
  add("indent_to_subs", 3);
  add("indent_diff_to_prev", 3);
  add("indent_diff_to_subs", 3);
  add("dist_to_prev_line", 3);
  add("dist_to_subs_line", 3);
  add("prev_tb_one_hot", kTitleVocabSize);
  add("subs_tb_one_hot", kTitleVocabSize);
  add("color_diff_to_prev", 1);
  add("color_diff_to_subs", 1);
  return layout;
}

void put_fuzzy(std::vector<double>& out, int offset, double value,
               const DocStats::MeanStd& ms) {
  out[offset + static_cast<int>(fuzzify(value, ms.mean, ms.stddev))] = 1.0;
}

void put_cmp(std::vector<double>& out, int offset, Cmp3 cmp) {
  out[offset + static_cast<int>(cmp)] = 1.0;
}

}  // namespace

const FeatureLayout& feature_layout() {
  static const FeatureLayout layout = build_layout();
  return layout;
}

const FeatureLayout::Slice& FeatureLayout::at(const std::string& name) const {
  for (const auto& slice : slices) {
    if (slice.name == name) return slice;
  }
  throw DataError("feature layout: unknown feature '" + name + "'");
}

FeatureVector encode(const RawFeatures& raw, const DocStats& stats) {
  const FeatureLayout& layout = feature_layout();
  FeatureVector fv;
  fv.values.assign(layout.total, 0.0);
  auto off = [&](const char* name) { return layout.at(name).offset; };

  fv.values[off("contains_verb")] = raw.contains_verb;
  fv.values[off("is_bold")] = raw.is_bold;
  fv.values[off("is_italic")] = raw.is_italic;
  fv.values[off("is_all_caps")] = raw.is_all_caps;
  put_fuzzy(fv.values, off("text_length"), raw.text_length, stats.text_length);
  fv.values[off("begins_with_numbering")] = raw.begins_with_numbering;
  std::copy(raw.one_hot.begin(), raw.one_hot.end(), fv.values.begin() + off("one_hot"));
  put_fuzzy(fv.values, off("indent"), raw.indent, stats.indent);
  put_fuzzy(fv.values, off("font_size"), raw.font_size, stats.font_size);

  fv.values[off("style_to_prev") + (raw.style_same_prev ? 0 : 1)] = 1.0;
  fv.values[off("style_to_subs") + (raw.style_same_subs ? 0 : 1)] = 1.0;
  fv.values[off("weight_diff_to_prev") + raw.weight_diff_prev + 1] = 1.0;
  fv.values[off("weight_diff_to_subs") + raw.weight_diff_subs + 1] = 1.0;
  put_cmp(fv.values, off("size_to_prev"), raw.size_cmp_prev);
  put_cmp(fv.values, off("size_to_subs"), raw.size_cmp_subs);
  put_fuzzy(fv.values, off("size_diff_to_prev"), raw.size_diff_prev, stats.size_diff_prev);
  put_fuzzy(fv.values, off("size_diff_to_subs"), raw.size_diff_subs, stats.size_diff_subs);
  put_cmp(fv.values, off("indent_to_prev"), raw.indent_cmp_prev);
  put_cmp(fv.values, off("indent_to_subs"), raw.indent_cmp_subs);
  put_fuzzy(fv.values, off("indent_diff_to_prev"), raw.indent_diff_prev,
            stats.indent_diff_prev);
  put_fuzzy(fv.values, off("indent_diff_to_subs"), raw.indent_diff_subs,
            stats.indent_diff_subs);
  put_fuzzy(fv.values, off("dist_to_prev_line"), raw.dist_prev, stats.dist_prev);
  put_fuzzy(fv.values, off("dist_to_subs_line"), raw.dist_subs, stats.dist_subs);
  std::copy(raw.prev_one_hot.begin(), raw.prev_one_hot.end(),
            fv.values.begin() + off("prev_tb_one_hot"));
  std::copy(raw.subs_one_hot.begin(), raw.subs_one_hot.end(),
            fv.values.begin() + off("subs_tb_one_hot"));
  fv.values[off("color_diff_to_prev")] = raw.color_same_prev;
  fv.values[off("color_diff_to_subs")] = raw.color_same_subs;
  return fv;
}

std::vector<RawFeatures> extract_document_raw(const Document& segmented,
                                              const TitleVocab& vocab,
                                              DocStats* stats_out) {
  const auto& blocks = segmented.blocks;
  std::vector<double> gaps;
  for (size_t i = 1; i < blocks.size(); ++i) {
    gaps.push_back(block_distance(blocks[i - 1], blocks[i], segmented));
  }
  double median_gap = 0;
  if (!gaps.empty()) {
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    median_gap = sorted[sorted.size() / 2];
  }

  std::vector<RawFeatures> raw;
  raw.reserve(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) {
    const TextBlock* prev = i > 0 ? &blocks[i - 1] : nullptr;
    const TextBlock* next = i + 1 < blocks.size() ? &blocks[i + 1] : nullptr;
    RawFeatures f = extract_raw(blocks[i], prev, next, vocab, median_gap);
    if (prev) f.dist_prev = gaps[i - 1];
    if (next) f.dist_subs = gaps[i];
    raw.push_back(std::move(f));
  }
  if (stats_out) *stats_out = compute_doc_stats(raw, median_gap);
  return raw;
}

std::vector<FeatureVector> featurize_document(const Document& segmented,
                                              const TitleVocab& vocab) {
  DocStats stats;
  std::vector<RawFeatures> raw = extract_document_raw(segmented, vocab, &stats);
  std::vector<FeatureVector> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(encode(r, stats));
  return out;
}

}  // namespace tocgen
