#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tocgen/doc.hpp"
#include "tocgen/hierarchizer.hpp"
#include "tocgen/tree_builder.hpp"

namespace tocgen {

inline constexpr int kNoMatchLevel = -1;

struct TemplateEntry {
  std::string title;
  std::string normalized;  // normalize_title form used for matching
  int level = 1;
};

/// Flat view of a reference TOC tree.
struct TemplateToc {
  std::vector<TemplateEntry> entries;

  static TemplateToc from_toc(const TocTree& toc);
  static TemplateToc load(const std::filesystem::path& path);

  bool empty() const { return entries.empty(); }
};

/// Unit-cost edit distance over codepoints.
int levenshtein(const std::string& a, const std::string& b);

struct MatchResult {
  int level = kNoMatchLevel;  // 1..5 or kNoMatchLevel
  int distance = 0;           // best distance found, even on NO_MATCH
  int entry_index = -1;

  bool matched() const { return level != kNoMatchLevel; }
};

/// Nearest template entry after normalization; a match requires distance <=
/// threshold_ratio * max(len). Ties go to the lowest level, then template
/// order.
MatchResult match_title(const std::string& title, const TemplateToc& tmpl,
                        double threshold_ratio = 0.3);

/// One-hot over {level 1..5, NO_MATCH, TEMPLATE_DISABLED}.
TemplateFeature template_feature(const MatchResult& result);

/// Rule-based hierarchizer: every title takes its matched template level;
/// unmatched titles keep the NO_MATCH sentinel level.
LabeledSequence template_only_hierarchize(const std::vector<TitleRef>& titles,
                                          const TemplateToc& tmpl,
                                          double threshold_ratio = 0.3);

}  // namespace tocgen
