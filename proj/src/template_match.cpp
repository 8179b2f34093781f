#include "tocgen/template_match.hpp"

#include <algorithm>

#include "tocgen/errors.hpp"
#include "tocgen/text_norm.hpp"
#include "tocgen/toc_io.hpp"

namespace tocgen {

namespace {

void flatten_entry(const TocEntry& entry, std::vector<TemplateEntry>& out) {
  if (entry.title.empty()) throw DataError("template: empty title");
  out.push_back({entry.title, normalize_title(entry.title), entry.level});
  for (const auto& child : entry.children) flatten_entry(child, out);
}

}  // namespace

TemplateToc TemplateToc::from_toc(const TocTree& toc) {
  TemplateToc tmpl;
  for (const auto& root : toc) flatten_entry(root, tmpl.entries);
  return tmpl;
}

TemplateToc TemplateToc::load(const std::filesystem::path& path) {
  return from_toc(load_toc_file(path));
}

int levenshtein(const std::string& a, const std::string& b) {
  std::u32string s = decode_utf8(a), t = decode_utf8(b);
  size_t n = s.size(), m = t.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    prev.swap(cur);
  }
  return prev[m];
}

MatchResult match_title(const std::string& title, const TemplateToc& tmpl,
                        double threshold_ratio) {
  if (tmpl.empty()) throw DataError("template matching: empty template");
  std::string norm = normalize_title(title);
  size_t norm_len = decode_utf8(norm).size();

  MatchResult best;
  bool first = true;
  for (size_t i = 0; i < tmpl.entries.size(); ++i) {
    const TemplateEntry& entry = tmpl.entries[i];
    int dist = levenshtein(norm, entry.normalized);
    bool better = first || dist < best.distance ||
                  (dist == best.distance && best.entry_index >= 0 &&
                   entry.level < tmpl.entries[static_cast<size_t>(best.entry_index)].level);
    if (better) {
      first = false;
      best.distance = dist;
      best.entry_index = static_cast<int>(i);
    }
  }
  const TemplateEntry& entry = tmpl.entries[static_cast<size_t>(best.entry_index)];
  size_t entry_len = decode_utf8(entry.normalized).size();
  double limit = threshold_ratio * static_cast<double>(std::max(norm_len, entry_len));
  if (static_cast<double>(best.distance) <= limit) {
    best.level = entry.level;
  } else {
    best.level = kNoMatchLevel;
  }
  return best;
}

TemplateFeature template_feature(const MatchResult& result) {
  TemplateFeature f{};
  if (result.matched()) {
    f[static_cast<size_t>(result.level - 1)] = 1.0;
  } else {
    f[kMaxTocDepth] = 1.0;  // NO_MATCH slot
  }
  return f;
}

LabeledSequence template_only_hierarchize(const std::vector<TitleRef>& titles,
                                          const TemplateToc& tmpl,
                                          double threshold_ratio) {
  LabeledSequence seq;
  seq.titles = titles;
  seq.levels.reserve(titles.size());
  for (const auto& title : titles) {
    seq.levels.push_back(match_title(title.title, tmpl, threshold_ratio).level);
  }
  return seq;
}

}  // namespace tocgen
