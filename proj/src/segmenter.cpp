#include "tocgen/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tocgen/errors.hpp"
#include "tocgen/text_norm.hpp"

namespace tocgen {

namespace {

constexpr double kSizeTolerance = 0.5;  // pt

void check_frac(double value, const char* name) {
  if (value < 0.0 || value >= 0.3) {
    throw DataError(std::string("segmenter config: ") + name +
                    " must lie in [0, 0.3), got " + std::to_string(value));
  }
}

bool same_style(const TextLine& a, const TextLine& b) {
  return a.bold == b.bold && a.italic == b.italic;
}

}  // namespace

void SegmenterConfig::validate() const {
  check_frac(header_frac, "header_frac");
  check_frac(footer_frac, "footer_frac");
  check_frac(side_frac, "side_frac");
  if (max_line_gap_factor <= 0.0) {
    throw DataError("segmenter config: max_line_gap_factor must be positive");
  }
}

Document strip_margins(const Document& doc, const SegmenterConfig& cfg) {
  cfg.validate();
  // Normalized texts that repeat across enough pages are running headers.
  std::unordered_map<std::string, std::set<int>> pages_with_text;
  for (const auto& line : doc.lines) {
    pages_with_text[normalize_title(line.text)].insert(line.page);
  }
  auto is_running_header = [&](const TextLine& line) {
    const auto& pages = pages_with_text[normalize_title(line.text)];
    return pages.size() >= 2 &&
           static_cast<double>(pages.size()) >=
               cfg.repeat_page_frac * doc.page_count;
  };

  Document out;
  out.doc_id = doc.doc_id;
  out.page_count = doc.page_count;
  out.pages = doc.pages;
  for (const auto& line : doc.lines) {
    const PageDims& dims = doc.page_dims(line.page);
    if (line.v_center() < cfg.header_frac * dims.height) continue;
    if (line.v_center() > (1.0 - cfg.footer_frac) * dims.height) continue;
    if (line.h_center() < cfg.side_frac * dims.width) continue;
    if (line.h_center() > (1.0 - cfg.side_frac) * dims.width) continue;
    if (is_running_header(line)) continue;
    out.lines.push_back(line);
  }
  return out;
}

Document group_blocks(const Document& doc, const SegmenterConfig& cfg) {
  cfg.validate();
  Document out = doc;
  out.blocks.clear();

  std::vector<TextLine> current;
  auto flush = [&] {
    if (current.empty()) return;
    out.blocks.push_back(TextBlock::from_lines(std::move(current),
                                               static_cast<int>(out.blocks.size())));
    current.clear();
  };

  auto page_last_line_top = [&](int page) {
    double last = -1.0;
    for (const auto& line : doc.lines) {
      if (line.page == page) last = std::max(last, line.top);
    }
    return last;
  };

  for (const auto& line : doc.lines) {
    if (current.empty()) {
      current.push_back(line);
      continue;
    }
    const TextLine& prev = current.back();
    bool merge = true;
    if (line.page != prev.page) {
      merge = cfg.allow_cross_page && line.page == prev.page + 1 &&
              prev.top == page_last_line_top(prev.page) &&
              std::abs(line.font_size - prev.font_size) <= kSizeTolerance &&
              same_style(prev, line);
    } else {
      double gap = line.top - prev.bottom();
      if (std::abs(line.font_size - prev.font_size) > kSizeTolerance) merge = false;
      if (cfg.require_same_style && !same_style(prev, line)) merge = false;
      if (gap > cfg.max_line_gap_factor * prev.font_size) merge = false;
    }
    if (!merge) flush();
    current.push_back(line);
  }
  flush();
  return out;
}

Document segment(const Document& doc, const SegmenterConfig& cfg) {
  return group_blocks(strip_margins(doc, cfg), cfg);
}

}  // namespace tocgen
