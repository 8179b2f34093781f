#pragma once

#include <array>
#include <string>
#include <vector>

namespace tocgen {

using Rgb = std::array<int, 3>;

/// One positioned text fragment as produced by a layout converter.
struct TextLine {
  std::string text;
  int page = 1;  // 1-based
  double left = 0.0, top = 0.0, width = 0.0, height = 0.0;  // page pixels
  double font_size = 10.0;  // points
  bool bold = false;
  bool italic = false;
  Rgb color{0, 0, 0};
  std::string font_family = "Times";

  double bottom() const { return top + height; }
  double v_center() const { return top + height / 2.0; }
  double h_center() const { return left + width / 2.0; }

  bool operator==(const TextLine&) const = default;
};

/// A maximal run of consecutive similar-looking lines; the classification unit.
struct TextBlock {
  std::vector<TextLine> lines;
  int block_index = 0;
  std::string merged_text;  // line texts joined by single spaces

  static TextBlock from_lines(std::vector<TextLine> lines, int index);

  int page() const { return lines.front().page; }
  double left() const { return lines.front().left; }
  double top() const { return lines.front().top; }
  double bottom() const { return lines.back().bottom(); }
  double font_size() const { return lines.front().font_size; }
  const Rgb& color() const { return lines.front().color; }
  const std::string& font_family() const { return lines.front().font_family; }
  bool is_bold() const;    // true iff every line is bold
  bool is_italic() const;  // true iff every line is italic

  bool operator==(const TextBlock&) const = default;
};

struct PageDims {
  double width = 0.0, height = 0.0;
  bool operator==(const PageDims&) const = default;
};

struct Document {
  std::string doc_id;
  int page_count = 0;
  std::vector<PageDims> pages;    // one entry per page, index = page - 1
  std::vector<TextLine> lines;    // reading order
  std::vector<TextBlock> blocks;  // empty until segmentation

  const PageDims& page_dims(int page) const { return pages.at(page - 1); }

  bool operator==(const Document&) const = default;
};

struct TocEntry {
  std::string title;
  int start_page = 1;
  int end_page = 1;
  int level = 1;  // depth in tree, 1 = top
  std::vector<TocEntry> children;

  bool operator==(const TocEntry&) const = default;
};

/// A TOC is an ordered forest of entries under an implicit virtual root.
using TocTree = std::vector<TocEntry>;

inline constexpr int kMaxTocDepth = 5;

/// Sorts lines into reading order: (page, top, left) with a 2px tolerance
/// band on top so same-baseline fragments stay ordered left-to-right.
void sort_reading_order(std::vector<TextLine>& lines);

/// Throws DataError naming the first violated TocEntry invariant.
void validate_toc(const TocTree& toc);

int toc_entry_count(const TocTree& toc);
int toc_max_depth(const TocTree& toc);

}  // namespace tocgen
