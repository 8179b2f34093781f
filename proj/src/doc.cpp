#include "tocgen/doc.hpp"

#include <algorithm>

#include "tocgen/errors.hpp"

namespace tocgen {

namespace {
constexpr double kBaselineTolerance = 2.0;  // px band on `top`
}

TextBlock TextBlock::from_lines(std::vector<TextLine> lines, int index) {
  TextBlock block;
  block.lines = std::move(lines);
  block.block_index = index;
  std::string merged;
  for (const auto& line : block.lines) {
    if (!merged.empty()) merged += ' ';
    merged += line.text;
  }
  block.merged_text = std::move(merged);
  return block;
}

bool TextBlock::is_bold() const {
  return std::all_of(lines.begin(), lines.end(),
                     [](const TextLine& l) { return l.bold; });
}

bool TextBlock::is_italic() const {
  return std::all_of(lines.begin(), lines.end(),
                     [](const TextLine& l) { return l.italic; });
}

void sort_reading_order(std::vector<TextLine>& lines) {
  std::sort(lines.begin(), lines.end(), [](const TextLine& a, const TextLine& b) {
    if (a.page != b.page) return a.page < b.page;
    if (a.top != b.top) return a.top < b.top;
    return a.left < b.left;
  });
  // Band pass: lines whose top lies within the tolerance of the band anchor
  // share a baseline and are reordered left-to-right.
  std::vector<long> band(lines.size(), 0);
  long current = 0;
  double band_top = lines.empty() ? 0.0 : lines.front().top;
  int band_page = lines.empty() ? 0 : lines.front().page;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].page != band_page || lines[i].top > band_top + kBaselineTolerance) {
      ++current;
      band_top = lines[i].top;
      band_page = lines[i].page;
    }
    band[i] = current;
  }
  std::vector<size_t> order(lines.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (band[a] != band[b]) return band[a] < band[b];
    if (lines[a].left != lines[b].left) return lines[a].left < lines[b].left;
    return lines[a].top < lines[b].top;
  });
  std::vector<TextLine> sorted;
  sorted.reserve(lines.size());
  for (size_t idx : order) sorted.push_back(std::move(lines[idx]));
  lines = std::move(sorted);
}

namespace {

void validate_entry(const TocEntry& entry, int expected_level) {
  if (entry.level != expected_level) {
    throw DataError("toc entry '" + entry.title + "': level " +
                    std::to_string(entry.level) + ", expected " +
                    std::to_string(expected_level));
  }
  if (entry.level > kMaxTocDepth) {
    throw DataError("toc entry '" + entry.title + "': depth exceeds " +
                    std::to_string(kMaxTocDepth));
  }
  if (entry.start_page < 1) {
    throw DataError("toc entry '" + entry.title + "': start_page < 1");
  }
  if (entry.start_page > entry.end_page) {
    throw DataError("toc entry '" + entry.title + "': start_page > end_page");
  }
  for (const auto& child : entry.children) {
    if (child.start_page < entry.start_page || child.end_page > entry.end_page) {
      throw DataError("toc entry '" + child.title +
                      "': page range outside parent '" + entry.title + "'");
    }
    validate_entry(child, expected_level + 1);
  }
}

}  // namespace

void validate_toc(const TocTree& toc) {
  for (const auto& root : toc) validate_entry(root, 1);
}

int toc_entry_count(const TocTree& toc) {
  int n = 0;
  for (const auto& entry : toc) n += 1 + toc_entry_count(entry.children);
  return n;
}

int toc_max_depth(const TocTree& toc) {
  int depth = 0;
  for (const auto& entry : toc) {
    depth = std::max(depth, 1 + toc_max_depth(entry.children));
  }
  return depth;
}

}  // namespace tocgen
