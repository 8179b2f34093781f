#pragma once

#include "tocgen/doc.hpp"

namespace tocgen {

struct SegmenterConfig {
  double header_frac = 0.08;        // in [0, 0.3)
  double footer_frac = 0.08;        // in [0, 0.3)
  double side_frac = 0.05;          // in [0, 0.3)
  double max_line_gap_factor = 1.5; // multiple of font size
  bool require_same_style = true;
  // Lines whose normalized text repeats on >= this fraction of pages (and on
  // at least two pages) are treated as running headers/footers.
  double repeat_page_frac = 0.6;
  // Blocks never cross page boundaries unless this is set and the styles of
  // the last line of a page and the first line of the next match.
  bool allow_cross_page = false;

  void validate() const;  // throws DataError on out-of-range fractions
};

/// Drops header/footer/side-margin lines and repeated running headers.
Document strip_margins(const Document& doc, const SegmenterConfig& cfg);

/// Groups consecutive similar-looking lines into TextBlocks. Expects a
/// margin-stripped document; every surviving line lands in exactly one block.
Document group_blocks(const Document& doc, const SegmenterConfig& cfg);

/// strip_margins followed by group_blocks.
Document segment(const Document& doc, const SegmenterConfig& cfg);

}  // namespace tocgen
