#pragma once

#include <string>
#include <vector>

#include "tocgen/doc.hpp"

namespace tocgen {

struct TitleRef {
  std::string title;
  int page = 1;        // page of the title block
  int block_index = -1;
};

/// Detected titles in reading order with their predicted levels.
struct LabeledSequence {
  std::vector<TitleRef> titles;
  std::vector<int> levels;  // predicted h-hat per title
};

/// Forest over the detected titles under an implicit level-0 virtual root.
/// Node order equals input sequence order; parents precede children.
struct TocForest {
  struct Node {
    int parent = -1;  // index into nodes, -1 = virtual root
    int depth = 1;    // 1..kMaxTocDepth
  };
  std::vector<Node> nodes;
  std::vector<TitleRef> titles;  // parallel to nodes
};

/// Deterministic sequence-to-tree mapping: the first title becomes a top
/// title, every later title attaches to the closest previous title with a
/// strictly lower predicted level (else the virtual root), and depths beyond
/// the cap promote the node to its grandparent.
TocForest reorganize(const LabeledSequence& seq);

/// Fills page ranges: an entry starts on its title's page and ends on the
/// page where the next same-or-shallower entry starts (inclusive), or the
/// last document page.
TocTree assign_pages(const TocForest& forest, const Document& doc);

}  // namespace tocgen
