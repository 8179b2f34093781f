#include "tocgen/tree_builder.hpp"

#include "tocgen/errors.hpp"

namespace tocgen {

TocForest reorganize(const LabeledSequence& seq) {
  if (seq.titles.size() != seq.levels.size()) {
    throw DataError("reorganize: titles/levels length mismatch");
  }
  int n = static_cast<int>(seq.titles.size());
  TocForest forest;
  forest.titles = seq.titles;
  forest.nodes.resize(static_cast<size_t>(n));
  if (n == 0) return forest;

  // effective levels: the first title is always a top title
  std::vector<int> effective(seq.levels);
  effective[0] = 1;

  for (int i = 0; i < n; ++i) {
    int parent = -1;
    for (int j = i - 1; j >= 0; --j) {
      if (effective[static_cast<size_t>(j)] < effective[static_cast<size_t>(i)]) {
        parent = j;
        break;
      }
    }
    // depth cap: promote over-deep nodes to their grandparent
    while (parent != -1 &&
           forest.nodes[static_cast<size_t>(parent)].depth + 1 > kMaxTocDepth) {
      parent = forest.nodes[static_cast<size_t>(parent)].parent;
    }
    int depth = parent == -1 ? 1 : forest.nodes[static_cast<size_t>(parent)].depth + 1;
    forest.nodes[static_cast<size_t>(i)] = {parent, depth};
  }
  return forest;
}

TocTree assign_pages(const TocForest& forest, const Document& doc) {
  int n = static_cast<int>(forest.nodes.size());
  std::vector<int> end_page(static_cast<size_t>(n), doc.page_count);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (forest.nodes[static_cast<size_t>(j)].depth <=
          forest.nodes[static_cast<size_t>(i)].depth) {
        end_page[static_cast<size_t>(i)] = forest.titles[static_cast<size_t>(j)].page;
        break;
      }
    }
  }

  std::vector<TocEntry> entries(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    entries[static_cast<size_t>(i)].title = forest.titles[static_cast<size_t>(i)].title;
    entries[static_cast<size_t>(i)].start_page = forest.titles[static_cast<size_t>(i)].page;
    entries[static_cast<size_t>(i)].end_page = end_page[static_cast<size_t>(i)];
    entries[static_cast<size_t>(i)].level = forest.nodes[static_cast<size_t>(i)].depth;
  }
  // attach children to parents back-to-front so each node's child list is
  // complete before it moves into its own parent
  TocTree roots;
  for (int i = n - 1; i >= 0; --i) {
    int parent = forest.nodes[static_cast<size_t>(i)].parent;
    if (parent == -1) {
      roots.insert(roots.begin(), std::move(entries[static_cast<size_t>(i)]));
    } else {
      auto& siblings = entries[static_cast<size_t>(parent)].children;
      siblings.insert(siblings.begin(), std::move(entries[static_cast<size_t>(i)]));
    }
  }
  return roots;
}

}  // namespace tocgen
