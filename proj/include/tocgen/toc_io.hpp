#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tocgen/doc.hpp"

namespace tocgen {

/// Hierarchical JSON: array of {title, start_page, end_page, children}.
/// Levels are implied by nesting depth.
std::string serialize_toc(const TocTree& toc);

/// Inverse of serialize_toc. Fills levels from depth and validates the
/// TocEntry invariants (throws ParseError on bad JSON, DataError otherwise).
TocTree parse_toc(std::string_view json);

TocTree load_toc_file(const std::filesystem::path& path);
void save_toc_file(const std::filesystem::path& path, const TocTree& toc);

}  // namespace tocgen
