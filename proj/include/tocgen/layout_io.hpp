#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tocgen/doc.hpp"

namespace tocgen {

/// Reads a layout-annotated file (.xml converter output or the equivalent
/// .json form). Lines come back in reading order, blocks empty.
Document ingest_layout_file(const std::filesystem::path& path);

Document parse_layout_xml(std::string_view content, std::string doc_id);
Document parse_layout_json(std::string_view content, std::string doc_id);

std::string serialize_layout_xml(const Document& doc);
std::string serialize_layout_json(const Document& doc);

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace tocgen
