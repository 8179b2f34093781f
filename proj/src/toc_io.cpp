#include "tocgen/toc_io.hpp"

#include <json.hpp>

#include "tocgen/errors.hpp"
#include "tocgen/layout_io.hpp"

namespace tocgen {

namespace {

using nlohmann::ordered_json;

ordered_json entry_to_json(const TocEntry& entry) {
  ordered_json j;
  j["title"] = entry.title;
  j["start_page"] = entry.start_page;
  j["end_page"] = entry.end_page;
  j["children"] = ordered_json::array();
  for (const auto& child : entry.children) {
    j["children"].push_back(entry_to_json(child));
  }
  return j;
}

TocEntry entry_from_json(const ordered_json& j, int level) {
  TocEntry entry;
  entry.title = j.at("title").get<std::string>();
  entry.start_page = j.at("start_page").get<int>();
  entry.end_page = j.at("end_page").get<int>();
  entry.level = level;
  if (auto it = j.find("children"); it != j.end()) {
    for (const auto& jc : *it) {
      entry.children.push_back(entry_from_json(jc, level + 1));
    }
  }
  return entry;
}

}  // namespace

std::string serialize_toc(const TocTree& toc) {
  ordered_json j = ordered_json::array();
  for (const auto& root : toc) j.push_back(entry_to_json(root));
  return j.dump(2) + "\n";
}

TocTree parse_toc(std::string_view json) {
  ordered_json j;
  try {
    j = ordered_json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("toc json: ") + e.what());
  }
  TocTree toc;
  try {
    if (!j.is_array()) throw ParseError("toc json: top level must be an array");
    for (const auto& jr : j) toc.push_back(entry_from_json(jr, 1));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("toc json: ") + e.what());
  }
  validate_toc(toc);
  return toc;
}

TocTree load_toc_file(const std::filesystem::path& path) {
  return parse_toc(read_file(path));
}

void save_toc_file(const std::filesystem::path& path, const TocTree& toc) {
  write_file(path, serialize_toc(toc));
}

}  // namespace tocgen
