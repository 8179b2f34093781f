#include "tocgen/layout_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tocgen/errors.hpp"
#include "tocgen/text_norm.hpp"

namespace tocgen {

namespace {

// ---------------------------------------------------------------------------
// Minimal XML reader for the fixed layout schema. Handles declarations,
// comments, attributes, character entities and nested <b>/<i> markup.
// ---------------------------------------------------------------------------

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;
  std::string text;  // direct text content, entity-decoded
  int line = 0;

  const std::string* find_attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

class XmlParser {
 public:
  explicit XmlParser(std::string_view src) : src_(src) {}

  XmlNode parse_document() {
    skip_misc();
    XmlNode root = parse_element();
    skip_misc();
    if (pos_ < src_.size()) fail("trailing content after root element");
    return root;
  }

 private:
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("xml parse error at line " + std::to_string(line_) + ": " + msg);
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  char get() {
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool starts_with(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    for (size_t i = 0; i < s.size(); ++i) get();
  }

  void skip_ws() {
    while (pos_ < src_.size() && (peek() == ' ' || peek() == '\t' ||
                                  peek() == '\n' || peek() == '\r')) {
      get();
    }
  }

  void skip_misc() {
    while (true) {
      skip_ws();
      if (starts_with("<?")) {
        while (!starts_with("?>")) get();
        expect("?>");
      } else if (starts_with("<!--")) {
        while (!starts_with("-->")) get();
        expect("-->");
      } else {
        break;
      }
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == ':' || c == '.';
  }

  std::string parse_name() {
    std::string name;
    while (pos_ < src_.size() && name_char(peek())) name.push_back(get());
    if (name.empty()) fail("expected a name");
    return name;
  }

  std::string decode_entities(std::string_view raw) const {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) {
        throw ParseError("xml parse error at line " + std::to_string(line_) +
                         ": unterminated entity");
      }
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out.push_back('&');
      else if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "quot") out.push_back('"');
      else if (ent == "apos") out.push_back('\'');
      else if (!ent.empty() && ent[0] == '#') {
        char32_t cp = 0;
        if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
          for (size_t k = 2; k < ent.size(); ++k)
            cp = cp * 16 + (std::isdigit(static_cast<unsigned char>(ent[k]))
                                ? ent[k] - '0'
                                : (std::tolower(static_cast<unsigned char>(ent[k])) - 'a' + 10));
        } else {
          for (size_t k = 1; k < ent.size(); ++k) cp = cp * 10 + (ent[k] - '0');
        }
        out += encode_utf8(std::u32string(1, cp));
      } else {
        throw ParseError("xml parse error at line " + std::to_string(line_) +
                         ": unknown entity &" + std::string(ent) + ";");
      }
      i = semi;
    }
    return out;
  }

  XmlNode parse_element() {
    expect("<");
    XmlNode node;
    node.line = line_;
    node.name = parse_name();
    // attributes
    while (true) {
      skip_ws();
      if (starts_with("/>")) {
        expect("/>");
        return node;
      }
      if (peek() == '>') {
        get();
        break;
      }
      std::string key = parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      char quote = get();
      if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
      std::string raw;
      while (peek() != quote) raw.push_back(get());
      get();  // closing quote
      node.attrs.emplace_back(key, decode_entities(raw));
    }
    // content
    std::string raw_text;
    while (true) {
      if (starts_with("</")) {
        node.text += decode_entities(raw_text);
        raw_text.clear();
        expect("</");
        std::string closing = parse_name();
        if (closing != node.name) {
          fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
        }
        skip_ws();
        expect(">");
        return node;
      }
      if (starts_with("<!--")) {
        while (!starts_with("-->")) get();
        expect("-->");
        continue;
      }
      if (peek() == '<') {
        node.text += decode_entities(raw_text);
        raw_text.clear();
        node.children.push_back(parse_element());
        continue;
      }
      raw_text.push_back(get());
    }
  }
};

std::string collect_text(const XmlNode& node) {
  std::string out = node.text;
  for (const auto& child : node.children) out += collect_text(child);
  return out;
}

bool has_descendant(const XmlNode& node, std::string_view name) {
  for (const auto& child : node.children) {
    if (child.name == name || has_descendant(child, name)) return true;
  }
  return false;
}

const std::string& require_attr(const XmlNode& node, std::string_view key) {
  const std::string* value = node.find_attr(key);
  if (!value) {
    throw ParseError("<" + node.name + "> element at line " +
                     std::to_string(node.line) + " missing attribute '" +
                     std::string(key) + "'");
  }
  return *value;
}

double parse_double(const XmlNode& node, std::string_view key) {
  const std::string& raw = require_attr(node, key);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw ParseError("<" + node.name + "> at line " + std::to_string(node.line) +
                     ": attribute '" + std::string(key) + "' is not a number: '" +
                     raw + "'");
  }
  return value;
}

int parse_int(const XmlNode& node, std::string_view key) {
  const std::string& raw = require_attr(node, key);
  int value = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw ParseError("<" + node.name + "> at line " + std::to_string(node.line) +
                     ": attribute '" + std::string(key) + "' is not an integer: '" +
                     raw + "'");
  }
  return value;
}

Rgb parse_color(const std::string& raw, int line) {
  if (raw.size() != 7 || raw[0] != '#') {
    throw ParseError("bad color '" + raw + "' at line " + std::to_string(line) +
                     " (expected #rrggbb)");
  }
  auto hex = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParseError("bad color '" + raw + "' at line " + std::to_string(line));
  };
  return Rgb{hex(raw[1]) * 16 + hex(raw[2]), hex(raw[3]) * 16 + hex(raw[4]),
             hex(raw[5]) * 16 + hex(raw[6])};
}

struct FontSpec {
  double size = 10.0;
  std::string family = "Times";
  Rgb color{0, 0, 0};
};

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fmt_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

Document parse_layout_xml(std::string_view content, std::string doc_id) {
  XmlNode root = XmlParser(content).parse_document();
  Document doc;
  doc.doc_id = root.find_attr("id") ? *root.find_attr("id") : std::move(doc_id);

  std::map<std::string, FontSpec> fonts;  // ids are global to the document
  for (const auto& page_node : root.children) {
    if (page_node.name != "page") continue;
    int number = parse_int(page_node, "number");
    PageDims dims{parse_double(page_node, "width"), parse_double(page_node, "height")};
    if (dims.width <= 0 || dims.height <= 0) {
      throw ParseError("<page> at line " + std::to_string(page_node.line) +
                       ": non-positive dimensions");
    }
    if (number != static_cast<int>(doc.pages.size()) + 1) {
      throw ParseError("<page> at line " + std::to_string(page_node.line) +
                       ": page number " + std::to_string(number) +
                       " out of sequence");
    }
    doc.pages.push_back(dims);

    for (const auto& node : page_node.children) {
      if (node.name == "fontspec") {
        FontSpec spec;
        spec.size = parse_double(node, "size");
        if (spec.size <= 0) {
          throw ParseError("<fontspec> at line " + std::to_string(node.line) +
                           ": non-positive size");
        }
        spec.family = require_attr(node, "family");
        spec.color = parse_color(require_attr(node, "color"), node.line);
        fonts[require_attr(node, "id")] = spec;
      } else if (node.name == "text") {
        TextLine line;
        line.page = number;
        line.top = parse_double(node, "top");
        line.left = parse_double(node, "left");
        line.width = parse_double(node, "width");
        line.height = parse_double(node, "height");
        const std::string& font_id = require_attr(node, "font");
        auto it = fonts.find(font_id);
        if (it == fonts.end()) {
          throw ParseError("<text> at line " + std::to_string(node.line) +
                           ": unknown font id '" + font_id + "'");
        }
        line.font_size = it->second.size;
        line.font_family = it->second.family;
        line.color = it->second.color;
        line.bold = has_descendant(node, "b");
        line.italic = has_descendant(node, "i");
        line.text = collect_text(node);
        if (line.text.empty()) continue;  // converter artifact, carries no content
        doc.lines.push_back(std::move(line));
      }
    }
  }
  doc.page_count = static_cast<int>(doc.pages.size());
  if (doc.page_count == 0) {
    throw DataError("empty document: no pages in '" + doc.doc_id + "'");
  }
  sort_reading_order(doc.lines);
  return doc;
}

std::string serialize_layout_xml(const Document& doc) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<document id=\"" << escape_xml(doc.doc_id) << "\">\n";
  int next_font_id = 0;
  std::map<std::string, int> font_ids;  // key -> id, ids global
  for (int page = 1; page <= doc.page_count; ++page) {
    const PageDims& dims = doc.page_dims(page);
    out << "  <page number=\"" << page << "\" width=\"" << fmt_double(dims.width)
        << "\" height=\"" << fmt_double(dims.height) << "\">\n";
    // fontspec table: first-appearance order within this page
    for (const auto& line : doc.lines) {
      if (line.page != page) continue;
      std::string key = fmt_double(line.font_size) + "|" + line.font_family +
                        "|" + fmt_color(line.color);
      if (font_ids.contains(key)) continue;
      font_ids[key] = next_font_id;
      out << "    <fontspec id=\"" << next_font_id << "\" size=\""
          << fmt_double(line.font_size) << "\" family=\""
          << escape_xml(line.font_family) << "\" color=\"" << fmt_color(line.color)
          << "\"/>\n";
      ++next_font_id;
    }
    for (const auto& line : doc.lines) {
      if (line.page != page) continue;
      std::string key = fmt_double(line.font_size) + "|" + line.font_family +
                        "|" + fmt_color(line.color);
      out << "    <text top=\"" << fmt_double(line.top) << "\" left=\""
          << fmt_double(line.left) << "\" width=\"" << fmt_double(line.width)
          << "\" height=\"" << fmt_double(line.height) << "\" font=\""
          << font_ids[key] << "\">";
      std::string body = escape_xml(line.text);
      if (line.italic) body = "<i>" + body + "</i>";
      if (line.bold) body = "<b>" + body + "</b>";
      out << body << "</text>\n";
    }
    out << "  </page>\n";
  }
  out << "</document>\n";
  return out.str();
}

namespace {

using nlohmann::ordered_json;

}  // namespace

Document parse_layout_json(std::string_view content, std::string doc_id) {
  ordered_json j;
  try {
    j = ordered_json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("layout json: ") + e.what());
  }
  try {
    Document doc;
    doc.doc_id = j.value("doc_id", doc_id);
    for (const auto& jp : j.at("pages")) {
      int number = jp.at("number").get<int>();
      if (number != static_cast<int>(doc.pages.size()) + 1) {
        throw ParseError("layout json: page number " + std::to_string(number) +
                         " out of sequence");
      }
      doc.pages.push_back({jp.at("width").get<double>(), jp.at("height").get<double>()});
      for (const auto& jl : jp.at("lines")) {
        TextLine line;
        line.text = jl.at("text").get<std::string>();
        line.page = number;
        line.top = jl.at("top").get<double>();
        line.left = jl.at("left").get<double>();
        line.width = jl.at("width").get<double>();
        line.height = jl.at("height").get<double>();
        line.font_size = jl.at("font_size").get<double>();
        line.bold = jl.value("bold", false);
        line.italic = jl.value("italic", false);
        if (auto it = jl.find("color"); it != jl.end()) {
          line.color = Rgb{(*it).at(0).get<int>(), (*it).at(1).get<int>(),
                           (*it).at(2).get<int>()};
        }
        line.font_family = jl.value("font_family", "Times");
        if (line.font_size <= 0) throw ParseError("layout json: non-positive font_size");
        if (!line.text.empty()) doc.lines.push_back(std::move(line));
      }
    }
    doc.page_count = static_cast<int>(doc.pages.size());
    if (doc.page_count == 0) {
      throw DataError("empty document: no pages in '" + doc.doc_id + "'");
    }
    sort_reading_order(doc.lines);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("layout json: ") + e.what());
  }
}

std::string serialize_layout_json(const Document& doc) {
  ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["pages"] = ordered_json::array();
  for (int page = 1; page <= doc.page_count; ++page) {
    ordered_json jp;
    jp["number"] = page;
    jp["width"] = doc.page_dims(page).width;
    jp["height"] = doc.page_dims(page).height;
    jp["lines"] = ordered_json::array();
    for (const auto& line : doc.lines) {
      if (line.page != page) continue;
      ordered_json jl;
      jl["text"] = line.text;
      jl["top"] = line.top;
      jl["left"] = line.left;
      jl["width"] = line.width;
      jl["height"] = line.height;
      jl["font_size"] = line.font_size;
      jl["bold"] = line.bold;
      jl["italic"] = line.italic;
      jl["color"] = line.color;
      jl["font_family"] = line.font_family;
      jp["lines"].push_back(std::move(jl));
    }
    j["pages"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

Document ingest_layout_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("layout file not found: " + path.string());
  }
  std::string content = read_file(path);
  std::string stem = path.stem().string();
  std::string ext = path.extension().string();
  if (ext == ".json") return parse_layout_json(content, stem);
  return parse_layout_xml(content, stem);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace tocgen
