#include "tocgen/text_norm.hpp"

#include <cctype>

namespace tocgen {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    int extra = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      cp = 0xFFFD;  // stray continuation byte
    }
    ++i;
    for (int k = 0; k < extra; ++k) {
      if (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) {
        cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
        ++i;
      } else {
        cp = 0xFFFD;
        break;
      }
    }
    out.push_back(cp);
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

namespace {

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v' || cp == 0x00A0 ||
         (cp >= 0x2000 && cp <= 0x200B) || cp == 0x202F || cp == 0x3000;
}

// Maps one punctuation codepoint to its ASCII canonical form, or empty when
// the codepoint passes through untouched.
std::u32string map_punct(char32_t cp) {
  switch (cp) {
    case 0x2018: case 0x2019: case 0x201A: case 0x201B:
    case 0x2039: case 0x203A:
      return U"'";
    case 0x201C: case 0x201D: case 0x201E: case 0x201F:
    case 0x00AB: case 0x00BB:
      return U"\"";
    case 0x2010: case 0x2011: case 0x2012: case 0x2013:
    case 0x2014: case 0x2015: case 0x2212:
      return U"-";
    case 0x2026:
      return U"...";
    case 0x2022: case 0x25CF: case 0x25AA:  // bullets
      return U"*";
    default:
      return {};
  }
}

}  // namespace

std::string normalize_text(std::string_view s) {
  std::u32string in = decode_utf8(s);
  std::u32string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char32_t cp : in) {
    if (is_space_cp(cp)) {
      pending_space = !out.empty();
      continue;
    }
    std::u32string mapped = map_punct(cp);
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    if (mapped.empty()) {
      out.push_back(cp);
    } else {
      out += mapped;
    }
  }
  return encode_utf8(out);
}

char32_t to_lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 uppercase block, excluding the multiplication sign.
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
  return cp;
}

bool is_letter_cp(char32_t cp) {
  if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
  if (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) return true;
  return false;
}

namespace {

bool is_upper_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return true;
  return false;
}

bool is_lower_cp(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return true;
  if (cp >= 0x00DF && cp <= 0x00FF && cp != 0x00F7) return true;
  return false;
}

bool is_alnum_cp(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || is_letter_cp(cp);
}

}  // namespace

std::string normalize_title(std::string_view s) {
  std::u32string in = decode_utf8(normalize_text(s));
  std::u32string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char32_t cp : in) {
    if (is_alnum_cp(cp)) {
      if (pending_space && !out.empty()) out.push_back(U' ');
      pending_space = false;
      out.push_back(to_lower_cp(cp));
    } else {
      pending_space = true;
    }
  }
  return encode_utf8(out);
}

std::vector<std::string> tokenize_title(std::string_view s) {
  std::string norm = normalize_title(s);
  std::vector<std::string> tokens;
  size_t pos = 0;
  while (pos < norm.size()) {
    size_t next = norm.find(' ', pos);
    if (next == std::string::npos) next = norm.size();
    if (next > pos) tokens.push_back(norm.substr(pos, next - pos));
    pos = next + 1;
  }
  return tokens;
}

bool is_all_caps_text(std::string_view s) {
  std::u32string in = decode_utf8(s);
  bool has_letter = false;
  for (char32_t cp : in) {
    if (is_lower_cp(cp)) return false;
    if (is_upper_cp(cp)) has_letter = true;
  }
  return has_letter;
}

}  // namespace tocgen
