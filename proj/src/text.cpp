/*
 * Copyright 2026 The PhishBench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "phishbench/text.hpp"

#include <array>
#include <utility>

namespace phishbench {
namespace utf8 {

char32_t Decode(std::string_view text, size_t& pos) {
  const auto byte = [&](size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  size_t length = 0;
  char32_t cp = 0;
  char32_t min_value = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2, cp = lead & 0x1F, min_value = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3, cp = lead & 0x0F, min_value = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4, cp = lead & 0x07, min_value = 0x10000;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + length > text.size()) {
    ++pos;
    return kInvalid;
  }
  for (size_t i = 1; i < length; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min_value || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kInvalid;
  }
  pos += length;
  return cp;
}

void Append(std::string& out, char32_t cp) {
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

bool IsValid(std::string_view text) {
  size_t pos = 0;
  while (pos < text.size()) {
    if (Decode(text, pos) == kInvalid) return false;
  }
  return true;
}

size_t CodePointCount(std::string_view text) {
  size_t pos = 0;
  size_t count = 0;
  while (pos < text.size()) {
    Decode(text, pos);
    ++count;
  }
  return count;
}

bool IsWhitespace(char32_t cp) {
  if (cp <= 0x20 || cp == 0x7F) return true;  // includes C0 controls
  if (cp >= 0x80 && cp <= 0xA0) return true;  // C1 controls, NEL, NBSP
  switch (cp) {
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200B;
  }
}

namespace {

struct Range {
  char32_t lo;
  char32_t hi;
};

// Letter, digit and combining-mark blocks for the scripts we expect in email
// corpora. Not a full Unicode property table.
constexpr std::array<Range, 28> kWordRanges = {{
    {0x00AA, 0x00AA}, {0x00B5, 0x00B5}, {0x00BA, 0x00BA}, {0x00C0, 0x00D6},
    {0x00D8, 0x00F6}, {0x00F8, 0x02AF}, {0x0300, 0x036F}, {0x0370, 0x0373},
    {0x0376, 0x037D}, {0x0386, 0x0386}, {0x0388, 0x03FF}, {0x0400, 0x0481},
    {0x048A, 0x052F}, {0x0531, 0x0587}, {0x05D0, 0x05EA}, {0x0620, 0x064A},
    {0x0660, 0x0669}, {0x0900, 0x097F}, {0x1E00, 0x1FFF}, {0x3040, 0x30FF},
    {0x3400, 0x4DBF}, {0x4E00, 0x9FFF}, {0xAC00, 0xD7A3}, {0xFF10, 0xFF19},
    {0xFF21, 0xFF3A}, {0xFF41, 0xFF5A}, {0x0E00, 0x0E7F}, {0x0980, 0x09FF},
}};

}  // namespace

bool IsAlnum(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  for (const auto& r : kWordRanges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

char32_t ToLower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp == 0x178) return 0xFF;
    const bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
    if (cp == 0x130 || cp == 0x131 || cp == 0x138 || cp == 0x149 || cp == 0x17F) return cp;
    if (odd_upper) return (cp & 1) ? cp + 1 : cp;
    return (cp & 1) ? cp : cp + 1;
  }
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp == 0x386) return 0x3AC;
  if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp == 0x1E9E) return 0xDF;
  if ((cp >= 0x1E00 && cp <= 0x1E95) || (cp >= 0x1EA0 && cp <= 0x1EFF)) {
    return (cp & 1) ? cp : cp + 1;
  }
  if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 0x20;
  return cp;
}

}  // namespace utf8

namespace {

bool IsAsciiAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char AsciiLower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 0x20) : c; }

bool StartsWithIgnoreCase(std::string_view text, size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (AsciiLower(text[pos + i]) != prefix[i]) return false;
  }
  return true;
}

size_t FindIgnoreCase(std::string_view text, size_t from, std::string_view needle) {
  for (size_t pos = from; pos + needle.size() <= text.size(); ++pos) {
    if (StartsWithIgnoreCase(text, pos, needle)) return pos;
  }
  return std::string_view::npos;
}

constexpr std::array<std::pair<std::string_view, char>, 5> kEntities = {{
    {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''},
}};

// Name of the element opened at `pos` (which points at '<'), lower-cased.
std::string TagName(std::string_view text, size_t pos) {
  std::string name;
  for (size_t i = pos + 1; i < text.size(); ++i) {
    const char c = text[i];
    if (IsAsciiAlpha(c) || (c >= '0' && c <= '9')) {
      name.push_back(AsciiLower(c));
    } else {
      break;
    }
  }
  return name;
}

std::string CleanPass(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  const auto emit_space = [&] { pending_space = true; };
  const auto emit = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(piece);
  };

  size_t pos = 0;
  while (pos < raw.size()) {
    const char c = raw[pos];
    if (c == '<' && pos + 1 < raw.size() &&
        (IsAsciiAlpha(raw[pos + 1]) || raw[pos + 1] == '/' || raw[pos + 1] == '!' ||
         raw[pos + 1] == '?')) {
      const size_t close = raw.find('>', pos + 1);
      const size_t tag_end = close == std::string_view::npos ? raw.size() : close + 1;
      const std::string name = TagName(raw, pos);
      pos = tag_end;
      if (name == "script" || name == "style") {
        const std::string closing = "</" + name;
        const size_t end_tag = FindIgnoreCase(raw, pos, closing);
        if (end_tag == std::string_view::npos) {
          pos = raw.size();
        } else {
          const size_t end_close = raw.find('>', end_tag);
          pos = end_close == std::string_view::npos ? raw.size() : end_close + 1;
        }
      }
      emit_space();
      continue;
    }
    if (c == '&') {
      bool decoded = false;
      for (const auto& [entity, value] : kEntities) {
        if (raw.substr(pos, entity.size()) == entity) {
          emit(std::string_view(&value, 1));
          pos += entity.size();
          decoded = true;
          break;
        }
      }
      if (decoded) continue;
    }
    const size_t start = pos;
    const char32_t cp = utf8::Decode(raw, pos);
    if (cp == utf8::kInvalid) continue;
    if (utf8::IsWhitespace(cp)) {
      emit_space();
      continue;
    }
    emit(raw.substr(start, pos - start));
  }
  return out;
}

}  // namespace

std::string CleanText(std::string_view raw) {
  std::string current = CleanPass(raw);
  while (true) {
    std::string next = CleanPass(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> terms;
  std::string term;
  size_t term_length = 0;
  const auto flush = [&] {
    if (term_length >= 2) terms.push_back(term);
    term.clear();
    term_length = 0;
  };
  size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::Decode(text, pos);
    if (cp != utf8::kInvalid && utf8::IsAlnum(cp)) {
      utf8::Append(term, utf8::ToLower(cp));
      ++term_length;
    } else {
      flush();
    }
  }
  flush();
  return terms;
}

}  // namespace phishbench
