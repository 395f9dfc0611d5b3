// include/asrpipe/text.hpp

// Copyright 2026 asrpipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRPIPE_TEXT_HPP
#define ASRPIPE_TEXT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "asrpipe/util/utf8.hpp"

namespace asrpipe {

// Script bucket of a Unicode scalar. Total and deterministic: every scalar
// maps to exactly one class, independent of locale.
enum class ScriptClass { CJK, Latin, Digit, Punct, Whitespace, Other };

inline const char* to_string(ScriptClass s) {
  switch (s) {
    case ScriptClass::CJK: return "cjk";
    case ScriptClass::Latin: return "latin";
    case ScriptClass::Digit: return "digit";
    case ScriptClass::Punct: return "punct";
    case ScriptClass::Whitespace: return "whitespace";
    case ScriptClass::Other: return "other";
  }
  return "other";
}

namespace detail {

inline bool in_range(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

inline bool is_cjk_scalar(char32_t c) {
  // CJK Unified Ideographs and its extension blocks.
  return in_range(c, 0x4E00, 0x9FFF) || in_range(c, 0x3400, 0x4DBF) ||
         in_range(c, 0x20000, 0x2A6DF) || in_range(c, 0x2A700, 0x2B73F) ||
         in_range(c, 0x2B740, 0x2B81F) || in_range(c, 0x2B820, 0x2CEAF) ||
         in_range(c, 0x2CEB0, 0x2EBEF) || in_range(c, 0x30000, 0x3134F) ||
         in_range(c, 0x31350, 0x323AF);
}

inline bool is_whitespace_scalar(char32_t c) {
  return c == 0x20 || in_range(c, 0x09, 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         in_range(c, 0x2000, 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

inline bool is_latin_scalar(char32_t c) {
  // Basic Latin and Latin-1 letters only; everything else is Other.
  return in_range(c, 'A', 'Z') || in_range(c, 'a', 'z') ||
         (in_range(c, 0xC0, 0xFF) && c != 0xD7 && c != 0xF7);
}

inline bool is_punct_scalar(char32_t c) {
  return in_range(c, 0x21, 0x2F) || in_range(c, 0x3A, 0x40) || in_range(c, 0x5B, 0x60) ||
         in_range(c, 0x7B, 0x7E) ||
         (in_range(c, 0xA1, 0xBF) && c != 0xAA && c != 0xBA) || c == 0xD7 || c == 0xF7 ||
         in_range(c, 0x2010, 0x2027) || in_range(c, 0x2030, 0x205E) ||
         in_range(c, 0x2E00, 0x2E7F) || in_range(c, 0x3001, 0x303F) ||
         in_range(c, 0xFE10, 0xFE19) || in_range(c, 0xFE30, 0xFE4F) ||
         in_range(c, 0xFE50, 0xFE6F) || in_range(c, 0xFF01, 0xFF0F) ||
         in_range(c, 0xFF1A, 0xFF20) || in_range(c, 0xFF3B, 0xFF40) ||
         in_range(c, 0xFF5B, 0xFF65) || in_range(c, 0xFFE0, 0xFFE6);
}

// Full-width ASCII variants fold to their half-width counterparts.
inline char32_t fold_width_scalar(char32_t c) {
  if (in_range(c, 0xFF01, 0xFF5E)) return c - 0xFEE0;
  if (c == 0x3000) return 0x20;
  return c;
}

inline char32_t lower_latin_scalar(char32_t c) {
  if (in_range(c, 'A', 'Z')) return c + 0x20;
  if (in_range(c, 0xC0, 0xDE) && c != 0xD7) return c + 0x20;
  return c;
}

// Canonical composition for the Latin-1 precomposed repertoire. Wider NFC
// needs the full Unicode database; mixed retail text in this domain only
// ever carries these marks.
inline char32_t compose_scalar(char32_t base, char32_t mark) {
  auto pick = [&](std::string_view bases, const char32_t* composed) -> char32_t {
    for (std::size_t i = 0; i < bases.size(); ++i)
      if (static_cast<char32_t>(bases[i]) == base) return composed[i];
    return 0;
  };
  switch (mark) {
    case 0x0300: {  // grave
      static constexpr char32_t t[] = {0xC0, 0xC8, 0xCC, 0xD2, 0xD9, 0xE0, 0xE8, 0xEC, 0xF2, 0xF9};
      return pick("AEIOUaeiou", t);
    }
    case 0x0301: {  // acute
      static constexpr char32_t t[] = {0xC1, 0xC9, 0xCD, 0xD3, 0xDA, 0xDD,
                                       0xE1, 0xE9, 0xED, 0xF3, 0xFA, 0xFD};
      return pick("AEIOUYaeiouy", t);
    }
    case 0x0302: {  // circumflex
      static constexpr char32_t t[] = {0xC2, 0xCA, 0xCE, 0xD4, 0xDB, 0xE2, 0xEA, 0xEE, 0xF4, 0xFB};
      return pick("AEIOUaeiou", t);
    }
    case 0x0303: {  // tilde
      static constexpr char32_t t[] = {0xC3, 0xD1, 0xD5, 0xE3, 0xF1, 0xF5};
      return pick("ANOano", t);
    }
    case 0x0308: {  // diaeresis
      static constexpr char32_t t[] = {0xC4, 0xCB, 0xCF, 0xD6, 0xDC, 0xE4, 0xEB, 0xEF, 0xF6, 0xFC, 0xFF};
      return pick("AEIOUaeiouy", t);
    }
    case 0x030A:  // ring above
      return base == 'A' ? 0xC5 : (base == 'a' ? 0xE5 : 0);
    case 0x0327:  // cedilla
      return base == 'C' ? 0xC7 : (base == 'c' ? 0xE7 : 0);
    default:
      return 0;
  }
}

}  // namespace detail

inline ScriptClass classify_script(char32_t c) {
  if (detail::is_whitespace_scalar(c)) return ScriptClass::Whitespace;
  if (detail::in_range(c, '0', '9')) return ScriptClass::Digit;
  if (detail::is_latin_scalar(c)) return ScriptClass::Latin;
  if (detail::is_cjk_scalar(c)) return ScriptClass::CJK;
  if (detail::is_punct_scalar(c)) return ScriptClass::Punct;
  return ScriptClass::Other;
}

struct NormalizePolicy {
  bool strip_punctuation = true;
  bool fold_width = true;
  bool lowercase_latin = true;

  bool operator==(const NormalizePolicy&) const = default;
};

// Canonical text form plus a map from each normalized scalar back to the
// scalar index in the original string that produced it.
struct NormalizedText {
  std::string original;
  std::string normalized;
  std::vector<std::size_t> offset_map;
};

// Canonicalizes mixed Chinese/Latin text:
//   - Latin-1 canonical composition, full-width folding, Latin lower-casing
//     (the latter two per policy);
//   - punctuation stripped to a word break, or retained, per policy;
//   - whitespace made canonical: never between two CJK scalars, exactly one
//     space at every other boundary between runs.
// The result is a fixed point of normalize, so scoring is insensitive to
// spacing differences around Chinese characters.
inline NormalizedText normalize(std::string_view text, const NormalizePolicy& policy = {}) {
  std::u32string out;
  std::vector<std::size_t> map;
  out.reserve(text.size());
  map.reserve(text.size());

  std::u32string scalars = decode_utf8(text);
  bool have_break = false;
  std::size_t break_idx = 0;

  for (std::size_t i = 0; i < scalars.size(); ++i) {
    char32_t c = scalars[i];
    if (policy.fold_width) c = detail::fold_width_scalar(c);
    if (i + 1 < scalars.size()) {
      if (char32_t composed = detail::compose_scalar(c, scalars[i + 1])) {
        c = composed;
        ++i;
      }
    }
    if (policy.lowercase_latin) c = detail::lower_latin_scalar(c);

    ScriptClass cls = classify_script(c);
    if (cls == ScriptClass::Whitespace || (policy.strip_punctuation && cls == ScriptClass::Punct)) {
      if (!have_break) {
        have_break = true;
        break_idx = i;
      }
      continue;
    }

    if (!out.empty()) {
      bool both_cjk = detail::is_cjk_scalar(out.back()) && detail::is_cjk_scalar(c);
      if (have_break && !both_cjk) {
        out.push_back(U' ');
        map.push_back(break_idx);
      } else if (!have_break && detail::is_cjk_scalar(out.back()) != detail::is_cjk_scalar(c)) {
        out.push_back(U' ');
        map.push_back(i);
      }
    }
    out.push_back(c);
    map.push_back(i);
    have_break = false;
  }

  NormalizedText nt;
  nt.original.assign(text);
  nt.normalized = encode_utf8(out);
  nt.offset_map = std::move(map);
  return nt;
}

// One scoring token: a single CJK character, or a maximal non-CJK
// non-whitespace run. Spans are half-open scalar ranges into normalized text.
struct Token {
  std::string text;
  ScriptClass script;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

inline std::vector<Token> base_tokenize(const NormalizedText& nt) {
  std::vector<Token> tokens;
  std::u32string scalars = decode_utf8(nt.normalized);
  std::size_t i = 0;
  while (i < scalars.size()) {
    char32_t c = scalars[i];
    if (c == U' ') {
      ++i;
      continue;
    }
    if (detail::is_cjk_scalar(c)) {
      Token t;
      t.text = encode_utf8(std::u32string_view(&c, 1));
      t.script = ScriptClass::CJK;
      t.begin = i;
      t.end = i + 1;
      tokens.push_back(std::move(t));
      ++i;
      continue;
    }
    std::size_t j = i;
    bool has_latin = false, has_digit = false;
    while (j < scalars.size() && scalars[j] != U' ' && !detail::is_cjk_scalar(scalars[j])) {
      ScriptClass sc = classify_script(scalars[j]);
      has_latin |= sc == ScriptClass::Latin;
      has_digit |= sc == ScriptClass::Digit;
      ++j;
    }
    Token t;
    t.text = encode_utf8(std::u32string_view(scalars.data() + i, j - i));
    t.script = has_latin ? ScriptClass::Latin
                         : (has_digit ? ScriptClass::Digit : classify_script(scalars[i]));
    t.begin = i;
    t.end = j;
    tokens.push_back(std::move(t));
    i = j;
  }
  return tokens;
}

inline std::vector<Token> tokenize(std::string_view text, const NormalizePolicy& policy = {}) {
  return base_tokenize(normalize(text, policy));
}

}  // namespace asrpipe

#endif  // ASRPIPE_TEXT_HPP
