// include/asrpipe/segmentation.hpp

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

#ifndef ASRPIPE_SEGMENTATION_HPP
#define ASRPIPE_SEGMENTATION_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrpipe/error.hpp"
#include "asrpipe/lexicon.hpp"
#include "asrpipe/text.hpp"
#include "asrpipe/util/subprocess.hpp"

namespace asrpipe {

// Identifies one word-segmentation strategy. The built-ins are forward and
// backward maximum match against a word dictionary; "external" plugs in a
// third-party tool through a line-oriented adapter process.
struct SegmenterId {
  enum class Kind { BuiltinFmm, BuiltinBmm, External };
  Kind kind = Kind::BuiltinFmm;
  std::string name = "fmm";
  std::vector<std::string> command;  // adapter argv; external only

  static SegmenterId fmm() { return {Kind::BuiltinFmm, "fmm", {}}; }
  static SegmenterId bmm() { return {Kind::BuiltinBmm, "bmm", {}}; }
  static SegmenterId external(std::string name, std::vector<std::string> command) {
    return {Kind::External, std::move(name), std::move(command)};
  }
};

enum class UnitKind { Keyword, Word, Char };

inline const char* to_string(UnitKind k) {
  switch (k) {
    case UnitKind::Keyword: return "keyword";
    case UnitKind::Word: return "word";
    case UnitKind::Char: return "char";
  }
  return "char";
}

// One scoring unit over a half-open range of base tokens. Keyword units may
// span several tokens, Word units span >= 2 CJK tokens, Char units exactly
// one token. Units never overlap, which is what keeps word and character
// errors from being double counted.
struct Unit {
  std::string text;
  UnitKind kind = UnitKind::Char;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
};

struct UnitSequence {
  std::vector<Unit> units;
  SegmenterId segmenter;
  std::size_t word_count = 0;
  std::size_t char_count = 0;
  std::size_t keyword_count = 0;

  std::size_t total() const { return units.size(); }
};

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const TokenSpan&) const = default;
};

struct KeywordSpan {
  TokenSpan span;
  const Keyword* keyword = nullptr;
};

// Word dictionary for the built-in maximum-match segmenters.
// Entries are normalized; single-character entries are ignored (a single
// character is a Char unit by definition).
class WordDictionary {
 public:
  WordDictionary() = default;

  static WordDictionary load(const std::filesystem::path& path,
                             const NormalizePolicy& policy = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open word dictionary: " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      words.push_back(line);
    }
    return from_words(words, policy);
  }

  static WordDictionary from_words(const std::vector<std::string>& words,
                                   const NormalizePolicy& policy = {}) {
    WordDictionary dict;
    for (const auto& w : words) {
      std::u32string scalars = decode_utf8(normalize(w, policy).normalized);
      std::u32string key;
      for (char32_t c : scalars)
        if (c != U' ') key.push_back(c);
      if (key.size() < 2) continue;
      dict.words_.insert(key);
      dict.max_chars_ = std::max(dict.max_chars_, key.size());
    }
    return dict;
  }

  bool contains(std::u32string_view w) const { return words_.count(std::u32string(w)) > 0; }
  std::size_t max_chars() const { return max_chars_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::u32string> words_;
  std::size_t max_chars_ = 0;
};

// Greedy longest-match keyword tagging over normalized token windows,
// left to right. Ties between keywords whose normalized token sequences
// coincide break by category order, then by surface.
inline std::vector<KeywordSpan> tag_keywords(std::span<const Token> tokens,
                                             const KeywordLexicon& lex) {
  std::vector<KeywordSpan> spans;
  if (lex.empty() || tokens.empty()) return spans;

  // token-sequence key -> best keyword
  std::map<std::string, const Keyword*> index;
  auto key_of = [](std::span<const std::string> parts) {
    std::string key;
    for (const auto& p : parts) {
      key += p;
      key.push_back('\x1f');
    }
    return key;
  };
  for (const Keyword& kw : lex.entries()) {
    std::string key = key_of(kw.tokens);
    auto [it, inserted] = index.emplace(key, &kw);
    if (!inserted) {
      const Keyword* cur = it->second;
      if (kw.category < cur->category ||
          (kw.category == cur->category && kw.surface < cur->surface))
        it->second = &kw;
    }
  }

  const std::size_t max_len = lex.max_token_count();
  std::size_t i = 0;
  std::string key;
  while (i < tokens.size()) {
    const Keyword* hit = nullptr;
    std::size_t hit_len = 0;
    std::size_t longest = std::min(max_len, tokens.size() - i);
    for (std::size_t len = longest; len >= 1; --len) {
      key.clear();
      for (std::size_t k = 0; k < len; ++k) {
        key += tokens[i + k].text;
        key.push_back('\x1f');
      }
      auto it = index.find(key);
      if (it != index.end()) {
        hit = it->second;
        hit_len = len;
        break;
      }
    }
    if (hit) {
      spans.push_back({{i, i + hit_len}, hit});
      i += hit_len;
    } else {
      ++i;
    }
  }
  return spans;
}

enum class MatchDirection { Forward, Backward };

// Maximum-match segmentation of one CJK run (token indices [begin, end)
// where every token is a single CJK character). Returns word spans of
// length >= 2; uncovered positions stay singletons.
inline std::vector<TokenSpan> segment_words(std::span<const Token> tokens, TokenSpan run,
                                            const WordDictionary& dict,
                                            MatchDirection direction) {
  std::vector<TokenSpan> words;
  const std::size_t n = run.end - run.begin;
  if (n == 0 || dict.size() == 0) return words;

  std::u32string run_chars;
  run_chars.reserve(n);
  for (std::size_t k = run.begin; k < run.end; ++k) {
    std::u32string t = decode_utf8(tokens[k].text);
    run_chars.push_back(t.empty() ? kReplacementChar : t[0]);
  }

  if (direction == MatchDirection::Forward) {
    std::size_t i = 0;
    while (i < n) {
      std::size_t best = 1;
      std::size_t cap = std::min(dict.max_chars(), n - i);
      for (std::size_t len = cap; len >= 2; --len) {
        if (dict.contains(std::u32string_view(run_chars).substr(i, len))) {
          best = len;
          break;
        }
      }
      if (best >= 2) words.push_back({run.begin + i, run.begin + i + best});
      i += best;
    }
  } else {
    std::size_t j = n;
    std::vector<TokenSpan> rev;
    while (j > 0) {
      std::size_t best = 1;
      std::size_t cap = std::min(dict.max_chars(), j);
      for (std::size_t len = cap; len >= 2; --len) {
        if (dict.contains(std::u32string_view(run_chars).substr(j - len, len))) {
          best = len;
          break;
        }
      }
      if (best >= 2) rev.push_back({run.begin + j - best, run.begin + j});
      j -= best;
    }
    words.assign(rev.rbegin(), rev.rend());
  }
  return words;
}

// Runtime segmentation strategy. Built-ins are pure; the external adapter
// owns a child process and must not be shared across threads.
class Segmenter {
 public:
  explicit Segmenter(SegmenterId id) : id_(std::move(id)) {}
  virtual ~Segmenter() = default;

  const SegmenterId& id() const { return id_; }

  // Word spans (length >= 2) inside one CJK run.
  virtual std::vector<TokenSpan> segment_run(std::span<const Token> tokens, TokenSpan run) = 0;

  // Non-fatal diagnostics accumulated since the last call; external
  // adapters report misaligned words here.
  std::vector<std::string> take_warnings() {
    std::vector<std::string> out;
    out.swap(warnings_);
    return out;
  }

 protected:
  void warn(std::string msg) { warnings_.push_back(std::move(msg)); }

 private:
  SegmenterId id_;
  std::vector<std::string> warnings_;
};

class MaxMatchSegmenter final : public Segmenter {
 public:
  MaxMatchSegmenter(SegmenterId id, const WordDictionary* dict, MatchDirection direction)
      : Segmenter(std::move(id)), dict_(dict), direction_(direction) {}

  std::vector<TokenSpan> segment_run(std::span<const Token> tokens, TokenSpan run) override {
    if (!dict_) return {};
    return segment_words(tokens, run, *dict_, direction_);
  }

 private:
  const WordDictionary* dict_;
  MatchDirection direction_;
};

// Adapter protocol: one normalized sentence per request line on stdin; the
// response is the same sentence with word boundaries marked by U+0020, one
// line per request. Non-zero exit is an external-segmenter-failure.
class ExternalSegmenter final : public Segmenter {
 public:
  explicit ExternalSegmenter(SegmenterId id) : Segmenter(id) {
    process_ = std::make_unique<LineProcess>(this->id().command);
  }

  std::vector<TokenSpan> segment_run(std::span<const Token> tokens, TokenSpan run) override {
    std::string text;
    for (std::size_t k = run.begin; k < run.end; ++k) text += tokens[k].text;
    std::string response = process_->request(text);

    std::vector<TokenSpan> spans;
    std::size_t pos = run.begin;
    std::size_t i = 0;
    while (i < response.size() && pos < run.end) {
      while (i < response.size() && response[i] == ' ') ++i;
      std::size_t j = i;
      while (j < response.size() && response[j] != ' ') ++j;
      if (j == i) break;
      std::string_view word(response.data() + i, j - i);
      std::size_t len = word_token_length(tokens, pos, run.end, word);
      if (len == 0) {
        // Word does not align to the text here: its positions stay
        // singletons and we move on by its character count.
        warn("adapter \"" + id().name + "\" word \"" + std::string(word) +
             "\" does not align to \"" + text + "\"; falling back to single characters");
        len = std::min(scalar_count(word), run.end - pos);
        if (len == 0) len = 1;
      } else if (len >= 2) {
        spans.push_back({pos, pos + len});
      }
      pos += len;
      i = j;
    }
    while (i < response.size() && response[i] == ' ') ++i;
    if (i != response.size())
      warn("adapter \"" + id().name + "\" emitted words beyond the end of \"" + text + "\"");
    return spans;
  }

  // Exposed so callers can check the adapter's exit status.
  int finish() { return process_->finish(); }

 private:
  static std::size_t word_token_length(std::span<const Token> tokens, std::size_t pos,
                                       std::size_t end, std::string_view word) {
    std::size_t consumed = 0;
    std::size_t count = 0;
    while (consumed < word.size()) {
      if (pos + count >= end) return 0;
      const std::string& t = tokens[pos + count].text;
      if (word.substr(consumed, t.size()) != t) return 0;
      consumed += t.size();
      ++count;
    }
    return count;
  }

  std::unique_ptr<LineProcess> process_;
};

inline std::unique_ptr<Segmenter> make_segmenter(const SegmenterId& id,
                                                 const WordDictionary* dict) {
  switch (id.kind) {
    case SegmenterId::Kind::BuiltinFmm:
      return std::make_unique<MaxMatchSegmenter>(id, dict, MatchDirection::Forward);
    case SegmenterId::Kind::BuiltinBmm:
      return std::make_unique<MaxMatchSegmenter>(id, dict, MatchDirection::Backward);
    case SegmenterId::Kind::External:
      return std::make_unique<ExternalSegmenter>(id);
  }
  throw Error("unreachable segmenter kind");
}

// Partitions reference tokens into keyword, word, and character units.
// Keywords are carved out first and are never re-segmented; remaining CJK
// runs go through the word segmenter; everything else is a Char unit.
inline UnitSequence partition_units(const NormalizedText& nt, std::span<const Token> tokens,
                                    const KeywordLexicon* lex, Segmenter& segmenter) {
  UnitSequence seq;
  seq.segmenter = segmenter.id();
  if (tokens.empty()) return seq;

  std::vector<KeywordSpan> keyword_spans;
  if (lex) keyword_spans = tag_keywords(tokens, *lex);

  std::u32string scalars = decode_utf8(nt.normalized);
  auto unit_text = [&](std::size_t token_begin, std::size_t token_end) {
    std::size_t lo = tokens[token_begin].begin;
    std::size_t hi = tokens[token_end - 1].end;
    return encode_utf8(std::u32string_view(scalars.data() + lo, hi - lo));
  };
  auto push = [&](UnitKind kind, std::size_t b, std::size_t e) {
    Unit u;
    u.kind = kind;
    u.token_begin = b;
    u.token_end = e;
    u.text = unit_text(b, e);
    seq.units.push_back(std::move(u));
    switch (kind) {
      case UnitKind::Keyword: ++seq.keyword_count; break;
      case UnitKind::Word: ++seq.word_count; break;
      case UnitKind::Char: ++seq.char_count; break;
    }
  };

  auto emit_plain = [&](std::size_t begin, std::size_t end) {
    // Split [begin, end) into maximal CJK runs and non-CJK singletons.
    std::size_t i = begin;
    while (i < end) {
      if (tokens[i].script != ScriptClass::CJK) {
        push(UnitKind::Char, i, i + 1);
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < end && tokens[j].script == ScriptClass::CJK) ++j;
      std::vector<TokenSpan> words = segmenter.segment_run(tokens, {i, j});
      std::size_t pos = i;
      for (const TokenSpan& w : words) {
        for (; pos < w.begin; ++pos) push(UnitKind::Char, pos, pos + 1);
        push(UnitKind::Word, w.begin, w.end);
        pos = w.end;
      }
      for (; pos < j; ++pos) push(UnitKind::Char, pos, pos + 1);
      i = j;
    }
  };

  std::size_t cursor = 0;
  for (const KeywordSpan& ks : keyword_spans) {
    emit_plain(cursor, ks.span.begin);
    push(UnitKind::Keyword, ks.span.begin, ks.span.end);
    cursor = ks.span.end;
  }
  emit_plain(cursor, tokens.size());
  return seq;
}

inline UnitSequence partition_units(std::string_view text, const KeywordLexicon* lex,
                                    Segmenter& segmenter, const NormalizePolicy& policy = {}) {
  NormalizedText nt = normalize(text, policy);
  std::vector<Token> tokens = base_tokenize(nt);
  return partition_units(nt, tokens, lex, segmenter);
}

}  // namespace asrpipe

#endif  // ASRPIPE_SEGMENTATION_HPP
