// include/asrpipe/lexicon.hpp

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

#ifndef ASRPIPE_LEXICON_HPP
#define ASRPIPE_LEXICON_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asrpipe/error.hpp"
#include "asrpipe/text.hpp"
#include "asrpipe/util/rng.hpp"

namespace asrpipe {

// The seven domain keyword categories. Order matters: it is the tie-break
// order for keyword tagging.
enum class KeywordCategory { SERIES, TYPE, BRAND, MATERIAL, NICKNAME, LINES, SOCIAL };

inline constexpr std::array<KeywordCategory, 7> kAllCategories = {
    KeywordCategory::SERIES,   KeywordCategory::TYPE,  KeywordCategory::BRAND,
    KeywordCategory::MATERIAL, KeywordCategory::NICKNAME, KeywordCategory::LINES,
    KeywordCategory::SOCIAL};

inline const char* to_string(KeywordCategory c) {
  switch (c) {
    case KeywordCategory::SERIES: return "SERIES";
    case KeywordCategory::TYPE: return "TYPE";
    case KeywordCategory::BRAND: return "BRAND";
    case KeywordCategory::MATERIAL: return "MATERIAL";
    case KeywordCategory::NICKNAME: return "NICKNAME";
    case KeywordCategory::LINES: return "LINES";
    case KeywordCategory::SOCIAL: return "SOCIAL";
  }
  return "SERIES";
}

inline std::optional<KeywordCategory> category_from_string(std::string_view s) {
  for (KeywordCategory c : kAllCategories)
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct Keyword {
  std::string surface;              // as written in the lexicon file
  std::string normalized;           // via normalize(), non-empty
  std::vector<std::string> tokens;  // base tokens of the normalized surface
  KeywordCategory category = KeywordCategory::SERIES;

  std::size_t token_count() const { return tokens.size(); }
};

// Immutable once loaded; safe to share across threads.
class KeywordLexicon {
 public:
  KeywordLexicon() = default;

  // entries must already be normalized and deduplicated; used by tests and
  // generators that fabricate lexicons in memory.
  static KeywordLexicon from_keywords(std::vector<Keyword> entries) {
    KeywordLexicon lex;
    for (auto& kw : entries) lex.add(std::move(kw), 0);
    return lex;
  }

  // CSV schema: header "surface,category", one keyword per row, '#' comments.
  static KeywordLexicon load(const std::filesystem::path& path,
                             const NormalizePolicy& policy = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file: " + path.string());
    KeywordLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (!saw_header) {
        if (line != "surface,category")
          throw ParseError("lexicon header must be \"surface,category\", got \"" + line + "\"",
                           line_no);
        saw_header = true;
        continue;
      }
      auto comma = line.rfind(',');
      if (comma == std::string::npos)
        throw ParseError("expected \"surface,category\"", line_no);
      std::string surface = line.substr(0, comma);
      std::string category = line.substr(comma + 1);
      auto cat = category_from_string(category);
      if (!cat) throw UnknownCategoryError(category, line_no);
      Keyword kw;
      kw.surface = surface;
      kw.normalized = normalize(surface, policy).normalized;
      if (kw.normalized.empty())
        throw ParseError("keyword surface normalizes to empty: \"" + surface + "\"", line_no);
      for (const Token& t : tokenize(kw.normalized, policy)) kw.tokens.push_back(t.text);
      kw.category = *cat;
      lex.add(std::move(kw), line_no);
    }
    if (!saw_header) throw ParseError("lexicon file has no header row", line_no + 1);
    return lex;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write lexicon file: " + path.string());
    out << "surface,category\n";
    for (const Keyword& kw : entries_) out << kw.surface << ',' << to_string(kw.category) << '\n';
    if (!out) throw IoError("short write to lexicon file: " + path.string());
  }

  const std::vector<Keyword>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<const Keyword*>& by_category(KeywordCategory c) const {
    return by_category_[static_cast<std::size_t>(c)];
  }

  const Keyword* find_normalized(std::string_view normalized) const {
    auto it = index_.find(std::string(normalized));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  std::map<KeywordCategory, std::size_t> stats() const {
    std::map<KeywordCategory, std::size_t> out;
    for (KeywordCategory c : kAllCategories)
      out[c] = by_category_[static_cast<std::size_t>(c)].size();
    return out;
  }

  // min(count, |category|) distinct keywords, uniform without replacement.
  // Deterministic for a fixed rng state.
  std::vector<const Keyword*> sample(KeywordCategory category, std::size_t count,
                                     Rng& rng) const {
    const auto& pool = by_category(category);
    std::size_t k = std::min(count, pool.size());
    std::vector<const Keyword*> out;
    if (k == 0) return out;
    out.reserve(k);
    for (std::size_t idx : rng.sample_without_replacement(pool.size(), k))
      out.push_back(pool[idx]);
    return out;
  }

  std::size_t max_token_count() const { return max_token_count_; }

 private:
  void add(Keyword kw, std::size_t line_no) {
    auto it = index_.find(kw.normalized);
    if (it != index_.end())
      throw DuplicateKeywordError(kw.surface, lines_[it->second], line_no);
    entries_.push_back(std::move(kw));
    lines_.push_back(line_no);
    index_.emplace(entries_.back().normalized, entries_.size() - 1);
    max_token_count_ = std::max(max_token_count_, entries_.back().token_count());
    rebuild_category_index();
  }

  void rebuild_category_index() {
    for (auto& v : by_category_) v.clear();
    for (const Keyword& kw : entries_)
      by_category_[static_cast<std::size_t>(kw.category)].push_back(&kw);
  }

  std::vector<Keyword> entries_;
  std::vector<std::size_t> lines_;
  std::map<std::string, std::size_t> index_;
  std::array<std::vector<const Keyword*>, 7> by_category_{};
  std::size_t max_token_count_ = 0;
};

}  // namespace asrpipe

#endif  // ASRPIPE_LEXICON_HPP
