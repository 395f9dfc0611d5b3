// include/asrpipe/metrics.hpp

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

#ifndef ASRPIPE_METRICS_HPP
#define ASRPIPE_METRICS_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "asrpipe/error.hpp"
#include "asrpipe/lexicon.hpp"
#include "asrpipe/segmentation.hpp"
#include "asrpipe/text.hpp"

namespace asrpipe {

enum class EditKind { Match, Substitute, Delete, Insert };

inline const char* to_string(EditKind k) {
  switch (k) {
    case EditKind::Match: return "match";
    case EditKind::Substitute: return "sub";
    case EditKind::Delete: return "del";
    case EditKind::Insert: return "ins";
  }
  return "match";
}

// One step of an edit alignment. Match/Substitute carry both indices,
// Delete only ref_index, Insert only hyp_index (the other is npos).
struct EditOp {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  EditKind kind = EditKind::Match;
  std::size_t ref_index = npos;
  std::size_t hyp_index = npos;

  bool operator==(const EditOp&) const = default;
};

struct Alignment {
  std::vector<EditOp> ops;
  std::size_t cost = 0;  // #sub + #del + #ins, minimal under unit costs
};

namespace detail {

inline std::vector<std::uint32_t>& dp_scratch() {
  thread_local std::vector<std::uint32_t> scratch;
  return scratch;
}

}  // namespace detail

// Minimal-cost alignment with unit costs and no transposition. The
// backtrace is deterministic: Match > Substitute > Delete > Insert.
template <typename T, typename Eq = std::equal_to<>>
Alignment align(std::span<const T> ref, std::span<const T> hyp, Eq eq = {}) {
  const std::size_t m = ref.size(), n = hyp.size();
  auto& dp = detail::dp_scratch();
  dp.resize((m + 1) * (n + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return dp[i * (n + 1) + j]; };

  for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    at(i, 0) = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint32_t best = at(i - 1, j - 1) + (eq(ref[i - 1], hyp[j - 1]) ? 0u : 1u);
      best = std::min(best, at(i - 1, j) + 1);
      best = std::min(best, at(i, j - 1) + 1);
      at(i, j) = best;
    }
  }

  Alignment out;
  out.cost = at(m, n);
  out.ops.reserve(m + n);
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && eq(ref[i - 1], hyp[j - 1]) && at(i, j) == at(i - 1, j - 1)) {
      out.ops.push_back({EditKind::Match, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
      out.ops.push_back({EditKind::Substitute, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      out.ops.push_back({EditKind::Delete, i - 1, EditOp::npos});
      --i;
    } else {
      out.ops.push_back({EditKind::Insert, EditOp::npos, j - 1});
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

// Cost-only variant; rolling rows, no backtrace.
template <typename T, typename Eq = std::equal_to<>>
std::size_t edit_distance(std::span<const T> ref, std::span<const T> hyp, Eq eq = {}) {
  const std::size_t m = ref.size(), n = hyp.size();
  auto& dp = detail::dp_scratch();
  dp.resize(2 * (n + 1));
  std::uint32_t* prev = dp.data();
  std::uint32_t* cur = dp.data() + (n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint32_t best = prev[j - 1] + (eq(ref[i - 1], hyp[j - 1]) ? 0u : 1u);
      best = std::min(best, prev[j] + 1);
      best = std::min(best, cur[j - 1] + 1);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// errors / total; total >= 1. value() may exceed 1 when the hypothesis
// inserts more than the reference holds.
struct Rate {
  std::size_t errors = 0;
  std::size_t total = 0;

  double value() const { return static_cast<double>(errors) / static_cast<double>(total); }
  bool operator==(const Rate&) const = default;
};

// Scoring characters: the normalized scalars minus word-break spaces.
inline std::u32string scoring_chars(const NormalizedText& nt) {
  std::u32string out;
  for (char32_t c : decode_utf8(nt.normalized))
    if (c != U' ') out.push_back(c);
  return out;
}

inline Rate cer_from_chars(std::u32string_view ref, std::u32string_view hyp) {
  if (ref.empty()) throw EmptyReferenceError();
  std::size_t cost = edit_distance(std::span<const char32_t>(ref.data(), ref.size()),
                                   std::span<const char32_t>(hyp.data(), hyp.size()));
  return {cost, ref.size()};
}

inline Rate cer(const NormalizedText& ref, const NormalizedText& hyp) {
  return cer_from_chars(scoring_chars(ref), scoring_chars(hyp));
}

inline Rate cer(std::string_view ref, std::string_view hyp, const NormalizePolicy& policy = {}) {
  return cer(normalize(ref, policy), normalize(hyp, policy));
}

inline Rate wer_from_tokens(std::span<const Token> ref, std::span<const Token> hyp) {
  if (ref.empty()) throw EmptyReferenceError("reference yields no tokens");
  std::size_t cost = edit_distance(ref, hyp, [](const Token& a, const Token& b) {
    return a.text == b.text;
  });
  return {cost, ref.size()};
}

inline Rate wer(std::string_view ref, std::string_view hyp, const NormalizePolicy& policy = {}) {
  std::vector<Token> r = tokenize(ref, policy);
  std::vector<Token> h = tokenize(hyp, policy);
  return wer_from_tokens(r, h);
}

// Language-split rates. A bucket is omitted when the reference holds no
// items of that bucket.
struct SplitRates {
  std::optional<Rate> cer_cn, cer_oth, wer_cn, wer_oth;
};

namespace detail {

// Walks alignment ops assigning one error per Substitute/Delete/Insert to a
// reference bucket: Sub/Del to their own reference item's bucket, Insert to
// the bucket of the nearest preceding reference item (or the first item).
inline void bucket_errors(const Alignment& alignment, const std::vector<bool>& ref_is_cn,
                          std::size_t& cn_errors, std::size_t& oth_errors) {
  auto bucket_of = [&](std::size_t ref_idx) -> std::size_t& {
    return ref_is_cn[ref_idx] ? cn_errors : oth_errors;
  };
  std::size_t last_ref = 0;  // sentence-initial inserts go to the first item
  for (const EditOp& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::Match:
        last_ref = op.ref_index;
        break;
      case EditKind::Substitute:
      case EditKind::Delete:
        ++bucket_of(op.ref_index);
        last_ref = op.ref_index;
        break;
      case EditKind::Insert:
        ++bucket_of(last_ref);
        break;
    }
  }
}

}  // namespace detail

inline SplitRates split_metrics(const NormalizedText& ref, const NormalizedText& hyp) {
  SplitRates out;

  std::u32string ref_chars = scoring_chars(ref);
  std::u32string hyp_chars = scoring_chars(hyp);
  if (ref_chars.empty()) throw EmptyReferenceError();

  {
    std::vector<bool> is_cn(ref_chars.size());
    std::size_t cn_total = 0;
    for (std::size_t i = 0; i < ref_chars.size(); ++i) {
      is_cn[i] = detail::is_cjk_scalar(ref_chars[i]);
      cn_total += is_cn[i];
    }
    Alignment a = align(std::span<const char32_t>(ref_chars.data(), ref_chars.size()),
                        std::span<const char32_t>(hyp_chars.data(), hyp_chars.size()));
    std::size_t cn_err = 0, oth_err = 0;
    detail::bucket_errors(a, is_cn, cn_err, oth_err);
    if (cn_total > 0) out.cer_cn = Rate{cn_err, cn_total};
    if (ref_chars.size() - cn_total > 0) out.cer_oth = Rate{oth_err, ref_chars.size() - cn_total};
  }

  {
    std::vector<Token> ref_tokens = base_tokenize(ref);
    std::vector<Token> hyp_tokens = base_tokenize(hyp);
    std::vector<bool> is_cn(ref_tokens.size());
    std::size_t cn_total = 0;
    for (std::size_t i = 0; i < ref_tokens.size(); ++i) {
      is_cn[i] = ref_tokens[i].script == ScriptClass::CJK;
      cn_total += is_cn[i];
    }
    Alignment a = align(std::span<const Token>(ref_tokens), std::span<const Token>(hyp_tokens),
                        [](const Token& x, const Token& y) { return x.text == y.text; });
    std::size_t cn_err = 0, oth_err = 0;
    detail::bucket_errors(a, is_cn, cn_err, oth_err);
    if (cn_total > 0) out.wer_cn = Rate{cn_err, cn_total};
    if (ref_tokens.size() - cn_total > 0)
      out.wer_oth = Rate{oth_err, ref_tokens.size() - cn_total};
  }

  return out;
}

// Per-unit error indicators over one UnitSequence. A unit is incorrect iff
// any of its reference tokens takes part in a Substitute or Delete; each
// unit is flagged at most once, so a split keyword still counts as a single
// error, and insertions never raise indicators.
struct UnitErrorFlags {
  std::vector<bool> flagged;  // parallel to UnitSequence::units
  std::size_t word_errors = 0;
  std::size_t char_errors = 0;
  std::size_t keyword_errors = 0;

  std::size_t total_errors() const { return word_errors + char_errors + keyword_errors; }
};

inline UnitErrorFlags unit_errors(const UnitSequence& units, std::size_t ref_token_count,
                                  const Alignment& token_alignment) {
  std::vector<bool> errored(ref_token_count, false);
  for (const EditOp& op : token_alignment.ops)
    if (op.kind == EditKind::Substitute || op.kind == EditKind::Delete)
      errored[op.ref_index] = true;

  UnitErrorFlags out;
  out.flagged.resize(units.units.size(), false);
  for (std::size_t u = 0; u < units.units.size(); ++u) {
    const Unit& unit = units.units[u];
    bool bad = false;
    for (std::size_t t = unit.token_begin; t < unit.token_end && !bad; ++t) bad = errored[t];
    out.flagged[u] = bad;
    if (!bad) continue;
    switch (unit.kind) {
      case UnitKind::Word: ++out.word_errors; break;
      case UnitKind::Char: ++out.char_errors; break;
      case UnitKind::Keyword: ++out.keyword_errors; break;
    }
  }
  return out;
}

struct IerComponent {
  std::string segmenter;
  std::size_t errors = 0;
  std::size_t total_units = 0;
  double value = 0.0;
};

struct IerScore {
  double value = 0.0;
  std::vector<IerComponent> components;
};

// Integrated error rate: per segmentation method, the flagged-unit fraction
// over keyword/word/character units; averaged over methods. The per-method
// fraction is algebraically the paper-style sum of class weights times
// class error means, with empty classes contributing nothing.
inline IerScore ier(const NormalizedText& ref, const NormalizedText& hyp,
                    const KeywordLexicon& lex, std::span<Segmenter* const> segmenters) {
  if (segmenters.empty()) throw EmptyInputError("IER needs at least one segmenter");
  std::vector<Token> ref_tokens = base_tokenize(ref);
  std::vector<Token> hyp_tokens = base_tokenize(hyp);
  if (ref_tokens.empty()) throw EmptyReferenceError("reference yields no tokens");

  Alignment a = align(std::span<const Token>(ref_tokens), std::span<const Token>(hyp_tokens),
                      [](const Token& x, const Token& y) { return x.text == y.text; });

  IerScore out;
  double sum = 0.0;
  for (Segmenter* seg : segmenters) {
    UnitSequence units = partition_units(ref, ref_tokens, &lex, *seg);
    UnitErrorFlags flags = unit_errors(units, ref_tokens.size(), a);
    IerComponent comp;
    comp.segmenter = seg->id().name;
    comp.errors = flags.total_errors();
    comp.total_units = units.total();
    comp.value = units.total() == 0
                     ? 0.0
                     : static_cast<double>(comp.errors) / static_cast<double>(units.total());
    sum += comp.value;
    out.components.push_back(std::move(comp));
  }
  out.value = sum / static_cast<double>(segmenters.size());
  return out;
}

inline IerScore ier(std::string_view ref, std::string_view hyp, const KeywordLexicon& lex,
                    std::span<Segmenter* const> segmenters, const NormalizePolicy& policy = {}) {
  return ier(normalize(ref, policy), normalize(hyp, policy), lex, segmenters);
}

// Everything the evaluator reports for one sample or one corpus.
struct MetricReport {
  Rate cer{0, 0};
  Rate wer{0, 0};
  std::optional<Rate> cer_cn, cer_oth, wer_cn, wer_oth;
  std::optional<double> ier;
  std::vector<IerComponent> ier_components;
};

struct EvalContext {
  NormalizePolicy policy;
  const KeywordLexicon* lexicon = nullptr;
  std::vector<Segmenter*> segmenters;  // non-owning; IER needs >= 1
  bool wer_per_word = false;           // WER over segmenter words instead of base tokens
};

namespace detail {

// Word-level tokens for the per-word WER switch: CJK runs are merged into
// the first segmenter's words, everything else stays a base token.
inline std::vector<Token> word_tokens(const NormalizedText& nt, std::span<const Token> tokens,
                                      Segmenter& seg) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].script != ScriptClass::CJK) {
      out.push_back(tokens[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < tokens.size() && tokens[j].script == ScriptClass::CJK) ++j;
    std::vector<TokenSpan> words = seg.segment_run(tokens, {i, j});
    std::size_t pos = i;
    auto push_span = [&](std::size_t b, std::size_t e) {
      Token t;
      for (std::size_t k = b; k < e; ++k) t.text += tokens[k].text;
      t.script = ScriptClass::CJK;
      t.begin = tokens[b].begin;
      t.end = tokens[e - 1].end;
      out.push_back(std::move(t));
    };
    for (const TokenSpan& w : words) {
      for (; pos < w.begin; ++pos) push_span(pos, pos + 1);
      push_span(w.begin, w.end);
      pos = w.end;
    }
    for (; pos < j; ++pos) push_span(pos, pos + 1);
    i = j;
  }
  return out;
}

}  // namespace detail

inline MetricReport evaluate_pair(std::string_view ref, std::string_view hyp,
                                  const EvalContext& ctx) {
  NormalizedText ref_nt = normalize(ref, ctx.policy);
  NormalizedText hyp_nt = normalize(hyp, ctx.policy);
  if (ref_nt.normalized.empty()) throw EmptyReferenceError();

  MetricReport report;
  report.cer = cer(ref_nt, hyp_nt);
  if (ctx.wer_per_word && !ctx.segmenters.empty()) {
    std::vector<Token> r = detail::word_tokens(ref_nt, base_tokenize(ref_nt), *ctx.segmenters[0]);
    std::vector<Token> h = detail::word_tokens(hyp_nt, base_tokenize(hyp_nt), *ctx.segmenters[0]);
    report.wer = wer_from_tokens(r, h);
  } else {
    std::vector<Token> r = base_tokenize(ref_nt);
    std::vector<Token> h = base_tokenize(hyp_nt);
    report.wer = wer_from_tokens(r, h);
  }
  SplitRates split = split_metrics(ref_nt, hyp_nt);
  report.cer_cn = split.cer_cn;
  report.cer_oth = split.cer_oth;
  report.wer_cn = split.wer_cn;
  report.wer_oth = split.wer_oth;
  if (ctx.lexicon && !ctx.segmenters.empty()) {
    IerScore score = ier(ref_nt, hyp_nt, *ctx.lexicon, ctx.segmenters);
    report.ier = score.value;
    report.ier_components = std::move(score.components);
  }
  return report;
}

// Corpus-level roll-up: micro-averaged rates, unweighted IER mean over the
// samples that have one. Output is independent of input order.
inline MetricReport aggregate(std::span<const MetricReport> reports) {
  if (reports.empty()) throw EmptyInputError("aggregate needs at least one report");

  MetricReport out;
  auto add = [](std::optional<Rate>& acc, const std::optional<Rate>& r) {
    if (!r) return;
    if (!acc) acc = Rate{0, 0};
    acc->errors += r->errors;
    acc->total += r->total;
  };
  std::vector<double> ier_values;
  std::map<std::string, std::vector<double>> component_values;
  for (const MetricReport& r : reports) {
    out.cer.errors += r.cer.errors;
    out.cer.total += r.cer.total;
    out.wer.errors += r.wer.errors;
    out.wer.total += r.wer.total;
    add(out.cer_cn, r.cer_cn);
    add(out.cer_oth, r.cer_oth);
    add(out.wer_cn, r.wer_cn);
    add(out.wer_oth, r.wer_oth);
    if (r.ier) ier_values.push_back(*r.ier);
    for (const IerComponent& c : r.ier_components) component_values[c.segmenter].push_back(c.value);
  }
  // Sort before summing so double rounding cannot depend on input order.
  if (!ier_values.empty()) {
    std::sort(ier_values.begin(), ier_values.end());
    double sum = 0.0;
    for (double v : ier_values) sum += v;
    out.ier = sum / static_cast<double>(ier_values.size());
  }
  for (auto& [name, values] : component_values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    IerComponent c;
    c.segmenter = name;
    c.value = sum / static_cast<double>(values.size());
    out.ier_components.push_back(std::move(c));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Rate& r) {
  return nlohmann::ordered_json{{"errors", r.errors}, {"total", r.total}, {"value", r.value()}};
}

inline nlohmann::ordered_json to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["cer"] = to_json(r.cer);
  j["wer"] = to_json(r.wer);
  if (r.cer_cn) j["cer_cn"] = to_json(*r.cer_cn);
  if (r.cer_oth) j["cer_oth"] = to_json(*r.cer_oth);
  if (r.wer_cn) j["wer_cn"] = to_json(*r.wer_cn);
  if (r.wer_oth) j["wer_oth"] = to_json(*r.wer_oth);
  if (r.ier) {
    j["ier"] = *r.ier;
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const IerComponent& c : r.ier_components)
      comps.push_back({{"segmenter", c.segmenter}, {"value", c.value}});
    j["ier_components"] = comps;
  }
  return j;
}

// Per-sample audit trace: enough structure (tokens, alignment, units,
// indicator flags) for a human to re-derive every reported number by hand.
inline nlohmann::ordered_json audit_trace(std::string_view id, std::string_view ref,
                                          std::string_view hyp, const EvalContext& ctx) {
  NormalizedText ref_nt = normalize(ref, ctx.policy);
  NormalizedText hyp_nt = normalize(hyp, ctx.policy);
  if (ref_nt.normalized.empty()) throw EmptyReferenceError();
  std::vector<Token> ref_tokens = base_tokenize(ref_nt);
  std::vector<Token> hyp_tokens = base_tokenize(hyp_nt);

  nlohmann::ordered_json j;
  j["id"] = std::string(id);
  j["ref"] = std::string(ref);
  j["hyp"] = std::string(hyp);
  j["ref_normalized"] = ref_nt.normalized;
  j["hyp_normalized"] = hyp_nt.normalized;

  auto token_list = [](const std::vector<Token>& toks) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Token& t : toks) arr.push_back(t.text);
    return arr;
  };
  j["ref_tokens"] = token_list(ref_tokens);
  j["hyp_tokens"] = token_list(hyp_tokens);

  Alignment a = align(std::span<const Token>(ref_tokens), std::span<const Token>(hyp_tokens),
                      [](const Token& x, const Token& y) { return x.text == y.text; });
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (const EditOp& op : a.ops) {
    nlohmann::ordered_json o;
    o["op"] = to_string(op.kind);
    if (op.ref_index != EditOp::npos) {
      o["ref_index"] = op.ref_index;
      o["ref"] = ref_tokens[op.ref_index].text;
    }
    if (op.hyp_index != EditOp::npos) {
      o["hyp_index"] = op.hyp_index;
      o["hyp"] = hyp_tokens[op.hyp_index].text;
    }
    ops.push_back(std::move(o));
  }
  j["token_alignment"] = ops;

  if (ctx.lexicon && !ctx.segmenters.empty()) {
    nlohmann::ordered_json segs = nlohmann::ordered_json::array();
    for (Segmenter* seg : ctx.segmenters) {
      UnitSequence units = partition_units(ref_nt, ref_tokens, ctx.lexicon, *seg);
      UnitErrorFlags flags = unit_errors(units, ref_tokens.size(), a);
      nlohmann::ordered_json unit_arr = nlohmann::ordered_json::array();
      for (std::size_t u = 0; u < units.units.size(); ++u) {
        const Unit& unit = units.units[u];
        unit_arr.push_back({{"text", unit.text},
                            {"kind", to_string(unit.kind)},
                            {"token_begin", unit.token_begin},
                            {"token_end", unit.token_end},
                            {"error", static_cast<bool>(flags.flagged[u])}});
      }
      segs.push_back({{"segmenter", seg->id().name},
                      {"units", unit_arr},
                      {"word_errors", flags.word_errors},
                      {"char_errors", flags.char_errors},
                      {"keyword_errors", flags.keyword_errors},
                      {"total_units", units.total()}});
    }
    j["segmentations"] = segs;
  }

  j["report"] = to_json(evaluate_pair(ref, hyp, ctx));
  return j;
}

}  // namespace asrpipe

#endif  // ASRPIPE_METRICS_HPP
